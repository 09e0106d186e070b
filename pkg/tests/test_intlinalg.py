from itertools import combinations
from math import gcd

from hypothesis import given, settings
from hypothesis import strategies as st

from bsm import intlinalg as il


def small_matrix(max_rows=4, max_cols=4, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


def det(a):
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    return sum((-1) ** j * a[0][j] * det([row[:j] + row[j + 1:] for row in a[1:]]) for j in range(n))


def determinantal_divisors(a):
    """gcd of all k x k minors, k = 1..min(m, n)."""
    m, n = len(a), len(a[0])
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, det([[a[i][j] for j in cols] for i in rows]))
        out.append(g)
    return out


@given(small_matrix())
@settings(max_examples=150, deadline=None)
def test_smith_form_transforms(a):
    d, u, v = il.smith_normal_form(a)
    assert il.matmul(il.matmul(u, a), v) == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    m, n = len(a), len(a[0])
    for i in range(m):
        for j in range(n):
            if i != j:
                assert d[i][j] == 0
    diag = [d[i][i] for i in range(min(m, n))]
    assert all(x >= 0 for x in diag)
    for x, y in zip(diag, diag[1:]):
        assert (y == 0) if x == 0 else (y % x == 0)


@given(small_matrix(3, 3, -4, 4))
@settings(max_examples=100, deadline=None)
def test_smith_diagonal_matches_minor_gcds(a):
    d, _, _ = il.smith_normal_form(a)
    diag = [d[i][i] for i in range(min(len(a), len(a[0])))]
    prods, p = [], 1
    for x in diag:
        p *= x
        prods.append(p)
    assert prods == determinantal_divisors(a)


def test_invariant_factors_known():
    assert il.invariant_factors([[2, 4], [6, 8]]) == [2, 4]
    assert il.invariant_factors([[1, 1], [0, 0]]) == [1, 0]


@given(small_matrix())
@settings(max_examples=100, deadline=None)
def test_kernel_basis_is_kernel(a):
    n = len(a[0])
    ker = il.kernel_basis(a, n)
    for v in ker:
        assert il.matvec(a, v) == [0] * len(a)
    d, _, _ = il.smith_normal_form(a)
    rank = sum(1 for i in range(min(len(a), n)) if d[i][i])
    assert len(ker) == n - rank


@given(small_matrix(3, 3), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
@settings(max_examples=100, deadline=None)
def test_solve_returns_solution(a, x):
    n = len(a[0])
    x = x[:n] + [0] * (n - len(x))
    b = il.matvec(a, x)
    sol, ker = il.solve(a, b, n)
    assert sol is not None
    assert il.matvec(a, sol) == b


def test_solve_unsolvable():
    sol, _ = il.solve([[2, 0], [0, 2]], [1, 0], 2)
    assert sol is None


def test_congruences():
    # 2x = 1 mod 5 -> x = 3 mod 5
    x, lattice = il.solve_congruences([[2]], [1], [5], 1)
    assert (2 * x[0] - 1) % 5 == 0
    assert il.hermite_basis(lattice, 1) == [[5]]
    assert il.solve_congruences([[2]], [1], [4], 1) == (None, [])


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), max_size=4),
       st.lists(st.integers(-9, 9), min_size=3, max_size=3),
       st.lists(st.integers(-3, 3), max_size=4))
@settings(max_examples=150, deadline=None)
def test_reduce_mod_is_canonical(vectors, v, coeffs):
    basis = il.hermite_basis(vectors, 3)
    shift = list(v)
    for c, b in zip(coeffs, basis):
        shift = [x + c * y for x, y in zip(shift, b)]
    assert il.reduce_mod(v, basis) == il.reduce_mod(shift, basis)
    diff = [x - y for x, y in zip(v, il.reduce_mod(v, basis))]
    assert il.in_lattice(diff, basis)


def test_hermite_basis_same_lattice():
    vecs = [[2, 4, 0], [0, 6, 3], [2, 10, 3]]
    basis = il.hermite_basis(vecs, 3)
    for v in vecs:
        assert il.in_lattice(v, basis)
    assert len(basis) == 2
    for row in basis:
        assert row[il.pivot(row)] > 0
