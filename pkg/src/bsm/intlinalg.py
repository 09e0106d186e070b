"""Exact integer linear algebra on plain nested lists.

Smith and Hermite normal forms with transforms, integer kernels, solving
linear Diophantine systems and canonical reduction modulo a lattice.
Matrices are lists of rows of Python ints.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], inner: int | None = None) -> list[list]:
    """Matrix product that also works for empty shapes.

    ``inner`` gives the shared dimension when ``a`` has no rows and the
    column count of ``b`` cannot be read off.
    """
    m = len(a)
    k = len(b) if inner is None else inner
    n = len(b[0]) if b else 0
    out = [[0] * n for _ in range(m)]
    for i in range(m):
        row = a[i]
        oi = out[i]
        for t in range(k):
            x = row[t]
            if x:
                bt = b[t]
                for j in range(n):
                    oi[j] += x * bt[j]
    return out


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (D, U, V) with U*A*V = D diagonal, U and V unimodular.

    The diagonal entries are non-negative and each divides the next.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, row)) for row in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        if q:
            rd, rs = d[dst], d[src]
            for k in range(n):
                rd[k] += q * rs[k]
            ud, us = u[dst], u[src]
            for k in range(m):
                ud[k] += q * us[k]

    def add_col(dst, src, q):
        if q:
            for row in d:
                row[dst] += q * row[src]
            for row in v:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = d[i][j]
                    if x and (best is None or abs(x) < abs(d[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return d, u, v
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // p))
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // p))
                    dirty = dirty or d[t][j] != 0
            if dirty:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                add_row(t, bad, 1)
                continue
            if p < 0:
                d[t] = [-x for x in d[t]]
                u[t] = [-x for x in u[t]]
            break
    return d, u, v


def invariant_factors(a: Sequence[Sequence[int]]) -> list[int]:
    d, _, _ = smith_normal_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def kernel_basis(a: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Basis of the integer kernel {x : A x = 0} as a list of vectors."""
    if not a:
        return [list(r) for r in identity(ncols)]
    d, _, v = smith_normal_form(a)
    rank = sum(1 for i in range(min(len(d), ncols)) if d[i][i])
    return [[v[r][c] for r in range(ncols)] for c in range(rank, ncols)]


def solve(a: Sequence[Sequence[int]], b: Sequence[int], ncols: int) -> tuple[list[int] | None, list[list[int]]]:
    """Integer solutions of A x = b.

    Returns (particular, kernel basis); particular is None when there is
    no integer solution.
    """
    m = len(a)
    if m == 0:
        return [0] * ncols, [list(r) for r in identity(ncols)]
    d, u, v = smith_normal_form(a)
    c = matvec(u, b)
    y = [0] * ncols
    for i in range(m):
        dii = d[i][i] if i < ncols else 0
        if dii == 0:
            if c[i] != 0:
                return None, []
        else:
            if c[i] % dii:
                return None, []
            y[i] = c[i] // dii
    x = matvec(v, y)
    rank = sum(1 for i in range(min(m, ncols)) if d[i][i])
    kern = [[v[r][col] for r in range(ncols)] for col in range(rank, ncols)]
    return x, kern


def solve_congruences(rows: Sequence[Sequence[int]], rhs: Sequence[int], moduli: Sequence[int], nvars: int):
    """Solve sum_k rows[i][k] x_k = rhs[i] (mod moduli[i]); modulus 0 means exact.

    Returns (particular, lattice generators) over the x variables, or
    (None, []) when unsolvable.  Slack variables absorb the moduli.
    """
    slack = [i for i, mod in enumerate(moduli) if mod]
    width = nvars + len(slack)
    big = []
    for i, row in enumerate(rows):
        r = list(row) + [0] * len(slack)
        if moduli[i]:
            r[nvars + slack.index(i)] = -moduli[i]
        big.append(r)
    x, kern = solve(big, list(rhs), width)
    if x is None:
        return None, []
    return x[:nvars], [k[:nvars] for k in kern]


def hermite_basis(vectors: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    """Row echelon (Hermite) basis of the lattice spanned by ``vectors``.

    Each basis row has a positive pivot, zeros before it, and pivots
    strictly increase; entries above a pivot are reduced into [0, pivot).
    """
    rows = [list(map(int, v)) for v in vectors if any(v)]
    basis: list[list[int]] = []
    col = 0
    while rows and col < n:
        live = [r for r in rows if r[col]]
        rest = [r for r in rows if not r[col]]
        if not live:
            col += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            p = live[0]
            nxt = [p]
            for r in live[1:]:
                q = r[col] // p[col]
                r = [x - q * y for x, y in zip(r, p)]
                if r[col]:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        p = live[0]
        if p[col] < 0:
            p = [-x for x in p]
        basis.append(p)
        rows = rest
        col += 1
    # reduce above pivots
    for t in range(len(basis)):
        pc = pivot(basis[t])
        for s in range(t):
            q = basis[s][pc] // basis[t][pc]
            if q:
                basis[s] = [x - q * y for x, y in zip(basis[s], basis[t])]
    return basis


def pivot(row: Sequence[int]) -> int:
    for i, x in enumerate(row):
        if x:
            return i
    return -1


def reduce_mod(v: Sequence[int], basis: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Canonical representative of v + L for an echelon basis of L."""
    w = list(v)
    for b in basis:
        pc = pivot(b)
        q = w[pc] // b[pc]
        if q:
            w = [x - q * y for x, y in zip(w, b)]
    return tuple(w)


def in_lattice(v: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    return not any(reduce_mod(v, basis))


def enumerate_box(base: Sequence[int], basis: Sequence[Sequence[int]], lo: Sequence[int], hi: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All points of base + L with lo <= x <= hi coordinatewise.

    ``basis`` must be in echelon form (see hermite_basis).
    """
    n = len(base)
    pivots = [pivot(b) for b in basis]
    bounds = pivots[1:] + [n]

    def ok(x, a, b):
        return all(lo[k] <= x[k] <= hi[k] for k in range(a, b))

    start = pivots[0] if pivots else n
    if not ok(base, 0, start):
        return

    def rec(t, x):
        if t == len(basis):
            yield tuple(x)
            return
        b, pc = basis[t], pivots[t]
        p = b[pc]
        # x[pc] + c*p in [lo, hi]
        cmin = -((x[pc] - lo[pc]) // p)
        cmax = (hi[pc] - x[pc]) // p
        for c in range(cmin, cmax + 1):
            y = [xi + c * bi for xi, bi in zip(x, b)]
            if ok(y, pc, bounds[t]):
                yield from rec(t + 1, y)

    yield from rec(0, list(base))


def lattice_meet_coords(rows: Sequence[Sequence[int]], keep: Sequence[int], n: int) -> list[list[int]]:
    """Lattice of vectors in span(rows) supported on the coordinates ``keep``.

    Returned vectors are restricted to ``keep`` (in that order), in echelon form.
    """
    others = [j for j in range(n) if j not in set(keep)]
    if not rows:
        return []
    # combinations c with sum c_r rows[r][j] = 0 for j in others
    if others:
        a = [[rows[r][j] for r in range(len(rows))] for j in others]
        comb = kernel_basis(a, len(rows))
    else:
        comb = [list(r) for r in identity(len(rows))]
    out = []
    for c in comb:
        out.append([sum(c[r] * rows[r][j] for r in range(len(rows))) for j in keep])
    return hermite_basis(out, len(keep))


# rational helpers -------------------------------------------------------

def qidentity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def qrank_basis(vectors: Sequence[Sequence], n: int) -> list[list[Fraction]]:
    """Row-reduced basis of the rational span of ``vectors``."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    basis: list[list[Fraction]] = []
    pivs: list[int] = []
    for r in rows:
        r = list(r)
        for b, pc in zip(basis, pivs):
            if r[pc]:
                f = r[pc] / b[pc]
                r = [x - f * y for x, y in zip(r, b)]
        pc = next((i for i, x in enumerate(r) if x), -1)
        if pc >= 0:
            basis.append(r)
            pivs.append(pc)
    return basis


def qinverse(a: Sequence[Sequence]) -> list[list[Fraction]] | None:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return None
        m[c], m[p] = m[p], m[c]
        f = m[c][c]
        m[c] = [x / f for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                g = m[r][c]
                m[r] = [x - g * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]
