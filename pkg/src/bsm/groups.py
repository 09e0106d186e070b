"""Groups, elements and homomorphisms for two exact backends.

``FiniteGroup`` stores a multiplication table; elements are indices.
``AbelianGroup`` is Z^r + Z/d_1 + ... + Z/d_k with d_i | d_{i+1};
elements are integer tuples with torsion coordinates reduced.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from math import gcd, prod
from typing import Iterable, Sequence

from . import intlinalg as il


class GroupError(ValueError):
    """Malformed group, element or homomorphism."""


class FiniteGroup:
    kind = "finite_table"

    def __init__(self, table: Sequence[Sequence[int]], check: bool = True):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(self.table)
        self.n = n
        if n == 0:
            raise GroupError("empty multiplication table")
        for r, row in enumerate(self.table):
            if len(row) != n:
                raise GroupError(f"row {r} has length {len(row)}, expected {n}")
            if sorted(row) != list(range(n)):
                raise GroupError(f"row {r} is not a permutation of 0..{n - 1}")
        for c in range(n):
            if sorted(self.table[r][c] for r in range(n)) != list(range(n)):
                raise GroupError(f"column {c} is not a permutation of 0..{n - 1}")
        ident = [e for e in range(n) if all(self.table[e][x] == x == self.table[x][e] for x in range(n))]
        if not ident:
            raise GroupError("table has no two-sided identity")
        self.identity = ident[0]
        self.inverses = tuple(self.table[x].index(self.identity) for x in range(n))
        if check:
            self._check_associative()
        self._gens = None

    def _check_associative(self):
        t = self.table
        n = self.n
        if n <= 64:
            triples: Iterable = product(range(n), repeat=3)
        else:
            rng = random.Random(n)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(10 * n * n))
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise GroupError(f"table is not associative at ({a}, {b}, {c})")

    # element protocol
    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"FiniteGroup(order={self.n})"

    @property
    def one(self) -> int:
        return self.identity

    @property
    def finite(self) -> bool:
        return True

    def order(self) -> int:
        return self.n

    def elements(self) -> list[int]:
        return list(range(self.n))

    def contains(self, x) -> bool:
        return isinstance(x, int) and not isinstance(x, bool) and 0 <= x < self.n

    def normalize(self, x) -> int:
        if isinstance(x, (list, tuple)) or not self.contains(x):
            raise GroupError(f"{x!r} is not an element of a group of order {self.n}")
        return x

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        r = self.identity
        for _ in range(k):
            r = self.table[r][a]
        return r

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(self.n) for b in range(a))

    def center(self) -> list[int]:
        t = self.table
        return [z for z in range(self.n) if all(t[z][x] == t[x][z] for x in range(self.n))]

    def generators(self) -> list[int]:
        """Deterministic small generating set (greedy by element order)."""
        if self._gens is None:
            gens: list[int] = []
            span = {self.identity}
            cands = sorted(range(self.n), key=lambda x: (-self.element_order(x), x))
            for x in cands:
                if x not in span:
                    gens.append(x)
                    span = _closure(self, gens)
                if len(span) == self.n:
                    break
            self._gens = gens
        return list(self._gens)

    def encode(self, x) -> int:
        return x

    def decode(self, raw) -> int:
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise GroupError(f"expected an element index, got {raw!r}")
        return self.normalize(raw)

    def invariants_text(self) -> str:
        return f"finite group of order {self.n}"

    def signature(self):
        """Cheap isomorphism invariant used for pruning."""
        return ("finite", self.n, tuple(sorted(self.element_order(x) for x in range(self.n))))


class AbelianGroup:
    kind = "fg_abelian"

    def __init__(self, free_rank: int, torsion: Sequence[int] = ()):
        if free_rank < 0:
            raise GroupError("free rank must be non-negative")
        torsion = tuple(int(d) for d in torsion)
        for d in torsion:
            if d < 2:
                raise GroupError(f"torsion coefficient {d} must be at least 2")
        for a, b in zip(torsion, torsion[1:]):
            if b % a:
                raise GroupError(f"torsion {list(torsion)} is not a divisor chain ({a} does not divide {b})")
        self.free_rank = free_rank
        self.torsion = torsion
        self.moduli = (0,) * free_rank + torsion
        self.dim = len(self.moduli)

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.moduli == other.moduli

    def __hash__(self):
        return hash(("ab", self.moduli))

    def __repr__(self):
        return f"AbelianGroup({self.free_rank}, {list(self.torsion)})"

    @property
    def one(self) -> tuple:
        return (0,) * self.dim

    @property
    def identity(self) -> tuple:
        return self.one

    @property
    def finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | None:
        return prod(self.torsion) if self.finite else None

    def elements(self) -> list[tuple]:
        if not self.finite:
            raise GroupError("cannot list the elements of an infinite group")
        return [tuple(x) for x in product(*(range(d) for d in self.torsion))]

    def contains(self, x) -> bool:
        if not isinstance(x, tuple) or len(x) != self.dim:
            return False
        return all(isinstance(c, int) and (m == 0 or 0 <= c < m) for c, m in zip(x, self.moduli))

    def normalize(self, x) -> tuple:
        if isinstance(x, int) and not isinstance(x, bool) and self.dim == 1:
            x = (x,)
        if not isinstance(x, (list, tuple)) or len(x) != self.dim:
            raise GroupError(f"{x!r} is not a vector of length {self.dim}")
        return tuple(int(c) % m if m else int(c) for c, m in zip(x, self.moduli))

    def mul(self, a, b) -> tuple:
        return tuple((x + y) % m if m else x + y for x, y, m in zip(a, b, self.moduli))

    def inv(self, a) -> tuple:
        return tuple((-x) % m if m else -x for x, m in zip(a, self.moduli))

    def power(self, a, k: int) -> tuple:
        return self.normalize([k * x for x in a])

    def element_order(self, a) -> int:
        """Order of a; 0 for elements of infinite order."""
        if any(a[: self.free_rank]):
            return 0
        k = 1
        for x, m in zip(a[self.free_rank:], self.torsion):
            k = k * (m // gcd(x, m)) // gcd(k, m // gcd(x, m))
        return k

    def is_abelian(self) -> bool:
        return True

    def center(self) -> list[tuple]:
        return self.elements()

    def generators(self) -> list[tuple]:
        return [tuple(int(i == j) for j in range(self.dim)) for i in range(self.dim)]

    def encode(self, x) -> list[int]:
        return list(x)

    def decode(self, raw) -> tuple:
        if isinstance(raw, int) and not isinstance(raw, bool) and self.dim == 1:
            raw = [raw]
        if not isinstance(raw, list) or any(isinstance(c, bool) or not isinstance(c, int) for c in raw):
            raise GroupError(f"expected an integer vector, got {raw!r}")
        if len(raw) != self.dim:
            raise GroupError(f"expected a vector of length {self.dim}, got {raw!r}")
        for c, m in zip(raw, self.moduli):
            if m and not 0 <= c < m:
                raise GroupError(f"torsion coordinate {c} not reduced mod {m}")
        return tuple(raw)

    def invariants_text(self) -> str:
        parts = ["Z"] * self.free_rank + [f"Z{d}" for d in self.torsion]
        return " x ".join(parts) if parts else "1"

    def signature(self):
        if self.finite:
            return ("finite", self.order(), tuple(sorted(self.element_order(x) for x in self.elements())))
        return ("abelian", self.moduli)


Group = FiniteGroup | AbelianGroup


def trivial_group() -> AbelianGroup:
    return AbelianGroup(0, ())


def cyclic_table(n: int) -> FiniteGroup:
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)])


def direct_product_table(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    m = h.n
    return FiniteGroup([[g.mul(a // m, b // m) * m + h.mul(a % m, b % m) for b in range(g.n * m)] for a in range(g.n * m)])


def symmetric_group_table(k: int) -> FiniteGroup:
    """S_k on permutations listed lexicographically; product is (p*q)(x) = p(q(x))."""
    from itertools import permutations
    perms = list(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    return FiniteGroup([[index[tuple(p[q[x]] for x in range(k))] for q in perms] for p in perms])


def _closure(g, gens) -> set:
    span = {g.one}
    frontier = [g.one]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = g.mul(x, s)
                if y not in span:
                    span.add(y)
                    nxt.append(y)
        frontier = nxt
    return span


def is_finite(g) -> bool:
    return g.finite


def same_group(a, b) -> bool:
    return a is b or a == b


# homomorphisms ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Hom:
    """A homomorphism.

    For a finite-table source ``data`` is the image of every element; for
    an abelian source it is the image of each canonical generator.
    """

    source: Group
    target: Group
    data: tuple

    def __post_init__(self):
        object.__setattr__(self, "data", tuple(self.target.normalize(y) for y in self.data))
        need = self.source.n if isinstance(self.source, FiniteGroup) else self.source.dim
        if len(self.data) != need:
            raise GroupError(f"homomorphism needs {need} images, got {len(self.data)}")

    @classmethod
    def checked(cls, source, target, data) -> "Hom":
        f = cls(source, target, tuple(data))
        bad = hom_defects(f)
        if bad:
            raise GroupError(bad[0])
        return f

    @classmethod
    def from_matrix(cls, source: AbelianGroup, target: AbelianGroup, matrix) -> "Hom":
        cols = [tuple(matrix[i][j] for i in range(target.dim)) for j in range(source.dim)]
        return cls.checked(source, target, cols)

    @classmethod
    def from_function(cls, source, target, fn) -> "Hom":
        if isinstance(source, FiniteGroup):
            return cls.checked(source, target, [fn(x) for x in range(source.n)])
        return cls.checked(source, target, [fn(g) for g in source.generators()])

    def __call__(self, x):
        return hom_apply(self, x)

    def matrix(self) -> list[list[int]]:
        """Integer matrix (target rows x source columns); abelian groups only."""
        if not isinstance(self.source, AbelianGroup) or not isinstance(self.target, AbelianGroup):
            raise GroupError("matrix form needs abelian source and target")
        return [[self.data[j][i] for j in range(self.source.dim)] for i in range(self.target.dim)]

    def key(self) -> tuple:
        return tuple(self.data)

    def __eq__(self, other):
        return (
            isinstance(other, Hom)
            and same_group(self.source, other.source)
            and same_group(self.target, other.target)
            and self.data == other.data
        )

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        return f"Hom({self.source!r} -> {self.target!r}, {list(self.data)})"


def hom_defects(f: Hom, limit: int = 1) -> list[str]:
    """Violations of the homomorphism property (empty when f is a hom)."""
    s, t = f.source, f.target
    out: list[str] = []
    if isinstance(s, FiniteGroup):
        if f.data[s.identity] != t.one:
            out.append(f"identity {s.identity} maps to {f.data[s.identity]!r}, not the identity")
        n = s.n
        if n <= 64:
            pairs: Iterable = product(range(n), repeat=2)
        else:
            rng = random.Random(n)
            pairs = ((rng.randrange(n), rng.randrange(n)) for _ in range(10 * n * n))
        for a, b in pairs:
            if len(out) >= limit:
                break
            if f.data[s.mul(a, b)] != t.mul(f.data[a], f.data[b]):
                out.append(f"not multiplicative at pair ({a}, {b}): image of product {f.data[s.mul(a, b)]!r} "
                           f"!= {t.mul(f.data[a], f.data[b])!r}")
        return out
    # abelian source: images of torsion generators must have compatible
    # order, and all images must commute
    imgs = f.data
    for k, d in enumerate(s.moduli):
        if d and t.power(imgs[k], d) != t.one:
            out.append(f"generator {k} has order dividing {d} but its image {imgs[k]!r} does not")
    if not t.is_abelian():
        for a in range(len(imgs)):
            for b in range(a):
                if t.mul(imgs[a], imgs[b]) != t.mul(imgs[b], imgs[a]):
                    out.append(f"images of generators {b} and {a} do not commute")
    return out[:limit] if limit else out


def hom_apply(f: Hom, x):
    s = f.source
    if not s.contains(x):
        raise GroupError(f"{x!r} is not an element of the source group {s!r}")
    if isinstance(s, FiniteGroup):
        return f.data[x]
    t = f.target
    if isinstance(t, AbelianGroup):
        acc = [0] * t.dim
        for c, img in zip(x, f.data):
            if c:
                for i in range(t.dim):
                    acc[i] += c * img[i]
        return t.normalize(acc)
    r = t.one
    for c, img in zip(x, f.data):
        if c:
            r = t.mul(r, t.power(img, c))
    return r


def hom_compose(f: Hom, g: Hom) -> Hom:
    """f o g."""
    if not same_group(g.target, f.source):
        raise GroupError("cannot compose: target of the inner map is not the source of the outer map")
    if isinstance(g.source, FiniteGroup):
        return Hom(g.source, f.target, tuple(f.data[y] if isinstance(f.source, FiniteGroup) else hom_apply(f, y) for y in g.data))
    return Hom(g.source, f.target, tuple(hom_apply(f, y) for y in g.data))


def identity_hom(g) -> Hom:
    if isinstance(g, FiniteGroup):
        return Hom(g, g, tuple(range(g.n)))
    return Hom(g, g, tuple(g.generators()))


def trivial_hom(s, t) -> Hom:
    n = s.n if isinstance(s, FiniteGroup) else s.dim
    return Hom(s, t, (t.one,) * n)


def homs_equal(f: Hom, g: Hom) -> bool:
    return f == g


def conjugation_aut(g, x) -> Hom:
    """The inner automorphism y -> x y x^-1."""
    x = g.normalize(x)
    if g.is_abelian():
        return identity_hom(g)
    xi = g.inv(x)
    return Hom(g, g, tuple(g.mul(g.mul(x, y), xi) for y in range(g.n)))


def conj(g, x, y):
    """x y x^-1 in g."""
    return g.mul(g.mul(x, y), g.inv(x))


def is_isomorphism(f: Hom) -> bool:
    s, t = f.source, f.target
    if s.finite != t.finite:
        return False
    if s.finite:
        if s.order() != t.order():
            return False
        return len({hom_apply(f, x) for x in s.elements()}) == s.order()
    if not isinstance(t, AbelianGroup) or s.moduli != t.moduli:
        return False
    return _surjective(f)


def _surjective(f: Hom) -> bool:
    t = f.target
    m = f.matrix()
    aug = [row + [t.moduli[i] if j == i else 0 for j in range(t.dim)] for i, row in enumerate(m)]
    if t.dim == 0:
        return True
    return all(x == 1 for x in il.invariant_factors(aug)) and len(il.invariant_factors(aug)) == t.dim


def hom_inverse(f: Hom) -> Hom:
    s, t = f.source, f.target
    if s.finite:
        back = {}
        for x in s.elements():
            back[hom_apply(f, x)] = x
        if len(back) != s.order() or t.order() != s.order():
            raise GroupError("map is not a bijection")
        if isinstance(t, FiniteGroup):
            return Hom(t, s, tuple(back[y] for y in range(t.n)))
        return Hom(t, s, tuple(back[g] for g in t.generators()))
    if not is_isomorphism(f):
        raise GroupError("map is not an isomorphism")
    # solve f(x) = e_k for each canonical generator of the target
    m = f.matrix()
    cols = []
    for k in range(t.dim):
        rows = m
        rhs = [int(i == k) for i in range(t.dim)]
        x, _ = il.solve_congruences(rows, rhs, list(t.moduli), s.dim)
        if x is None:
            raise GroupError("map is not surjective")
        cols.append(s.normalize(x))
    return Hom(t, s, tuple(cols))


# constrained isomorphism search ----------------------------------------


@dataclass(frozen=True)
class Intertwine:
    """Constraint a o pre = post o a."""

    pre: Hom
    post: Hom


@dataclass(frozen=True)
class Pin:
    """Constraint a(x) = y."""

    x: object
    y: object


@dataclass
class IsoSolutionSet:
    solutions: list[Hom]
    complete: bool = True
    bound: int | None = None

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self):
        return len(self.solutions)


DEFAULT_BOUND = 8


def _satisfies(a: Hom, constraints) -> bool:
    for c in constraints:
        if isinstance(c, Pin):
            if hom_apply(a, c.x) != c.y:
                return False
        else:
            if hom_compose(a, c.pre) != hom_compose(c.post, a):
                return False
    return True


def extend_to_hom(g1, g2, gens: Sequence, imgs: Sequence) -> dict | None:
    """Element map of the hom sending gens to imgs, or None if none exists."""
    fmap = {g1.one: g2.one}
    frontier = [g1.one]
    while frontier:
        nxt = []
        for x in frontier:
            fx = fmap[x]
            for s, t in zip(gens, imgs):
                y = g1.mul(x, s)
                fy = g2.mul(fx, t)
                old = fmap.get(y)
                if old is None:
                    fmap[y] = fy
                    nxt.append(y)
                elif old != fy:
                    return None
        frontier = nxt
    # consistency of the element map as a hom on all pairs
    for x, fx in fmap.items():
        for s, t in zip(gens, imgs):
            if fmap[g1.mul(s, x)] != g2.mul(t, fx):
                return None
    return fmap


def _finite_isos(g1, g2, constraints) -> list[Hom]:
    if g1.order() != g2.order():
        return []
    gens = g1.generators()
    pins = {c.x: c.y for c in constraints if isinstance(c, Pin)}
    cands = []
    elts2 = g2.elements()
    ord2 = {y: g2.element_order(y) for y in elts2}
    for s in gens:
        o = g1.element_order(s)
        if s in pins:
            cands.append([pins[s]] if ord2.get(pins[s]) == o else [])
        else:
            cands.append([y for y in elts2 if ord2[y] == o])
    out = []
    n = g1.order()
    for imgs in product(*cands):
        fmap = extend_to_hom(g1, g2, gens, imgs)
        if fmap is None or len(fmap) != n or len(set(fmap.values())) != n:
            continue
        if isinstance(g1, FiniteGroup):
            a = Hom(g1, g2, tuple(fmap[x] for x in range(g1.n)))
        else:
            a = Hom(g1, g2, tuple(fmap[x] for x in g1.generators()))
        if _satisfies(a, constraints):
            out.append(a)
    out.sort(key=lambda h: repr(h.data))
    return out


def _abelian_isos(g1: AbelianGroup, g2: AbelianGroup, constraints, bound: int) -> IsoSolutionSet:
    if g1.moduli != g2.moduli:
        return IsoSolutionSet([], True, bound)
    n = g1.dim
    if n == 0:
        a = identity_hom(g1) if g1 is g2 else Hom(g1, g2, ())
        return IsoSolutionSet([a] if _satisfies(a, constraints) else [], True, bound)
    nv = n * n  # unknown A[i][k] at index i*n+k

    def var(i, k):
        return i * n + k

    rows, rhs, mods = [], [], []
    m1, m2 = g1.moduli, g2.moduli
    # well-definedness on torsion generators
    for k in range(n):
        if m1[k]:
            for i in range(n):
                r = [0] * nv
                r[var(i, k)] = m1[k]
                rows.append(r)
                rhs.append(0)
                mods.append(m2[i])
    for c in constraints:
        if isinstance(c, Pin):
            x = g1.normalize(c.x)
            y = g2.normalize(c.y)
            for i in range(n):
                r = [0] * nv
                for k in range(n):
                    r[var(i, k)] += x[k]
                rows.append(r)
                rhs.append(y[i])
                mods.append(m2[i])
        else:
            p = c.pre.matrix()
            q = c.post.matrix()
            for i in range(n):
                for j in range(n):
                    r = [0] * nv
                    for k in range(n):
                        r[var(i, k)] += p[k][j]
                        r[var(k, j)] -= q[i][k]
                    rows.append(r)
                    rhs.append(0)
                    mods.append(m2[i])
    x0, gens = il.solve_congruences(rows, rhs, mods, nv)
    if x0 is None:
        return IsoSolutionSet([], True, bound)
    # torsion rows live in [0, d); free rows bounded by +-bound
    lo, hi = [], []
    for i in range(n):
        for k in range(n):
            if m2[i]:
                lo.append(0)
                hi.append(m2[i] - 1)
            else:
                lo.append(-bound)
                hi.append(bound)
    # reduce the particular solution into range on torsion rows
    basis = il.hermite_basis(gens + [[m2[i] if t == var(i, k) else 0 for t in range(nv)]
                                      for i in range(n) for k in range(n) if m2[i]], nv)
    x0 = list(il.reduce_mod(x0, basis))
    r = g1.free_rank
    ff = [var(i, k) for i in range(r) for k in range(r)]
    fixed_ff = all(b[t] == 0 for b in basis for t in ff)
    if r <= 1:
        complete = bound >= 1 or r == 0
    else:
        complete = fixed_ff and all(-bound <= x0[t] <= bound for t in ff)
    # free rows must vanish on torsion columns
    sols = []
    for vec in il.enumerate_box(x0, basis, lo, hi):
        cols = tuple(tuple(vec[var(i, k)] for i in range(n)) for k in range(n))
        a = Hom(g1, g2, cols)
        if hom_defects(a):
            continue
        if is_isomorphism(a) and _satisfies(a, constraints):
            sols.append(a)
    sols.sort(key=lambda h: h.data)
    return IsoSolutionSet(sols, complete, bound)


def solve_isomorphisms(g1, g2, constraints: Sequence = (), bound: int = DEFAULT_BOUND) -> IsoSolutionSet:
    """Isomorphisms a: g1 -> g2 satisfying intertwining and pin constraints."""
    constraints = list(constraints)
    if g1.finite != g2.finite:
        return IsoSolutionSet([], True, bound)
    if isinstance(g1, AbelianGroup) and isinstance(g2, AbelianGroup):
        return _abelian_isos(g1, g2, constraints, bound)
    if g1.finite:
        return IsoSolutionSet(_finite_isos(g1, g2, constraints), True, bound)
    raise GroupError("unsupported pair of groups")


@dataclass
class AutDescription:
    group: object
    autos: list[Hom] | None
    table: FiniteGroup | None
    inner: list[bool] | None
    finite: bool
    generators: list[Hom] = field(default_factory=list)

    @property
    def order(self) -> int | None:
        return len(self.autos) if self.autos is not None else None


def automorphism_group(g, bound: int = DEFAULT_BOUND) -> AutDescription:
    if g.finite or (isinstance(g, AbelianGroup) and g.free_rank <= 1):
        autos = solve_isomorphisms(g, g, [], bound).solutions
        index = {a.data: i for i, a in enumerate(autos)}
        table = FiniteGroup([[index[hom_compose(a, b).data] for b in autos] for a in autos], check=False)
        if g.finite and isinstance(g, FiniteGroup):
            inner_keys = {conjugation_aut(g, x).data for x in range(g.n)}
        else:
            inner_keys = {identity_hom(g).data}
        return AutDescription(g, autos, table, [a.data in inner_keys for a in autos], True, list(autos))
    # infinite automorphism group: sign flips, transvections, torsion part
    r, n = g.free_rank, g.dim
    gens = []
    for i in range(r):
        m = il.identity(n)
        m[i][i] = -1
        gens.append(Hom.from_matrix(g, g, m))
    for i in range(r):
        for j in range(r):
            if i != j:
                m = il.identity(n)
                m[i][j] = 1
                gens.append(Hom.from_matrix(g, g, m))
    for i in range(r, n):
        for j in range(r):
            m = il.identity(n)
            m[i][j] = 1
            gens.append(Hom.from_matrix(g, g, m))
    if g.torsion:
        tg = AbelianGroup(0, g.torsion)
        for a in solve_isomorphisms(tg, tg).solutions:
            m = il.identity(n)
            for i in range(len(g.torsion)):
                for j in range(len(g.torsion)):
                    m[r + i][r + j] = a.data[j][i]
            gens.append(Hom.from_matrix(g, g, m))
    return AutDescription(g, None, None, None, False, gens)
