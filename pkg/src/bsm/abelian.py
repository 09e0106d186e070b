"""Structure of an abelian group given by generators.

The group is only known through multiplication and a canonical key for
its elements.  An optional additive ``logmap`` (a homomorphism to a
rational vector space whose kernel is finite) lets the relation lattice
be found for infinite groups: relations are first taken modulo the
kernel of the log map, then the finite remainder is resolved exactly by
incremental orbit enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Sequence

from . import intlinalg as il

MAX_FINITE = 200_000


class StructureError(RuntimeError):
    """The relation search could not be completed."""


@dataclass
class AbelianStructure:
    """Z^m / R for m generators and relation lattice R (echelon rows)."""

    ngens: int
    relations: list[list[int]]

    def invariants(self) -> tuple[int, tuple[int, ...]]:
        """(free rank, torsion invariant factors > 1)."""
        return quotient_invariants(self.relations, self.ngens)

    def order_of(self, vec: Sequence[int]) -> int:
        """Order of the element with exponent vector vec; 0 if infinite."""
        # smallest k > 0 with k*vec in R: solve R^T c = k vec
        rows = self.relations
        m = self.ngens
        if not any(vec):
            return 1
        a = [[r[j] for r in rows] + [-vec[j]] for j in range(m)]
        kern = il.kernel_basis(a, len(rows) + 1)
        ks = [v[-1] for v in kern if v[-1]]
        if not ks:
            return 0
        from math import gcd
        g = 0
        for k in ks:
            g = gcd(g, k)
        return abs(g)

    def quotient(self, extra: Sequence[Sequence[int]]) -> "AbelianStructure":
        return AbelianStructure(self.ngens, il.hermite_basis(list(self.relations) + [list(e) for e in extra], self.ngens))

    def meet_coordinates(self, coords: Sequence[int]) -> list[list[int]]:
        """Relations supported on the given generator coordinates."""
        return il.lattice_meet_coords(self.relations, list(coords), self.ngens)


def quotient_invariants(relations, n: int) -> tuple[int, tuple[int, ...]]:
    if n == 0:
        return 0, ()
    if not relations:
        return n, ()
    diag = il.invariant_factors(relations)
    nonzero = [d for d in diag if d]
    free = n - len(nonzero)
    return free, tuple(d for d in nonzero if d > 1)


def find_relations(
    gens: Sequence,
    mul: Callable,
    inv: Callable,
    one,
    key: Callable,
    logmap: Callable | None = None,
) -> AbelianStructure:
    """Relation lattice of commuting generators ``gens``."""
    m = len(gens)
    if m == 0:
        return AbelianStructure(0, [])
    if logmap is None:
        r0 = il.identity(m)
    else:
        vecs = [logmap(g) for g in gens]
        dim = len(vecs[0])
        den = 1
        for v in vecs:
            for x in v:
                den = lcm(den, Fraction(x).denominator)
        a = [[int(Fraction(vecs[j][i]) * den) for j in range(m)] for i in range(dim)]
        r0 = il.kernel_basis(a, m) if dim else il.identity(m)

    def power(x, k):
        if k < 0:
            x, k = inv(x), -k
        result = one
        base = x
        while k:
            if k & 1:
                result = mul(result, base)
            base = mul(base, base)
            k >>= 1
        return result

    zs = []
    for r in r0:
        z = one
        for g, c in zip(gens, r):
            if c:
                z = mul(z, power(g, c))
        zs.append(z)
    # incremental enumeration of the finite subgroup generated by zs
    table = {key(one): (one, (0,) * len(zs))}
    rel_z = []
    for t, z in enumerate(zs):
        k, w = 1, z
        while key(w) not in table:
            w = mul(w, z)
            k += 1
            if k > MAX_FINITE:
                raise StructureError("element of the finite part has unexpectedly large order")
        _, coeff = table[key(w)]
        rel = [-c for c in coeff]
        rel[t] += k
        rel_z.append(rel)
        if k > 1:
            if len(table) * k > MAX_FINITE:
                raise StructureError("finite part too large to enumerate")
            new = {}
            for kk, (elt, coeff) in table.items():
                cur = elt
                for j in range(1, k):
                    cur = mul(cur, z)
                    c = list(coeff)
                    c[t] += j
                    new[key(cur)] = (cur, tuple(c))
            table.update(new)
    rels = []
    for u in rel_z:
        rels.append([sum(u[t] * r0[t][j] for t in range(len(zs))) for j in range(m)])
    return AbelianStructure(m, il.hermite_basis(rels, m))
