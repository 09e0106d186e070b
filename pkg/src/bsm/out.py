"""Outer automorphisms of discrete data: automorphisms modulo inner ones.

Two paths:

* all groups finite: every automorphism is enumerated, classes are orbits
  under right multiplication by inner automorphisms, and the quotient is
  returned with its multiplication table;
* abelian groups with infinite members: a class is determined by the
  graph map, the isotropy maps and the translation part (h's and
  cocycles) modulo the lattice of inner translations.  The group is
  described by generators and a relation lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm

from . import intlinalg as il
from .abelian import AbelianStructure, StructureError, find_relations
from .data import DiscreteData
from .groups import DEFAULT_BOUND, AbelianGroup, FiniteGroup
from .isos import (
    DiscreteDataIso,
    HolonomyIso,
    abelian_coords,
    compose_discrete_iso,
    identity_discrete_iso,
    inner_discrete_auto,
    invert_discrete_iso,
    target_side,
)
from .search import UnsupportedBackend, _box_points, find_discrete_isos, graph_maps, solve_edge

MAX_LOG_EXPONENT = 720


@dataclass
class OutAutDescription:
    """Automorphisms of a discrete datum modulo inner automorphisms.

    kind is "finite" (explicit table) or "abelian-family" (generators,
    relations).  ``complete`` is False when the underlying automorphism
    search was bounded.
    """

    gr: DiscreteData
    kind: str
    complete: bool
    representatives: list[DiscreteDataIso]
    table: list[list[int]] | None = None
    identity_index: int = 0
    structure: AbelianStructure | None = None
    abelian: bool | None = None
    notes: list[str] = field(default_factory=list)
    bound: int = DEFAULT_BOUND
    _keyer: object = None
    _generators: list = field(default_factory=list)

    # element operations on representatives
    def class_key(self, f: DiscreteDataIso):
        return self._keyer.key(f)

    def index_of(self, f: DiscreteDataIso) -> int:
        """Finite kind: index of the class of f in ``representatives``."""
        return self._keyer.index[self.class_key(f)]

    def mul(self, f: DiscreteDataIso, g: DiscreteDataIso) -> DiscreteDataIso:
        return compose_discrete_iso(f, g)

    def inv(self, f: DiscreteDataIso) -> DiscreteDataIso:
        return invert_discrete_iso(f)

    def one(self) -> DiscreteDataIso:
        return identity_discrete_iso(self.gr)

    def same_class(self, f, g) -> bool:
        return self.class_key(f) == self.class_key(g)

    @property
    def order(self) -> int | None:
        if self.kind == "finite":
            return len(self.representatives)
        if self.structure is not None:
            free, tors = self.structure.invariants()
            if free == 0:
                out = 1
                for d in tors:
                    out *= d
                return out
        return None

    def invariants(self):
        """(free rank, torsion invariants) when abelian and known, else None."""
        if not self.abelian:
            return None
        if self.kind == "finite":
            st = self.finite_structure()
            return st.invariants()
        return self.structure.invariants() if self.structure else None

    def finite_structure(self, extra: list[DiscreteDataIso] = ()) -> AbelianStructure:
        """Abelian structure on a generating set of class representatives plus ``extra``."""
        gens = finite_generators(self) + list(extra)
        return find_relations(gens, self.mul, self.inv, self.one(), self.class_key)

    def element_order(self, f) -> int:
        if self.kind == "finite":
            i = self.index_of(f)
            k, j = 1, i
            while j != self.identity_index:
                j = self.table[j][i]
                k += 1
            return k
        st = self.structure_with([f])
        return st.order_of([0] * (st.ngens - 1) + [1])

    def structure_with(self, extra: list[DiscreteDataIso]) -> AbelianStructure:
        if self.kind == "finite":
            return self.finite_structure(extra)
        return abelian_structure(self, self._generators + list(extra))

    def describe(self) -> str:
        if self.kind == "finite":
            inv = self.invariants()
            if inv is not None:
                return f"order {self.order}, abelian, {format_invariants(*inv)}"
            return f"order {self.order}, non-abelian"
        inv = self.invariants()
        if inv is not None:
            return f"abelian, {format_invariants(*inv)}" + ("" if self.complete else " (bounded search)")
        return "infinite, structure not determined"


def format_invariants(free: int, tors) -> str:
    parts = ["Z"] * free + [f"Z{d}" for d in tors]
    return " x ".join(parts) if parts else "trivial"


def finite_generators(out: OutAutDescription) -> list[DiscreteDataIso]:
    """Greedy generating set of the finite quotient, by class index."""
    n = len(out.representatives)
    tab = out.table
    span = {out.identity_index}
    gens = []
    for i in range(n):
        if i in span:
            continue
        gens.append(i)
        frontier = list(span)
        span = set(span)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = tab[x][g]
                    if y not in span:
                        span.add(y)
                        nxt.append(y)
            frontier = nxt
        if len(span) == n:
            break
    return [out.representatives[i] for i in gens]


# finite path ---------------------------------------------------------------


def inner_autos(gr: DiscreteData) -> list[DiscreteDataIso]:
    """All inner automorphisms (finite edge groups), deduplicated."""
    edges = list(gr.edges)
    seen = {}
    for alphas in product(*(gr.edge_H(e).elements() for e in edges)):
        f = inner_discrete_auto(gr, dict(zip(edges, alphas)))
        seen.setdefault(f.key(), f)
    return list(seen.values())


def _finite_out(gr: DiscreteData, bound: int) -> OutAutDescription:
    res = find_discrete_isos(gr, gr, bound)
    autos = res.isos
    inner = inner_autos(gr)
    cls: dict[tuple, int] = {}
    reps: list[DiscreteDataIso] = []
    for f in autos:
        k = f.key()
        if k in cls:
            continue
        c = len(reps)
        reps.append(f)
        for i in inner:
            g = compose_discrete_iso(f, i)
            cls[g.key()] = c
    if len(cls) != len(autos):
        raise RuntimeError("inner orbits are not contained in the automorphism set")
    table = [[cls[compose_discrete_iso(a, b).key()] for b in reps] for a in reps]
    ident = cls[identity_discrete_iso(gr).key()]
    keyer = _FiniteKeyer(cls)
    n = len(reps)
    abelian = all(table[i][j] == table[j][i] for i in range(n) for j in range(i))
    return OutAutDescription(gr, "finite", res.complete, reps, table, ident, None, abelian,
                             list(res.notes), bound, keyer)


class _FiniteKeyer:
    def __init__(self, cls):
        self.cls = cls
        self.index = {i: i for i in set(cls.values())}

    def key(self, f):
        return self.cls[f.key()]


# abelian path --------------------------------------------------------------


def _dim(g) -> int:
    return g.dim if isinstance(g, AbelianGroup) else 0


def _free(g) -> int:
    return g.free_rank if isinstance(g, AbelianGroup) else 0


def _moduli(g) -> tuple:
    return g.moduli if isinstance(g, AbelianGroup) else ()


def _vec(x) -> tuple:
    return tuple(x) if isinstance(x, tuple) else ()


class _Coords:
    """Ambient integer coordinates for the translation part of an automorphism."""

    def __init__(self, gr: DiscreteData):
        self.gr = gr
        self.edges = list(gr.edges)
        self.slots = sorted(gr.cocycle_slots())
        self.offset = {}
        n = 0
        moduli = []
        for e in self.edges:
            self.offset[("h", e)] = n
            H = gr.edge_H(e)
            n += _dim(H)
            moduli += list(_moduli(H))
        for sl in self.slots:
            self.offset[("g",) + sl] = n
            G = gr.vertex_group(sl[0])
            n += _dim(G)
            moduli += list(_moduli(G))
        self.n = n
        self.moduli = moduli
        self.free_mask = [m == 0 for m in moduli]

    def tau(self, f: DiscreteDataIso) -> list[int]:
        v = [0] * self.n
        for e in self.edges:
            o = self.offset[("h", f.edge_map[e])]
            for t, x in enumerate(_vec(f.edge_isos[e].h)):
                v[o + t] = x
        for (w, i, j), g in f.cocycles.items():
            o = self.offset[("g", f.vertex_map[w], f.edge_map[i], f.edge_map[j])]
            for t, x in enumerate(_vec(g)):
                v[o + t] = x
        return v


class _AbelianKeyer:
    def __init__(self, gr: DiscreteData, coords: _Coords, inner_basis):
        self.gr = gr
        self.coords = coords
        self.inner_basis = inner_basis

    def key(self, f: DiscreteDataIso):
        return (
            tuple(sorted(f.vertex_map.items())),
            tuple(sorted(f.edge_map.items())),
            f.reversing,
            tuple(f.edge_isos[e].iso.key() for e in sorted(f.edge_isos)),
            il.reduce_mod(self.coords.tau(f), self.inner_basis),
        )


def _inner_lattice(gr: DiscreteData, coords: _Coords) -> list[list[int]]:
    gens = []
    for e in coords.edges:
        H = gr.edge_H(e)
        for a in (H.generators() if isinstance(H, AbelianGroup) else []):
            alphas = {k: gr.edge_H(k).one for k in coords.edges}
            alphas[e] = a
            gens.append(coords.tau(inner_discrete_auto(gr, alphas)))
    for k, m in enumerate(coords.moduli):
        if m:
            gens.append([m if t == k else 0 for t in range(coords.n)])
    return il.hermite_basis(gens, coords.n)


def _lifts(gr: DiscreteData, bound: int):
    """Automorphisms with zero cocycles and particular h, one per admissible
    choice of graph map and isotropy maps; plus the translation generators."""
    lifts = []
    complete = True
    for reversing, vm, em in graph_maps(gr, gr):
        per_edge = []
        for e, k in em.items():
            es = solve_edge(gr.holonomy(e), gr.holonomy(k), reversing, bound)
            complete &= es.complete
            per_edge.append(es.solutions)
        edges = list(em)
        for combo in product(*per_edge):
            # abelian vertex groups: adjacent edges must induce the same map
            ok = True
            for v in gr.vertices:
                adj = gr.adjacent(v)
                s = gr.sign(v)
                maps = {combo[edges.index(e)].iso.side(s).key() for e in adj}
                if len(maps) > 1:
                    ok = False
                    break
            if not ok:
                continue
            hs = []
            for e, sol in zip(edges, combo):
                hs.append(sol.h0 if sol.h0 is not None else None)
            h_options = [[sol.h0] if sol.h0 is not None else list(sol.hs) for sol in combo]
            for hchoice in product(*h_options):
                isos = {e: HolonomyIso(sol.iso, h) for e, sol, h in zip(edges, combo, hchoice)}
                coc = {}
                for (v, i, j) in gr.cocycle_slots():
                    coc[(v, i, j)] = gr.vertex_group(vm[v]).one
                lifts.append(DiscreteDataIso(dict(vm), dict(em), reversing, isos, coc,
                                             {v: gr.sign(v) for v in gr.vertices}))
    return lifts, complete


def _translation_generators(gr: DiscreteData, bound: int) -> list[DiscreteDataIso]:
    ident = identity_discrete_iso(gr)
    out = []
    for e in gr.edges:
        hd = gr.holonomy(e)
        es = solve_edge(hd, hd, False, bound)
        for sol in es.solutions:
            if sol.iso == ident.edge_isos[e].iso and sol.h0 is not None:
                for vec in sol.lattice:
                    isos = dict(ident.edge_isos)
                    isos[e] = HolonomyIso(sol.iso, hd.H.normalize(vec))
                    out.append(DiscreteDataIso(dict(ident.vertex_map), dict(ident.edge_map), False, isos,
                                               dict(ident.cocycles), dict(ident.source_signs)))
    for v in gr.vertices:
        adj = gr.adjacent(v)
        G = gr.vertex_group(v)
        if len(adj) < 2 or not isinstance(G, AbelianGroup):
            continue
        for i in adj[1:]:
            for gen in G.generators():
                coc = dict(ident.cocycles)
                for j in adj:
                    if j != i:
                        coc[(v, i, j)] = gen
                        coc[(v, j, i)] = G.inv(gen)
                out.append(DiscreteDataIso(dict(ident.vertex_map), dict(ident.edge_map), False,
                                           dict(ident.edge_isos), coc, dict(ident.source_signs)))
    return out


def _abelian_out(gr: DiscreteData, bound: int) -> OutAutDescription:
    if not abelian_coords(gr):
        raise UnsupportedBackend("infinite groups are supported only when every group is abelian")
    coords = _Coords(gr)
    inner_basis = _inner_lattice(gr, coords)
    keyer = _AbelianKeyer(gr, coords, inner_basis)
    lifts, complete = _lifts(gr, bound)
    trans = _translation_generators(gr, bound)
    notes = []
    if not complete:
        notes.append(f"automorphism search bounded by entries |x| <= {bound}; "
                     "the group described is generated by the automorphisms found")
    seen = {}
    for f in lifts + trans:
        seen.setdefault(keyer.key(f), f)
    gens = list(seen.values())
    out = OutAutDescription(gr, "abelian-family", complete, gens, None, 0, None, None, notes, bound, keyer)
    out._generators = gens
    # commutativity of the generators
    abelian = True
    for a in range(len(gens)):
        for b in range(a):
            if keyer.key(compose_discrete_iso(gens[a], gens[b])) != keyer.key(compose_discrete_iso(gens[b], gens[a])):
                abelian = False
                break
        if not abelian:
            break
    out.abelian = abelian
    if abelian:
        try:
            out.structure = abelian_structure(out, gens)
        except (StructureError, UnsupportedBackend) as exc:
            out.notes.append(f"structure not determined: {exc}")
    else:
        out.notes.append("generators do not commute; no abelian structure")
    return out


def abelian_structure(out: OutAutDescription, gens: list[DiscreteDataIso]) -> AbelianStructure:
    rep = _RationalRep(out.gr, out._keyer)
    mats = [rep.matrix(g) for g in gens]
    k = 1
    for m in mats:
        k = lcm(k, _unipotent_exponent(m))
    def logmap(f):
        return _flatten(_log_unipotent(_matpow(rep.matrix(f), k)))
    return find_relations(gens, out.mul, out.inv, out.one(), out.class_key, logmap)


class _RationalRep:
    """Faithful-up-to-finite-kernel rational representation of Out.

    Blocks: free parts of the vertex groups, free parts of the edge groups,
    and the affine action on translations modulo inner translations.
    """

    def __init__(self, gr: DiscreteData, keyer: _AbelianKeyer):
        self.gr = gr
        self.coords = keyer.coords
        c = self.coords
        self.vslots, n = {}, 0
        for v in gr.vertices:
            self.vslots[v] = n
            n += _free(gr.vertex_group(v))
        self.nv = n
        self.eslots, n = {}, 0
        for e in gr.edges:
            self.eslots[e] = n
            n += _free(gr.edge_H(e))
        self.ne = n
        # rational quotient of the free translation coordinates by inner translations
        free_idx = [t for t in range(c.n) if c.free_mask[t]]
        self.free_idx = free_idx
        inner = [[b[t] for t in free_idx] for b in keyer.inner_basis]
        span = il.qrank_basis(inner, len(free_idx))
        # complement: pick standard vectors not in span
        comp = []
        cur = list(span)
        for t in range(len(free_idx)):
            e = [Fraction(int(t == u)) for u in range(len(free_idx))]
            if len(il.qrank_basis(cur + [e], len(free_idx))) > len(cur):
                cur.append(e)
                comp.append(t)
        # coordinates: express x in basis span + comp; quotient keeps comp coefficients
        full = span + [[Fraction(int(t == u)) for u in range(len(free_idx))] for t in comp]
        if full:
            m = [[full[r][col] for r in range(len(full))] for col in range(len(free_idx))]
            minv = il.qinverse(m)
            self.q = minv[len(span):]  # rows: quotient coordinates
        else:
            self.q = []
        self.s = [[Fraction(int(t == u)) for u in range(len(free_idx))] for t in comp]  # section vectors
        self.na = len(comp)

    def _lin_translation(self, f: DiscreteDataIso) -> list[list[int]]:
        """Linear part of the affine action on ambient translation coordinates."""
        c = self.coords
        gr = self.gr
        m = il.zeros(c.n, c.n)
        for e in c.edges:
            psi = f.edge_isos[e].psi
            src, dst = c.offset[("h", e)], c.offset[("h", f.edge_map[e])]
            if isinstance(psi.source, AbelianGroup):
                mat = psi.matrix()
                for i in range(len(mat)):
                    for j in range(len(mat[i])):
                        m[dst + i][src + j] = mat[i][j]
        for (w, i, j) in c.slots:
            s = gr.sign(w)
            psi = f.edge_isos[j].side(s)
            src = c.offset[("g", w, i, j)]
            dst = c.offset[("g", f.vertex_map[w], f.edge_map[i], f.edge_map[j])]
            if isinstance(psi.source, AbelianGroup):
                mat = psi.matrix()
                for a in range(len(mat)):
                    for b in range(len(mat[a])):
                        m[dst + a][src + b] = mat[a][b]
        return m

    def matrix(self, f: DiscreteDataIso) -> list[list[Fraction]]:
        gr = self.gr
        size = self.nv + self.ne + self.na + 1
        x = [[Fraction(0)] * size for _ in range(size)]
        # vertex groups
        for v in gr.vertices:
            G = gr.vertex_group(v)
            r = _free(G)
            if not r:
                continue
            adj = gr.adjacent(v)
            src, dst = self.vslots[v], self.vslots[f.vertex_map[v]]
            if adj:
                mat = f.edge_isos[adj[0]].side(gr.sign(v)).matrix()
            else:
                mat = il.identity(G.dim)
            for i in range(r):
                for j in range(r):
                    x[dst + i][src + j] = Fraction(mat[i][j])
        # edge groups
        for e in gr.edges:
            H = gr.edge_H(e)
            r = _free(H)
            if not r:
                continue
            mat = f.edge_isos[e].psi.matrix()
            src, dst = self.eslots[e], self.eslots[f.edge_map[e]]
            for i in range(r):
                for j in range(r):
                    x[self.nv + dst + i][self.nv + src + j] = Fraction(mat[i][j])
        # affine part
        o = self.nv + self.ne
        if self.na:
            lin = self._lin_translation(f)
            lin_free = [[Fraction(lin[a][b]) for b in self.free_idx] for a in self.free_idx]
            tau = self.coords.tau(f)
            tau_free = [Fraction(tau[t]) for t in self.free_idx]
            qs = il.matmul(self.q, lin_free)
            bar = il.matmul(qs, [list(col) for col in zip(*self.s)] if self.s else [], inner=len(self.free_idx))
            tb = il.matvec(self.q, tau_free)
            for i in range(self.na):
                for j in range(self.na):
                    x[o + i][o + j] = bar[i][j]
                x[o + i][o + self.na] = tb[i]
        x[o + self.na][o + self.na] = Fraction(1)
        return x


def _matpow(m, k):
    n = len(m)
    result = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    base = m
    while k:
        if k & 1:
            result = il.matmul(result, base)
        base = il.matmul(base, base)
        k >>= 1
    return result


def _is_nilpotent(n_mat) -> bool:
    size = len(n_mat)
    p = n_mat
    for _ in range(size):
        if not any(any(x for x in row) for row in p):
            return True
        p = il.matmul(p, n_mat)
    return not any(any(x for x in row) for row in p)


def _sub_identity(m):
    return [[m[i][j] - int(i == j) for j in range(len(m))] for i in range(len(m))]


def _unipotent_exponent(m) -> int:
    p = m
    for k in range(1, MAX_LOG_EXPONENT + 1):
        if _is_nilpotent(_sub_identity(p)):
            return k
        p = il.matmul(p, m)
    raise UnsupportedBackend("an automorphism has no unipotent power (hyperbolic monodromy)")


def _log_unipotent(u):
    n = _sub_identity(u)
    size = len(u)
    acc = [[Fraction(0)] * size for _ in range(size)]
    p = n
    for k in range(1, size + 1):
        if not any(any(x for x in row) for row in p):
            break
        c = Fraction((-1) ** (k + 1), k)
        acc = [[a + c * b for a, b in zip(ra, rb)] for ra, rb in zip(acc, p)]
        p = il.matmul(p, n)
    return acc


def _flatten(m):
    return [x for row in m for x in row]


# entry point ---------------------------------------------------------------


def out_aut_discrete(gr: DiscreteData, bound: int = DEFAULT_BOUND) -> OutAutDescription:
    if gr.all_groups_finite():
        return _finite_out(gr, bound)
    return _abelian_out(gr, bound)
