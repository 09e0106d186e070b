"""Isomorphism search between discrete data.

Graph bijections are enumerated with pruning by signs, periods and group
invariants.  For each edge the holonomy maps are solved for directly, and
at each vertex the cocycles are reduced to a base edge: only the elements
g with C_g o psi_base = psi_i need to be found, the rest of the table is
then forced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

from . import intlinalg as il
from .data import MINUS, PLUS, DiscreteData, HolonomyData
from .groups import (
    DEFAULT_BOUND,
    AbelianGroup,
    FiniteGroup,
    Hom,
    Intertwine,
    Pin,
    conjugation_aut,
    hom_apply,
    hom_compose,
    solve_isomorphisms,
)
from .isos import (
    DiscreteDataIso,
    HolonomyIso,
    IsoError,
    IsotropyIso,
    target_side,
)


class UnsupportedBackend(IsoError):
    """The groups involved are outside the decidable backends."""


@dataclass
class EdgeSolution:
    """Holonomy maps sharing one isotropy map.

    ``hs`` lists the admissible h when H is finite.  For infinite abelian H
    the admissible h form ``h0 + lattice`` instead.
    """

    iso: IsotropyIso
    hs: list = field(default_factory=list)
    h0: tuple | None = None
    lattice: list = field(default_factory=list)

    def infinite(self) -> bool:
        return self.h0 is not None and any(self.lattice)

    def h_values(self, group, bound: int) -> list:
        if self.h0 is None:
            return list(self.hs)
        return _box_points(group, self.h0, self.lattice, bound)


def _box_points(group: AbelianGroup, base, lattice, bound: int) -> list:
    basis = il.hermite_basis(list(lattice) + _torsion_vectors(group), group.dim)
    base = il.reduce_mod(base, basis)
    lo = [0 if m else -bound for m in group.moduli]
    hi = [m - 1 if m else bound for m in group.moduli]
    return sorted(set(il.enumerate_box(base, basis, lo, hi)))


def _torsion_vectors(group: AbelianGroup) -> list[list[int]]:
    return [[m if i == k else 0 for i in range(group.dim)] for k, m in enumerate(group.moduli) if m]


@dataclass
class EdgeSolve:
    solutions: list[EdgeSolution]
    complete: bool


def _side_constraints(hd1: HolonomyData, hd2: HolonomyData, psi: Hom, s: str, t: str, h=None):
    cons = []
    g2 = hd2.G(t)
    for x in hd1.H.generators():
        cons.append(Pin(hom_apply(hd1.phi(s), x), hom_apply(hd2.phi(t), hom_apply(psi, x))))
    if h is not None:
        ph = hom_apply(hd2.phi(t), h)
        target = g2.mul(g2.inv(ph), hd2.gamma(t))
        cons.append(Pin(hd1.gamma(s), target))
        g1 = hd1.G(s)
        if not (g1.is_abelian() and g2.is_abelian()):
            cons.append(Intertwine(conjugation_aut(g1, hd1.gamma(s)), conjugation_aut(g2, target)))
    return cons


def solve_edge(hd1: HolonomyData, hd2: HolonomyData, reversing: bool, bound: int = DEFAULT_BOUND) -> EdgeSolve:
    """All holonomy maps hd1 -> hd2 of the given orientation."""
    H1, H2 = hd1.H, hd2.H
    complete = True
    out: list[EdgeSolution] = []
    if H2.finite:
        if not H1.finite:
            return EdgeSolve([], True)
        for h in H2.elements():
            post = hom_compose(conjugation_aut(H2, H2.inv(h)), hd2.hol)
            psis = solve_isomorphisms(H1, H2, [Intertwine(hd1.hol, post)], bound)
            complete &= psis.complete
            for psi in psis:
                sides = {}
                for s in (MINUS, PLUS):
                    t = target_side(s, reversing)
                    r = solve_isomorphisms(hd1.G(s), hd2.G(t), _side_constraints(hd1, hd2, psi, s, t, h), bound)
                    complete &= r.complete
                    sides[s] = r.solutions
                for pm, pp in product(sides[MINUS], sides[PLUS]):
                    out.append(EdgeSolution(IsotropyIso(reversing, psi, pm, pp), hs=[h]))
        return EdgeSolve(out, complete)
    if not (isinstance(H1, AbelianGroup) and isinstance(H2, AbelianGroup)):
        raise UnsupportedBackend("infinite edge groups must be finitely generated abelian")
    for s in (MINUS, PLUS):
        for g in (hd1.G(s), hd2.G(s)):
            if not (isinstance(g, AbelianGroup) or (g.finite and g.order() == 1)):
                raise UnsupportedBackend("infinite edge group next to a non-abelian or table vertex group")
    psis = solve_isomorphisms(H1, H2, [Intertwine(hd1.hol, hd2.hol)], bound)
    complete &= psis.complete
    for psi in psis:
        sides = {}
        for s in (MINUS, PLUS):
            t = target_side(s, reversing)
            r = solve_isomorphisms(hd1.G(s), hd2.G(t), _side_constraints(hd1, hd2, psi, s, t), bound)
            complete &= r.complete
            sides[s] = r.solutions
        for pm, pp in product(sides[MINUS], sides[PLUS]):
            iso = IsotropyIso(reversing, psi, pm, pp)
            got = solve_h(hd1, hd2, iso)
            if got is not None:
                h0, lat = got
                out.append(EdgeSolution(iso, h0=h0, lattice=lat))
    return EdgeSolve(out, complete)


def solve_h(hd1: HolonomyData, hd2: HolonomyData, iso: IsotropyIso):
    """Solve phi2^t(h) = gamma2^t - psi^s(gamma1^s) for abelian data.

    Returns (particular h, lattice basis of ker phi2^+ ∩ ker phi2^-) or None.
    """
    H2 = hd2.H
    rows, rhs, mods = [], [], []
    for s in (MINUS, PLUS):
        t = target_side(s, iso.reversing)
        g2 = hd2.G(t)
        want = g2.mul(hd2.gamma(t), g2.inv(hom_apply(iso.side(s), hd1.gamma(s))))
        if not isinstance(g2, AbelianGroup):
            continue
        m = hd2.phi(t).matrix()
        for i in range(g2.dim):
            rows.append(list(m[i]))
            rhs.append(want[i])
            mods.append(g2.moduli[i])
    x, lat = il.solve_congruences(rows, rhs, mods, H2.dim)
    if x is None:
        return None
    return H2.normalize(x), [list(v) for v in lat]


# graph maps ----------------------------------------------------------------


def _edge_compatible(gr1, gr2, e, k, reversing) -> bool:
    if gr1.period(e) != gr2.period(k):
        return False
    if gr1.edge_H(e).signature() != gr2.edge_H(k).signature():
        return False
    for s in (MINUS, PLUS):
        t = target_side(s, reversing)
        v = gr1.edges[e].vertex(s)
        w = gr2.edges[k].vertex(t)
        if gr1.vertex_group(v).signature() != gr2.vertex_group(w).signature():
            return False
        if len(gr1.adjacent(v)) != len(gr2.adjacent(w)):
            return False
    return True


def graph_maps(gr1: DiscreteData, gr2: DiscreteData) -> Iterator[tuple[bool, dict, dict]]:
    """All (reversing, vertex map, edge map) compatible with signs and periods."""
    if len(gr1.vertices) != len(gr2.vertices) or len(gr1.edges) != len(gr2.edges):
        return
    edges1 = list(gr1.edges)
    edges2 = list(gr2.edges)
    iso1 = [v for v in gr1.vertices if not gr1.adjacent(v)]
    iso2 = [v for v in gr2.vertices if not gr2.adjacent(v)]
    for reversing in (False, True):
        signs1 = sorted(target_side(gr1.sign(v), reversing) for v in gr1.vertices)
        if signs1 != sorted(gr2.sign(v) for v in gr2.vertices):
            continue
        cands = {e: [k for k in edges2 if _edge_compatible(gr1, gr2, e, k, reversing)] for e in edges1}
        vm: dict[str, str] = {}
        em: dict[str, str] = {}
        used_v: set[str] = set()
        used_e: set[str] = set()

        def rec(t):
            if t == len(edges1):
                yield from _isolated(vm)
                return
            e = edges1[t]
            for k in cands[e]:
                if k in used_e:
                    continue
                added = []
                ok = True
                for s in (MINUS, PLUS):
                    v = gr1.edges[e].vertex(s)
                    w = gr2.edges[k].vertex(target_side(s, reversing))
                    if v in vm:
                        if vm[v] != w:
                            ok = False
                            break
                    elif w in used_v:
                        ok = False
                        break
                    else:
                        vm[v] = w
                        used_v.add(w)
                        added.append(v)
                if ok:
                    em[e] = k
                    used_e.add(k)
                    yield from rec(t + 1)
                    del em[e]
                    used_e.discard(k)
                for v in added:
                    used_v.discard(vm.pop(v))

        def _isolated(vm_):
            left = [w for w in iso2]
            yield from _match_isolated(iso1, left, vm_, reversing)

        def _match_isolated(src, tgt, vm_, rev):
            if not src:
                yield reversing, dict(vm_), dict(em)
                return
            v = src[0]
            for w in tgt:
                if gr2.sign(w) == target_side(gr1.sign(v), rev):
                    vm_[v] = w
                    rest = [x for x in tgt if x != w]
                    yield from _match_isolated(src[1:], rest, vm_, rev)
                    del vm_[v]

        yield from rec(0)


# vertex cocycles -----------------------------------------------------------


def transporters(g2, psi_base: Hom, psi_i: Hom, bound: int) -> tuple[list, bool]:
    """Elements g of g2 with C_g o psi_base = psi_i, and a completeness flag."""
    if g2.is_abelian():
        if psi_base != psi_i:
            return [], True
        if g2.finite:
            return g2.elements(), True
        return _box_points(g2, g2.one, [], bound), False
    src = psi_base.source
    pts = src.generators()
    base_imgs = [hom_apply(psi_base, x) for x in pts]
    want = [hom_apply(psi_i, x) for x in pts]
    out = []
    for g in g2.elements():
        gi = g2.inv(g)
        if all(g2.mul(g2.mul(g, b), gi) == w for b, w in zip(base_imgs, want)):
            out.append(g)
    return out, True


@dataclass
class IsoSearchResult:
    isos: list[DiscreteDataIso]
    complete: bool
    bound: int
    notes: list[str] = field(default_factory=list)

    def __len__(self):
        return len(self.isos)

    def __iter__(self):
        return iter(self.isos)


def _edge_table(gr1, gr2, bound):
    cache = {}

    def get(e, k, reversing):
        key = (e, k, reversing)
        if key not in cache:
            cache[key] = solve_edge(gr1.holonomy(e), gr2.holonomy(k), reversing, bound)
        return cache[key]

    return get


def iter_discrete_isos(gr1: DiscreteData, gr2: DiscreteData, bound: int = DEFAULT_BOUND, first_only: bool = False):
    """Generator of isomorphisms plus a completeness flag via the returned state dict."""
    state = {"complete": True}
    get = _edge_table(gr1, gr2, bound)

    def run():
        for reversing, vm, em in graph_maps(gr1, gr2):
            sols = {}
            dead = False
            for e, k in em.items():
                es = get(e, k, reversing)
                if not es.complete:
                    state["complete"] = False
                if not es.solutions:
                    dead = True
                    break
                sols[e] = es.solutions
            if dead:
                continue
            yield from _assemble(gr1, gr2, reversing, vm, em, sols, bound, state, first_only)

    return run(), state


def _assemble(gr1, gr2, reversing, vm, em, sols, bound, state, first_only):
    edges = list(em)
    verts = [v for v in gr1.vertices if gr1.adjacent(v)]
    # vertices become checkable once their last adjacent edge is chosen
    ready_at: dict[int, list[str]] = {}
    for v in verts:
        last = max(edges.index(e) for e in gr1.adjacent(v))
        ready_at.setdefault(last, []).append(v)
    chosen: dict[str, EdgeSolution] = {}
    trans: dict[str, list] = {}

    def vertex_options(v):
        adj = gr1.adjacent(v)
        s = gr1.sign(v)
        g2 = gr2.vertex_group(vm[v])
        base = adj[0]
        opts = []
        for i in adj[1:]:
            ts, comp = transporters(g2, chosen[base].iso.side(s), chosen[i].iso.side(s), bound)
            if not comp:
                state["complete"] = False
            if not ts:
                return None
            opts.append(ts)
        return opts

    def rec(t):
        if t == len(edges):
            yield from _emit()
            return
        e = edges[t]
        for sol in sols[e]:
            chosen[e] = sol
            ok = True
            for v in ready_at.get(t, []):
                o = vertex_options(v)
                if o is None:
                    ok = False
                    break
                trans[v] = o
            if ok:
                yield from rec(t + 1)
            for v in ready_at.get(t, []):
                trans.pop(v, None)
        chosen.pop(e, None)

    def _emit():
        h_lists = []
        for e in edges:
            sol = chosen[e]
            if sol.infinite():
                state["complete"] = False
            h_lists.append(sol.h_values(gr2.edge_H(em[e]), bound))
        coc_choices = [product(*trans[v]) for v in verts]
        coc_lists = [list(c) for c in coc_choices]
        for hs in product(*h_lists):
            isos = {e: HolonomyIso(chosen[e].iso, h) for e, h in zip(edges, hs)}
            for cc in product(*coc_lists):
                coc = {}
                for v, base_vals in zip(verts, cc):
                    adj = gr1.adjacent(v)
                    g2 = gr2.vertex_group(vm[v])
                    to_base = {adj[0]: g2.one}
                    for i, g in zip(adj[1:], base_vals):
                        to_base[i] = g
                    for i in adj:
                        for j in adj:
                            coc[(v, i, j)] = g2.mul(to_base[i], g2.inv(to_base[j]))
                yield DiscreteDataIso(dict(vm), dict(em), reversing, isos, coc,
                                      {v: gr1.sign(v) for v in gr1.vertices})
                if first_only:
                    return

    yield from rec(0)


def find_discrete_isos(gr1: DiscreteData, gr2: DiscreteData, bound: int = DEFAULT_BOUND) -> IsoSearchResult:
    gen, state = iter_discrete_isos(gr1, gr2, bound)
    isos = list(gen)
    isos.sort(key=lambda f: f.sort_key())
    notes = []
    if not state["complete"]:
        notes.append(f"bounded search: entries of infinite families limited to |x| <= {bound}")
    return IsoSearchResult(isos, state["complete"], bound, notes)


@dataclass
class MoritaDecision:
    equivalent: bool
    witness: DiscreteDataIso | None
    complete: bool = True

    def __bool__(self):
        return self.equivalent


def morita_equivalent(gr1: DiscreteData, gr2: DiscreteData, bound: int = DEFAULT_BOUND) -> MoritaDecision:
    """Decide whether an isomorphism exists; ``complete`` is False when a
    negative answer comes from a bounded search."""
    gen, state = iter_discrete_isos(gr1, gr2, bound, first_only=True)
    for f in gen:
        return MoritaDecision(True, f, True)
    return MoritaDecision(False, None, state["complete"])
