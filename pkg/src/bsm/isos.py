"""Isomorphisms of isotropy, holonomy and discrete data.

Orientation-reversing maps swap the two sides: the component ``psi^s``
is defined on the source group on side ``s`` and lands on the target
group on the opposite side.  Components are always keyed by source side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Mapping

from . import intlinalg as il
from .data import (
    MINUS,
    PLUS,
    DiscreteData,
    HolonomyData,
    IsotropyData,
    ValidationReport,
    opposite,
)
from .groups import (
    AbelianGroup,
    GroupError,
    Hom,
    conj,
    conjugation_aut,
    hom_apply,
    hom_compose,
    hom_defects,
    hom_inverse,
    identity_hom,
    is_isomorphism,
    same_group,
)

REVERSING_NOTE = (
    "orientation-reversing holonomy map checked with phi2 of the opposite side: "
    "phi2^(-s)(h) = gamma2^(-s) * psi^s(gamma1^s)^-1 (no extra hol^-1 factor)"
)


class IsoError(ValueError):
    """Ill-formed or non-composable isomorphism data."""


def target_side(sign: str, reversing: bool) -> str:
    return opposite(sign) if reversing else sign


@dataclass(frozen=True, eq=False)
class IsotropyIso:
    reversing: bool
    psi: Hom
    psi_minus: Hom
    psi_plus: Hom

    @property
    def orientation(self) -> str:
        return "reversing" if self.reversing else "preserving"

    def side(self, sign: str) -> Hom:
        return self.psi_plus if sign == PLUS else self.psi_minus

    def key(self) -> tuple:
        return (self.reversing, self.psi.key(), self.psi_minus.key(), self.psi_plus.key())

    def __eq__(self, other):
        return isinstance(other, IsotropyIso) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


@dataclass(frozen=True, eq=False)
class HolonomyIso:
    iso: IsotropyIso
    h: object

    @property
    def reversing(self) -> bool:
        return self.iso.reversing

    @property
    def psi(self) -> Hom:
        return self.iso.psi

    def side(self, sign: str) -> Hom:
        return self.iso.side(sign)

    def key(self) -> tuple:
        return self.iso.key() + (self.h,)

    def __eq__(self, other):
        return isinstance(other, HolonomyIso) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


# isotropy layer --------------------------------------------------------


def _maps_between(rep, path, f: Hom, src, tgt):
    if not same_group(f.source, src) or not same_group(f.target, tgt):
        rep.add(path, "has the wrong source or target group")
        return False
    bad = hom_defects(f)
    if bad:
        rep.add(path, bad[0])
        return False
    if not is_isomorphism(f):
        rep.add(path, "is not an isomorphism")
        return False
    return True


def validate_isotropy_iso(m: IsotropyIso, i1: IsotropyData, i2: IsotropyData) -> ValidationReport:
    rep = ValidationReport()
    ok = _maps_between(rep, "psi", m.psi, i1.H, i2.H)
    for s in (MINUS, PLUS):
        t = target_side(s, m.reversing)
        name = "psi_plus" if s == PLUS else "psi_minus"
        if not _maps_between(rep, name, m.side(s), i1.G(s), i2.G(t)):
            ok = False
    if not ok:
        return rep
    for s in (MINUS, PLUS):
        t = target_side(s, m.reversing)
        lhs = hom_compose(m.side(s), i1.phi(s))
        rhs = hom_compose(i2.phi(t), m.psi)
        if lhs != rhs:
            rep.add("psi_plus" if s == PLUS else "psi_minus",
                    f"square with phi{s} (source) and phi{t} (target) does not commute")
    return rep


def compose_isotropy_iso(m1: IsotropyIso, m2: IsotropyIso) -> IsotropyIso:
    """m1 o m2."""
    sides = {}
    for s in (MINUS, PLUS):
        mid = target_side(s, m2.reversing)
        sides[s] = hom_compose(m1.side(mid), m2.side(s))
    return IsotropyIso(m1.reversing != m2.reversing, hom_compose(m1.psi, m2.psi), sides[MINUS], sides[PLUS])


def invert_isotropy_iso(m: IsotropyIso) -> IsotropyIso:
    sides = {}
    for s in (MINUS, PLUS):
        sides[target_side(s, m.reversing)] = hom_inverse(m.side(s))
    return IsotropyIso(m.reversing, hom_inverse(m.psi), sides[MINUS], sides[PLUS])


def identity_isotropy_iso(i: IsotropyData) -> IsotropyIso:
    return IsotropyIso(False, identity_hom(i.H), identity_hom(i.G_minus), identity_hom(i.G_plus))


def inner_isotropy_auto(i: IsotropyData, alpha) -> IsotropyIso:
    return IsotropyIso(
        False,
        conjugation_aut(i.H, alpha),
        conjugation_aut(i.G_minus, hom_apply(i.phi_minus, alpha)),
        conjugation_aut(i.G_plus, hom_apply(i.phi_plus, alpha)),
    )


# holonomy layer --------------------------------------------------------


def validate_holonomy_iso(m: HolonomyIso, hol1: HolonomyData, hol2: HolonomyData) -> ValidationReport:
    rep = validate_isotropy_iso(m.iso, hol1.iso, hol2.iso)
    if m.reversing:
        rep.notes.append(REVERSING_NOTE)
    if not rep.ok:
        return rep
    h2 = hol2.H
    if not h2.contains(m.h):
        rep.add("h", f"{m.h!r} is not an element of H")
        return rep
    # (i) at H
    lhs = hom_compose(hol2.hol, m.psi)
    rhs = hom_compose(conjugation_aut(h2, m.h), hom_compose(m.psi, hol1.hol))
    if lhs != rhs:
        rep.add("psi", "hol2 o psi != C_h o psi o hol1")
    for s in (MINUS, PLUS):
        t = target_side(s, m.reversing)
        g1, g2 = hol1.G(s), hol2.G(t)
        ph = hom_apply(hol2.phi(t), m.h)
        psi_s = m.side(s)
        name = "psi_plus" if s == PLUS else "psi_minus"
        # (i) at the group on side s
        lhs = hom_compose(conjugation_aut(g2, hol2.gamma(t)), psi_s)
        rhs = hom_compose(conjugation_aut(g2, ph), hom_compose(psi_s, conjugation_aut(g1, hol1.gamma(s))))
        if lhs != rhs:
            rep.add(name, "C_gamma2 o psi != C_phi(h) o psi o C_gamma1")
        # (ii)
        want = g2.mul(hol2.gamma(t), g2.inv(hom_apply(psi_s, hol1.gamma(s))))
        if ph != want:
            rep.add("h", f"phi{t}(h) = {ph!r} but gamma2 * psi(gamma1)^-1 = {want!r} on side {s}")
    return rep


def compose_holonomy_iso(m1: HolonomyIso, m2: HolonomyIso) -> HolonomyIso:
    """m1 o m2 = (Psi1 o Psi2, h1 * psi1(h2))."""
    if not same_group(m2.psi.target, m1.psi.source):
        raise IsoError("holonomy maps are not composable")
    iso = compose_isotropy_iso(m1.iso, m2.iso)
    hgrp = m1.psi.target
    return HolonomyIso(iso, hgrp.mul(m1.h, hom_apply(m1.psi, m2.h)))


def invert_holonomy_iso(m: HolonomyIso) -> HolonomyIso:
    iso = invert_isotropy_iso(m.iso)
    h1 = m.psi.source
    return HolonomyIso(iso, h1.inv(hom_apply(iso.psi, m.h)))


def identity_holonomy_iso(hd: HolonomyData) -> HolonomyIso:
    return HolonomyIso(identity_isotropy_iso(hd.iso), hd.H.one)


def inner_holonomy_auto(hd: HolonomyData, alpha) -> HolonomyIso:
    H = hd.H
    alpha = H.normalize(alpha)
    h = H.mul(hom_apply(hd.hol, alpha), H.inv(alpha))
    return HolonomyIso(inner_isotropy_auto(hd.iso, alpha), h)


def _abelian_like(g) -> bool:
    return isinstance(g, AbelianGroup)


def inner_witnesses_abelian(hd: HolonomyData, h):
    """For abelian H: (particular alpha, kernel basis) solving hol(alpha) - alpha = h."""
    H = hd.H
    m = hd.hol.matrix()
    a = [[m[i][j] - int(i == j) for j in range(H.dim)] for i in range(H.dim)]
    return il.solve_congruences(a, list(h), list(H.moduli), H.dim)


def is_inner_holonomy(m: HolonomyIso, hd: HolonomyData):
    """A witness alpha with m = inner_holonomy_auto(hd, alpha), or None."""
    if m.reversing:
        return None
    H = hd.H
    if H.finite:
        for a in H.elements():
            if inner_holonomy_auto(hd, a) == m:
                return a
        return None
    if not (_abelian_like(H) and all(g.is_abelian() for g in (hd.G(MINUS), hd.G(PLUS)))):
        raise IsoError("inner test needs finite H or abelian groups")
    if m.iso != identity_isotropy_iso(hd.iso):
        return None
    x, _ = inner_witnesses_abelian(hd, m.h)
    return None if x is None else H.normalize(x)


# discrete layer --------------------------------------------------------


@dataclass(eq=False)
class DiscreteDataIso:
    """An isomorphism of discrete data.

    ``cocycles`` maps (vertex, i, j) of the source, for edges i and j at
    that vertex, to an element of the target group at the image vertex.
    ``source_signs`` records the vertex signs of the source.
    """

    vertex_map: dict[str, str]
    edge_map: dict[str, str]
    reversing: bool
    edge_isos: dict[str, HolonomyIso]
    cocycles: dict[tuple[str, str, str], object]
    source_signs: dict[str, str] = field(default_factory=dict)

    @property
    def orientation(self) -> str:
        return "reversing" if self.reversing else "preserving"

    def key(self) -> tuple:
        return (
            tuple(sorted(self.vertex_map.items())),
            tuple(sorted(self.edge_map.items())),
            self.reversing,
            tuple((e, self.edge_isos[e].key()) for e in sorted(self.edge_isos)),
            tuple(sorted(self.cocycles.items())),
        )

    def __eq__(self, other):
        return isinstance(other, DiscreteDataIso) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def sort_key(self):
        return _sortable(self.key())

    def is_identity_graph_map(self) -> bool:
        return all(k == v for k, v in self.vertex_map.items()) and all(k == v for k, v in self.edge_map.items())


def _sortable(x):
    if isinstance(x, tuple):
        return (1, tuple(_sortable(y) for y in x))
    if isinstance(x, bool):
        return (0, int(x), "")
    if isinstance(x, int):
        return (0, x, "")
    return (0, 0, str(x))


def validate_discrete_iso(f: DiscreteDataIso, gr1: DiscreteData, gr2: DiscreteData) -> ValidationReport:
    rep = ValidationReport()
    if f.reversing:
        rep.notes.append(REVERSING_NOTE)
    vm, em = f.vertex_map, f.edge_map
    if set(vm) != set(gr1.vertices) or sorted(vm.values()) != sorted(gr2.vertices):
        rep.add("vertex_map", "is not a bijection between the vertex sets")
        return rep
    if set(em) != set(gr1.edges) or sorted(em.values()) != sorted(gr2.edges):
        rep.add("edge_map", "is not a bijection between the edge sets")
        return rep
    for v, w in vm.items():
        if gr2.sign(w) != target_side(gr1.sign(v), f.reversing):
            rep.add(f"vertex_map[{v}]", f"sign {gr1.sign(v)} sent to sign {gr2.sign(w)} under {f.orientation} map")
    for e, k in em.items():
        e1, e2 = gr1.edges[e], gr2.edges[k]
        for s in (MINUS, PLUS):
            if vm[e1.vertex(s)] != e2.vertex(target_side(s, f.reversing)):
                rep.add(f"edge_map[{e}]", "does not match the vertex map at the endpoints")
                break
    if not rep.ok:
        return rep
    if set(f.edge_isos) != set(gr1.edges):
        rep.add("edges", "need exactly one holonomy map per source edge")
        return rep
    for e, k in em.items():
        m = f.edge_isos[e]
        if m.reversing != f.reversing:
            rep.add(f"edges[{e}]", "orientation differs from the global orientation")
        if gr1.period(e) != gr2.period(k):
            rep.add(f"edges[{e}].period", f"period {gr1.period(e)} != {gr2.period(k)} of image edge {k}")
        sub = validate_holonomy_iso(m, gr1.holonomy(e), gr2.holonomy(k))
        rep.extend(sub, f"edges[{e}].")
    if not rep.ok:
        return rep
    slots = set(gr1.cocycle_slots())
    if set(f.cocycles) != slots:
        missing = sorted(slots - set(f.cocycles))
        extra = sorted(set(f.cocycles) - slots)
        if missing:
            rep.add("cocycles", f"missing entries {missing[:3]}")
        if extra:
            rep.add("cocycles", f"unexpected entries {extra[:3]}")
        return rep
    for v in gr1.vertices:
        adj = gr1.adjacent(v)
        s = gr1.sign(v)
        g2 = gr2.vertex_group(vm[v])
        for i in adj:
            for j in adj:
                g = f.cocycles[(v, i, j)]
                if not g2.contains(g):
                    rep.add(f"cocycles[{v},{i},{j}]", f"{g!r} is not in the target vertex group")
                    continue
                lhs = f.edge_isos[i].side(s)
                rhs = hom_compose(conjugation_aut(g2, g), f.edge_isos[j].side(s))
                if lhs != rhs:
                    rep.add(f"cocycles[{v},{i},{j}]", "psi_i != C_g o psi_j")
        if not rep.ok:
            continue
        for i in adj:
            for j in adj:
                for k in adj:
                    a = g2.mul(f.cocycles[(v, i, j)], f.cocycles[(v, j, k)])
                    if a != f.cocycles[(v, i, k)]:
                        rep.add(f"cocycles[{v},{i},{k}]", f"g_ij g_jk != g_ik with j = {j}")
    return rep


def compose_discrete_iso(f1: DiscreteDataIso, f2: DiscreteDataIso) -> DiscreteDataIso:
    """f1 o f2.

    The cocycle of the composite is g1[F2(v); F2(i), F2(j)] * psi1_{F2(j)}(g2[v; i, j]).
    """
    if set(f2.vertex_map.values()) != set(f1.vertex_map):
        raise IsoError("isomorphisms are not composable")
    vm = {v: f1.vertex_map[w] for v, w in f2.vertex_map.items()}
    em = {e: f1.edge_map[k] for e, k in f2.edge_map.items()}
    isos = {e: compose_holonomy_iso(f1.edge_isos[f2.edge_map[e]], f2.edge_isos[e]) for e in f2.edge_map}
    coc = {}
    for (v, i, j), g in f2.cocycles.items():
        w = f2.vertex_map[v]
        s_mid = target_side(f2.source_signs[v], f2.reversing)
        gw = f1.cocycles[(w, f2.edge_map[i], f2.edge_map[j])]
        psi = f1.edge_isos[f2.edge_map[j]].side(s_mid)
        coc[(v, i, j)] = psi.target.mul(gw, hom_apply(psi, g))
    return DiscreteDataIso(vm, em, f1.reversing != f2.reversing, isos, coc, dict(f2.source_signs))


def invert_discrete_iso(f: DiscreteDataIso) -> DiscreteDataIso:
    """Inverse of f."""
    vm = {w: v for v, w in f.vertex_map.items()}
    em = {k: e for e, k in f.edge_map.items()}
    isos = {f.edge_map[e]: invert_holonomy_iso(m) for e, m in f.edge_isos.items()}
    coc = {}
    for (v, i, j), g in f.cocycles.items():
        s = f.source_signs[v]
        inv_j = hom_inverse(f.edge_isos[j].side(s))
        coc[(f.vertex_map[v], f.edge_map[i], f.edge_map[j])] = inv_j.target.inv(hom_apply(inv_j, g))
    signs = {w: target_side(f.source_signs[v], f.reversing) for v, w in f.vertex_map.items()}
    return DiscreteDataIso(vm, em, f.reversing, isos, coc, signs)


def identity_discrete_iso(gr: DiscreteData) -> DiscreteDataIso:
    isos = {e: identity_holonomy_iso(gr.holonomy(e)) for e in gr.edges}
    coc = {(v, i, j): gr.vertex_group(v).one for (v, i, j) in gr.cocycle_slots()}
    return DiscreteDataIso({v: v for v in gr.vertices}, {e: e for e in gr.edges}, False, isos, coc,
                           {v: gr.sign(v) for v in gr.vertices})


def inner_discrete_auto(gr: DiscreteData, alphas: Mapping[str, object]) -> DiscreteDataIso:
    isos = {e: inner_holonomy_auto(gr.holonomy(e), alphas[e]) for e in gr.edges}
    coc = {}
    for v, i, j in gr.cocycle_slots():
        s = gr.sign(v)
        g = gr.vertex_group(v)
        a = hom_apply(gr.holonomy(i).phi(s), gr.edge_H(i).normalize(alphas[i]))
        b = hom_apply(gr.holonomy(j).phi(s), gr.edge_H(j).normalize(alphas[j]))
        coc[(v, i, j)] = g.mul(a, g.inv(b))
    return DiscreteDataIso({v: v for v in gr.vertices}, {e: e for e in gr.edges}, False, isos, coc,
                           {v: gr.sign(v) for v in gr.vertices})


def is_inner_discrete(f: DiscreteDataIso, gr: DiscreteData):
    """Witness {edge: alpha} with f = inner_discrete_auto(gr, alpha), or None."""
    if f.reversing or not f.is_identity_graph_map():
        return None
    edges = list(gr.edges)
    if all(gr.edge_H(e).finite for e in edges):
        cands = {}
        for e in edges:
            hd = gr.holonomy(e)
            cands[e] = [a for a in hd.H.elements() if inner_holonomy_auto(hd, a) == f.edge_isos[e]]
            if not cands[e]:
                return None
        return _search_alphas(f, gr, edges, cands)
    return _inner_abelian(f, gr)


def _search_alphas(f, gr, edges, cands):
    chosen: dict[str, object] = {}

    def consistent(e):
        # check every cocycle slot whose two edges are both chosen
        for v in (gr.edges[e].pos_vertex, gr.edges[e].neg_vertex):
            s = gr.sign(v)
            g = gr.vertex_group(v)
            for j in gr.adjacent(v):
                if j not in chosen:
                    continue
                a = hom_apply(gr.holonomy(e).phi(s), chosen[e])
                b = hom_apply(gr.holonomy(j).phi(s), chosen[j])
                if f.cocycles[(v, e, j)] != g.mul(a, g.inv(b)):
                    return False
                if f.cocycles[(v, j, e)] != g.mul(b, g.inv(a)):
                    return False
        return True

    def rec(t):
        if t == len(edges):
            return dict(chosen)
        e = edges[t]
        for a in cands[e]:
            chosen[e] = a
            if consistent(e):
                got = rec(t + 1)
                if got is not None:
                    return got
            del chosen[e]
        return None

    return rec(0)


def abelian_coords(gr: DiscreteData):
    """Check that every group in use is abelian (or trivial) for the linear path."""
    for name in {v.group for v in gr.vertices.values()} | {ed.H for ed in gr.edges.values()}:
        g = gr.groups[name]
        if not isinstance(g, AbelianGroup) and not (g.finite and g.order() == 1):
            return False
    return True


def _inner_abelian(f: DiscreteDataIso, gr: DiscreteData):
    if not abelian_coords(gr):
        raise IsoError("inner test on infinite groups needs abelian groups throughout")
    edges = list(gr.edges)
    for e in edges:
        if f.edge_isos[e].iso != identity_isotropy_iso(gr.holonomy(e).iso):
            return None
    # unknowns: alpha_e stacked; equations (hol-1) alpha = h and cocycle relations
    offs, n = {}, 0
    for e in edges:
        offs[e] = n
        n += _dim(gr.edge_H(e))
    rows, rhs, mods = [], [], []
    for e in edges:
        hd = gr.holonomy(e)
        H = hd.H
        if not isinstance(H, AbelianGroup):
            continue
        m = hd.hol.matrix()
        for i in range(H.dim):
            r = [0] * n
            for j in range(H.dim):
                r[offs[e] + j] = m[i][j] - int(i == j)
            rows.append(r)
            rhs.append(f.edge_isos[e].h[i])
            mods.append(H.moduli[i])
    for (v, i, j), g in f.cocycles.items():
        grp = gr.vertex_group(v)
        if not isinstance(grp, AbelianGroup):
            continue
        s = gr.sign(v)
        pi = _matrix_or_empty(gr.holonomy(i).phi(s))
        pj = _matrix_or_empty(gr.holonomy(j).phi(s))
        for r_ in range(grp.dim):
            r = [0] * n
            for c in range(_dim(gr.edge_H(i))):
                r[offs[i] + c] += pi[r_][c]
            for c in range(_dim(gr.edge_H(j))):
                r[offs[j] + c] -= pj[r_][c]
            rows.append(r)
            rhs.append(g[r_])
            mods.append(grp.moduli[r_])
    x, _ = il.solve_congruences(rows, rhs, mods, n)
    if x is None:
        return None
    out = {}
    for e in edges:
        H = gr.edge_H(e)
        d = _dim(H)
        out[e] = H.normalize(x[offs[e]: offs[e] + d]) if isinstance(H, AbelianGroup) else H.one
    return out


def _dim(g) -> int:
    return g.dim if isinstance(g, AbelianGroup) else 0


def _matrix_or_empty(f: Hom):
    if isinstance(f.source, AbelianGroup) and isinstance(f.target, AbelianGroup):
        return f.matrix()
    return [[0] * _dim(f.source) for _ in range(_dim(f.target))]


__all__ = [
    "IsotropyIso",
    "HolonomyIso",
    "DiscreteDataIso",
    "IsoError",
    "validate_isotropy_iso",
    "validate_holonomy_iso",
    "validate_discrete_iso",
    "compose_isotropy_iso",
    "compose_holonomy_iso",
    "compose_discrete_iso",
    "invert_isotropy_iso",
    "invert_holonomy_iso",
    "invert_discrete_iso",
    "identity_isotropy_iso",
    "identity_holonomy_iso",
    "identity_discrete_iso",
    "inner_isotropy_auto",
    "inner_holonomy_auto",
    "inner_discrete_auto",
    "is_inner_holonomy",
    "is_inner_discrete",
    "target_side",
]
