"""Isotropy data, holonomy data and discrete data with their validators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .groups import (
    GroupError,
    Hom,
    conjugation_aut,
    hom_apply,
    hom_compose,
    hom_defects,
    is_isomorphism,
    same_group,
)

PLUS, MINUS = "+", "-"


def opposite(sign: str) -> str:
    return MINUS if sign == PLUS else PLUS


@dataclass
class ValidationReport:
    errors: list[tuple[str, str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self):
        return self.ok

    def add(self, path: str, msg: str):
        self.errors.append((path, msg))

    def extend(self, other: "ValidationReport", prefix: str = ""):
        for p, m in other.errors:
            self.errors.append((prefix + p if p else prefix.rstrip("."), m))
        for n in other.notes:
            if n not in self.notes:
                self.notes.append(n)

    def lines(self) -> list[str]:
        return [f"{p}: {m}" if p else m for p, m in self.errors]

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(self.lines())


@dataclass(frozen=True, eq=False)
class IsotropyData:
    H: object
    G_minus: object
    G_plus: object
    phi_minus: Hom
    phi_plus: Hom

    def G(self, sign: str):
        return self.G_plus if sign == PLUS else self.G_minus

    def phi(self, sign: str) -> Hom:
        return self.phi_plus if sign == PLUS else self.phi_minus


@dataclass(frozen=True, eq=False)
class HolonomyData:
    iso: IsotropyData
    hol: Hom
    gamma_minus: object
    gamma_plus: object

    @property
    def H(self):
        return self.iso.H

    def G(self, sign: str):
        return self.iso.G(sign)

    def phi(self, sign: str) -> Hom:
        return self.iso.phi(sign)

    def gamma(self, sign: str):
        return self.gamma_plus if sign == PLUS else self.gamma_minus


def _check_hom(rep: ValidationReport, path: str, f: Hom, src, tgt):
    if not same_group(f.source, src):
        rep.add(path, "source group does not match")
    if not same_group(f.target, tgt):
        rep.add(path, "target group does not match")
    for msg in hom_defects(f):
        rep.add(path, msg)


def validate_isotropy(iso: IsotropyData) -> ValidationReport:
    rep = ValidationReport()
    _check_hom(rep, "phi_minus", iso.phi_minus, iso.H, iso.G_minus)
    _check_hom(rep, "phi_plus", iso.phi_plus, iso.H, iso.G_plus)
    return rep


def validate_holonomy(hd: HolonomyData) -> ValidationReport:
    rep = validate_isotropy(hd.iso)
    _check_hom(rep, "hol", hd.hol, hd.H, hd.H)
    if not rep.ok:
        return rep
    if not is_isomorphism(hd.hol):
        rep.add("hol", "not invertible")
    for sign, name in ((MINUS, "gamma_minus"), (PLUS, "gamma_plus")):
        g = hd.G(sign)
        gam = hd.gamma(sign)
        if not g.contains(gam):
            rep.add(name, f"{gam!r} is not an element of the vertex group")
            continue
        phi = hd.phi(sign)
        lhs = hom_compose(conjugation_aut(g, gam), phi)
        rhs = hom_compose(phi, hd.hol)
        if lhs != rhs:
            bad = _first_difference(lhs, rhs)
            rep.add("hol", f"conjugation by {name} does not intertwine phi{sign} with hol (differs at {bad!r})")
    return rep


def _first_difference(f: Hom, g: Hom):
    src = f.source
    pts = src.elements() if src.finite else src.generators()
    for x in pts:
        if hom_apply(f, x) != hom_apply(g, x):
            return x
    return None


@dataclass(frozen=True)
class Vertex:
    id: str
    sign: str
    group: str


@dataclass(frozen=True, eq=False)
class Edge:
    id: str
    pos_vertex: str
    neg_vertex: str
    period: Fraction
    H: str
    phi_plus: Hom
    phi_minus: Hom
    hol: Hom
    gamma_plus: object
    gamma_minus: object

    def vertex(self, sign: str) -> str:
        return self.pos_vertex if sign == PLUS else self.neg_vertex


@dataclass(eq=False)
class DiscreteData:
    """A signed multigraph decorated with groups, periods and holonomy data.

    Groups are stored by name; vertices and edges refer to them, so edge
    groups are the vertex group objects themselves.
    """

    groups: dict[str, object]
    vertices: dict[str, Vertex]
    edges: dict[str, Edge]
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.vertices = dict(sorted(self.vertices.items()))
        self.edges = dict(sorted(self.edges.items()))
        self.groups = dict(sorted(self.groups.items()))
        self._hol: dict[str, HolonomyData] = {}

    def vertex_group(self, v: str):
        return self.groups[self.vertices[v].group]

    def edge_H(self, e: str):
        return self.groups[self.edges[e].H]

    def sign(self, v: str) -> str:
        return self.vertices[v].sign

    def holonomy(self, e: str) -> HolonomyData:
        hd = self._hol.get(e)
        if hd is None:
            ed = self.edges[e]
            iso = IsotropyData(
                self.groups[ed.H],
                self.groups[self.vertices[ed.neg_vertex].group] if ed.neg_vertex in self.vertices else ed.phi_minus.target,
                self.groups[self.vertices[ed.pos_vertex].group] if ed.pos_vertex in self.vertices else ed.phi_plus.target,
                ed.phi_minus,
                ed.phi_plus,
            )
            hd = HolonomyData(iso, ed.hol, ed.gamma_minus, ed.gamma_plus)
            self._hol[e] = hd
        return hd

    def adjacent(self, v: str) -> list[str]:
        return [e for e, ed in self.edges.items() if ed.pos_vertex == v or ed.neg_vertex == v]

    def edge_sign_at(self, e: str, v: str) -> str:
        ed = self.edges[e]
        return PLUS if ed.pos_vertex == v else MINUS

    def cocycle_slots(self) -> list[tuple[str, str, str]]:
        """All (vertex, i, j) with edges i and j meeting at vertex."""
        out = []
        for v in self.vertices:
            adj = self.adjacent(v)
            for i in adj:
                for j in adj:
                    out.append((v, i, j))
        return out

    def period(self, e: str) -> Fraction:
        return self.edges[e].period

    def all_groups_finite(self) -> bool:
        used = {self.vertices[v].group for v in self.vertices} | {ed.H for ed in self.edges.values()}
        return all(self.groups[g].finite for g in used)


def validate_discrete(gr: DiscreteData) -> ValidationReport:
    rep = ValidationReport()
    for vid, v in gr.vertices.items():
        if v.sign not in (PLUS, MINUS):
            rep.add(f"vertices[{vid}].sign", f"sign must be '+' or '-', got {v.sign!r}")
        if v.group not in gr.groups:
            rep.add(f"vertices[{vid}].group", f"unknown group {v.group!r}")
    for eid, ed in gr.edges.items():
        base = f"edges[{eid}]"
        ok = True
        for attr, want in (("pos_vertex", PLUS), ("neg_vertex", MINUS)):
            vid = getattr(ed, attr)
            if vid not in gr.vertices:
                rep.add(f"{base}.{attr}", f"unknown vertex {vid!r}")
                ok = False
            elif gr.vertices[vid].sign != want:
                rep.add(f"{base}.{attr}", f"vertex {vid!r} has sign {gr.vertices[vid].sign!r}, expected {want!r}")
                ok = False
        if not isinstance(ed.period, Fraction) or ed.period <= 0:
            rep.add(f"{base}.period", f"period must be a positive rational, got {ed.period}")
        if ed.H not in gr.groups:
            rep.add(f"{base}.H", f"unknown group {ed.H!r}")
            ok = False
        if not ok:
            continue
        hd = gr.holonomy(eid)
        local = ValidationReport()
        # identity of reference with the vertex groups
        for sign, attr in ((PLUS, "phi_plus"), (MINUS, "phi_minus")):
            f = getattr(ed, attr)
            if f.target is not gr.vertex_group(ed.vertex(sign)):
                local.add(attr, "target is not the vertex group at the endpoint")
            if f.source is not gr.groups[ed.H]:
                local.add(attr, "source is not the edge group H")
        if ed.hol.source is not gr.groups[ed.H] or ed.hol.target is not gr.groups[ed.H]:
            local.add("hol", "hol must be a map from H to H")
        if local.ok:
            local = validate_holonomy(hd)
        rep.extend(local, f"{base}.")
    return rep


__all__ = [
    "PLUS",
    "MINUS",
    "opposite",
    "ValidationReport",
    "IsotropyData",
    "HolonomyData",
    "Vertex",
    "Edge",
    "DiscreteData",
    "validate_isotropy",
    "validate_holonomy",
    "validate_discrete",
    "GroupError",
]
