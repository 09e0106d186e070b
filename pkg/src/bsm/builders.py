"""Builders for surface data and the named example data sets."""

from __future__ import annotations

from collections import deque
from fractions import Fraction

from .data import MINUS, PLUS, DiscreteData, Edge, Vertex
from .fileformat import ParseError, group_from_json, hom_from_json, elem_from_json, period_from_json
from .groups import AbelianGroup, Hom, identity_hom, trivial_hom


class BuildError(ValueError):
    """Input outside what a builder supports."""


def _trivial():
    return AbelianGroup(0, [])


def _period(p, path="period") -> Fraction:
    if isinstance(p, Fraction):
        if p <= 0:
            raise BuildError(f"{path}: period must be positive")
        return p
    try:
        return period_from_json(p, path)
    except ParseError as exc:
        raise BuildError(str(exc)) from None


def _trivial_edge(eid, pos, neg, period, H, g_pos, g_neg, gamma_pos, gamma_neg) -> Edge:
    return Edge(eid, pos, neg, period, "1", trivial_hom(H, g_pos), trivial_hom(H, g_neg),
                identity_hom(H), gamma_pos, gamma_neg)


# surfaces ----------------------------------------------------------------------


def build_surface(spec: dict) -> DiscreteData:
    """Discrete data of a genus-zero surface cut by disjoint singular circles.

    ``spec`` lists regions as vertices ``{"id", "sign", "genus", "boundaries"}``
    and circles as edges ``{"id", "pos_vertex", "neg_vertex", "period"}``.
    Each region must be a disk (one boundary circle, trivial group) or an
    annulus (two boundary circles, group Z).  Edge groups are trivial;
    the boundary loop of a disk is the identity and each boundary loop of
    an annulus is the generator 1 of Z.
    """
    if not isinstance(spec, dict) or set(spec) - {"vertices", "edges", "notes"}:
        raise BuildError("surface spec must be an object with 'vertices' and 'edges'")
    vspecs = spec.get("vertices") or []
    especs = spec.get("edges") or []
    if not especs:
        raise BuildError("a surface without singular circles is symplectic and not supported")
    groups = {"1": _trivial(), "Z": AbelianGroup(1, [])}
    vertices = {}
    kinds = {}
    for k, vs in enumerate(vspecs):
        vid = vs.get("id")
        path = f"vertices[{vid if vid is not None else k}]"
        if not isinstance(vid, str) or vid in vertices:
            raise BuildError(f"{path}: missing or duplicate id")
        if vs.get("sign") not in (PLUS, MINUS):
            raise BuildError(f"{path}.sign: must be '+' or '-'")
        if vs.get("genus", 0) != 0:
            raise BuildError(f"{path}.genus: only genus 0 regions are supported")
        nb = vs.get("boundaries")
        if nb not in (1, 2):
            raise BuildError(f"{path}.boundaries: only disks (1) and annuli (2) are supported")
        kinds[vid] = nb
        vertices[vid] = Vertex(vid, vs["sign"], "1" if nb == 1 else "Z")
    edges = {}
    incident = {v: 0 for v in vertices}
    adj = {v: [] for v in vertices}
    for k, es in enumerate(especs):
        eid = es.get("id")
        path = f"edges[{eid if eid is not None else k}]"
        if not isinstance(eid, str) or eid in edges:
            raise BuildError(f"{path}: missing or duplicate id")
        pos, neg = es.get("pos_vertex"), es.get("neg_vertex")
        for attr, vid, want in (("pos_vertex", pos, PLUS), ("neg_vertex", neg, MINUS)):
            if vid not in vertices:
                raise BuildError(f"{path}.{attr}: unknown region {vid!r}")
            if vertices[vid].sign != want:
                raise BuildError(f"{path}.{attr}: region {vid!r} has the wrong sign")
        incident[pos] += 1
        incident[neg] += 1
        adj[pos].append(neg)
        adj[neg].append(pos)
        gp, gn = groups[vertices[pos].group], groups[vertices[neg].group]
        gam_p = (1,) if kinds[pos] == 2 else ()
        gam_n = (1,) if kinds[neg] == 2 else ()
        edges[eid] = _trivial_edge(eid, pos, neg, _period(es.get("period"), f"{path}.period"),
                                   groups["1"], gp, gn, gam_p, gam_n)
    for v, n in incident.items():
        if n != kinds[v]:
            raise BuildError(f"vertices[{v}].boundaries: region has {kinds[v]} boundary circle(s) but {n} incident edge(s)")
    # a genus-zero surface glued from disks and annuli is a sphere only if the graph is a tree
    if len(edges) != len(vertices) - 1:
        raise BuildError("regions and circles must form a tree")
    start = next(iter(vertices))
    seen = {start}
    queue = deque([start])
    while queue:
        for w in adj[queue.popleft()]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != len(vertices):
        raise BuildError("regions and circles must form a connected tree")
    used = {v.group for v in vertices.values()} | {"1"}
    notes = list(spec.get("notes", [])) or ["genus-zero surface: disks carry the trivial group, annuli carry Z"]
    return DiscreteData({g: groups[g] for g in used}, vertices, edges, notes)


# named examples --------------------------------------------------------------------


def radko_sphere(rho=Fraction(1)) -> DiscreteData:
    """Sphere with one singular circle: two disks and trivial groups."""
    rho = _period(rho)
    t = _trivial()
    notes = [
        "sphere with one singular circle of period " + f"{rho.numerator}/{rho.denominator}",
        "two disk regions, all groups trivial",
    ]
    return DiscreteData(
        {"1": t},
        {"north": Vertex("north", PLUS, "1"), "south": Vertex("south", MINUS, "1")},
        {"equator": _trivial_edge("equator", "north", "south", rho, t, t, t, (), ())},
        notes,
    )


def cavalcanti_one_curve(rho=Fraction(1)) -> DiscreteData:
    """One-curve example with simply connected leaves on both sides.

    Same combinatorics as ``radko_sphere`` but built with different ids
    and group names, so Morita equivalence has to be found by search.
    """
    rho = _period(rho)
    t = _trivial()
    notes = [
        "one singular curve of period " + f"{rho.numerator}/{rho.denominator}" + " between two simply connected leaf spaces",
        "isotropy and holonomy groups trivial",
    ]
    return DiscreteData(
        {"pi1": t},
        {"leaf_a": Vertex("leaf_a", PLUS, "pi1"), "leaf_b": Vertex("leaf_b", MINUS, "pi1")},
        {"curve": Edge("curve", "leaf_a", "leaf_b", rho, "pi1", trivial_hom(t, t), trivial_hom(t, t),
                       identity_hom(t), (), ())},
        notes,
    )


def cosymplectic_double(spec: dict) -> DiscreteData:
    """Double of a manifold with cosymplectic boundary.

    ``spec``: ``{"groups": {name: GroupDesc}, "vertex_group": name,
    "components": [{"id", "period", "H", "phi", "hol", "gamma"}]}``.
    Both copies carry the same vertex group; every boundary component
    becomes one edge with the same phi and gamma on both sides.
    """
    try:
        groups = {n: group_from_json(d, f"groups[{n}]") for n, d in spec["groups"].items()}
        gname = spec["vertex_group"]
        G = groups[gname]
        edges = {}
        for k, c in enumerate(spec["components"]):
            eid = c["id"]
            path = f"components[{eid}]"
            H = groups[c["H"]]
            phi = hom_from_json(c["phi"], H, G, path + ".phi")
            hol = hom_from_json(c["hol"], H, H, path + ".hol")
            gamma = elem_from_json(G, c["gamma"], path + ".gamma")
            edges[eid] = Edge(eid, "copy_plus", "copy_minus", _period(c.get("period", "1/1"), path + ".period"),
                              c["H"], phi, phi, hol, gamma, gamma)
    except (KeyError, TypeError) as exc:
        raise BuildError(f"malformed cosymplectic double spec: missing {exc}") from None
    except ParseError as exc:
        raise BuildError(str(exc)) from None
    notes = [
        "double of a manifold along its cosymplectic boundary",
        "two copies of the same vertex group, one edge per boundary component",
    ]
    return DiscreteData(groups, {"copy_plus": Vertex("copy_plus", PLUS, gname),
                                 "copy_minus": Vertex("copy_minus", MINUS, gname)}, edges, notes)


LEFSCHETZ_HOL = [[1, 1], [0, 1]]


def lefschetz_dehn_twist(rho=Fraction(1), projection: int = 2, gamma: int = 1) -> DiscreteData:
    """Mapping torus of a Dehn twist: H = Z^2, vertex groups Z.

    ``projection`` selects the first or second coordinate projection for
    both phi maps and ``gamma`` is the boundary loop class in Z (1 for the
    generator, 0 for the identity).  The default (second projection,
    gamma = 1) is the only choice among the four for which the data is
    valid and nondegenerate; see the notes attached to the result.
    """
    rho = _period(rho)
    if projection not in (1, 2) or gamma not in (0, 1):
        raise BuildError("projection must be 1 or 2 and gamma 0 or 1")
    H = AbelianGroup(2, [])
    Z = AbelianGroup(1, [])
    row = [[1, 0]] if projection == 1 else [[0, 1]]
    phi = Hom.from_matrix(H, Z, row)
    hol = Hom.from_matrix(H, H, LEFSCHETZ_HOL)
    notes = [
        "mapping torus of a Dehn twist: H = Z^2, hol = [[1, 1], [0, 1]], vertex groups Z",
        f"convention: phi_plus = phi_minus = projection to coordinate {projection}, gamma_plus = gamma_minus = {gamma}",
        "the first-coordinate projection is not invariant under hol, so only the",
        "second-coordinate projection gives valid holonomy data; gamma = 1 and",
        "gamma = 0 give the same Picard invariant with this projection",
    ]
    return DiscreteData(
        {"Z": Z, "Z^2": H},
        {"plus": Vertex("plus", PLUS, "Z"), "minus": Vertex("minus", MINUS, "Z")},
        {"twist": Edge("twist", "plus", "minus", rho, "Z^2", phi, phi, hol, (gamma,), (gamma,))},
        notes,
    )


CASE_STUDIES = ("radko_sphere", "cavalcanti_one_curve", "cosymplectic_double", "lefschetz_dehn_twist")


def case_study(name: str, rho=Fraction(1), spec: dict | None = None) -> DiscreteData:
    if name == "radko_sphere":
        return radko_sphere(rho)
    if name == "cavalcanti_one_curve":
        return cavalcanti_one_curve(rho)
    if name == "lefschetz_dehn_twist":
        return lefschetz_dehn_twist(rho)
    if name == "cosymplectic_double":
        if spec is None:
            raise BuildError("cosymplectic_double needs a spec")
        return cosymplectic_double(spec)
    raise BuildError(f"unknown case study {name!r}; choose from {', '.join(CASE_STUDIES)}")
