"""Canonical JSON text format for discrete data and isomorphism witnesses.

A file may start with ``#`` comment lines; they are kept as notes and
written back unchanged.  Serialization sorts keys and ids, writes flat
lists on one line, and always ends with a newline, so equal data gives
byte-identical files.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

from .data import MINUS, PLUS, DiscreteData, Edge, Vertex
from .groups import AbelianGroup, FiniteGroup, GroupError, Hom
from .isos import DiscreteDataIso, HolonomyIso, IsotropyIso, target_side


class ParseError(ValueError):
    """Malformed input file, with a line number and field path when known."""

    def __init__(self, msg: str, path: str = "", line: int | None = None):
        self.path = path
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if path:
            where.append(path)
        super().__init__(f"{', '.join(where)}: {msg}" if where else msg)


# canonical JSON writer -------------------------------------------------


def _scalar(x) -> bool:
    return x is None or isinstance(x, (bool, int, str, float))


def dumps(obj, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dumps(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(_scalar(x) for x in obj):
            return "[" + ", ".join(json.dumps(x) for x in obj) + "]"
        items = [inner + dumps(x, indent + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(obj)


def split_comments(text: str) -> tuple[list[str], str, int]:
    notes = []
    lines = text.splitlines(keepends=True)
    k = 0
    while k < len(lines) and lines[k].lstrip().startswith("#"):
        s = lines[k].strip()[1:]
        notes.append(s[1:] if s.startswith(" ") else s)
        k += 1
    return notes, "".join(lines[k:]), k


def _load_json(text: str):
    notes, body, offset = split_comments(text)
    try:
        return notes, json.loads(body), body, offset
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno + offset) from None


def _line_of(body: str, offset: int, needle: str) -> int | None:
    pos = body.find(needle)
    if pos < 0:
        return None
    return body.count("\n", 0, pos) + 1 + offset


# groups, elements, homs ------------------------------------------------


def group_to_json(g) -> dict:
    if isinstance(g, FiniteGroup):
        return {"kind": "finite_table", "table": [list(r) for r in g.table]}
    return {"kind": "fg_abelian", "free_rank": g.free_rank, "torsion": list(g.torsion)}


def group_from_json(d, path: str):
    if not isinstance(d, dict):
        raise ParseError("group must be an object", path)
    kind = d.get("kind")
    try:
        if kind == "finite_table":
            _keys(d, {"kind", "table"}, path)
            t = d.get("table")
            if not isinstance(t, list) or not all(isinstance(r, list) for r in t):
                raise ParseError("table must be a list of rows", path + ".table")
            return FiniteGroup(t)
        if kind == "fg_abelian":
            _keys(d, {"kind", "free_rank", "torsion"}, path)
            r = d.get("free_rank", 0)
            tors = d.get("torsion", [])
            if not isinstance(r, int) or not isinstance(tors, list):
                raise ParseError("free_rank must be an integer and torsion a list", path)
            return AbelianGroup(r, tors)
    except GroupError as exc:
        raise ParseError(str(exc), path) from None
    raise ParseError(f"unknown group kind {kind!r}", path + ".kind")


def _keys(d: dict, allowed: set, path: str, required: set = frozenset()):
    extra = set(d) - allowed
    if extra:
        raise ParseError(f"unexpected field(s) {sorted(extra)}", path)
    missing = set(required) - set(d)
    if missing:
        raise ParseError(f"missing field(s) {sorted(missing)}", path)


def elem_to_json(g, x):
    return g.encode(x)


def elem_from_json(g, raw, path: str):
    try:
        return g.decode(raw)
    except GroupError as exc:
        raise ParseError(str(exc), path) from None


def hom_to_json(f: Hom) -> dict:
    if isinstance(f.source, AbelianGroup) and isinstance(f.target, AbelianGroup):
        return {"matrix": f.matrix()}
    return {"images": [f.target.encode(y) for y in f.data]}


def hom_from_json(d, source, target, path: str) -> Hom:
    if not isinstance(d, dict) or len(d) != 1:
        raise ParseError("homomorphism must be {\"images\": [...]} or {\"matrix\": [[...]]}", path)
    if "matrix" in d:
        if not (isinstance(source, AbelianGroup) and isinstance(target, AbelianGroup)):
            raise ParseError("matrix form needs abelian source and target", path)
        m = d["matrix"]
        if not isinstance(m, list) or not all(isinstance(r, list) for r in m):
            raise ParseError("matrix must be a list of rows", path)
        if target.dim == 0:
            if m not in ([], [[]]):
                raise ParseError("expected an empty matrix", path)
            m = []
        elif len(m) != target.dim or any(len(r) != source.dim for r in m):
            raise ParseError(f"matrix must have shape {target.dim} x {source.dim}", path)
        cols = []
        for j in range(source.dim):
            col = [m[i][j] for i in range(target.dim)]
            if any(isinstance(c, bool) or not isinstance(c, int) for c in col):
                raise ParseError("matrix entries must be integers", path)
            cols.append(tuple(col))
        return Hom(source, target, tuple(cols))
    if "images" in d:
        imgs = d["images"]
        need = source.n if isinstance(source, FiniteGroup) else source.dim
        if not isinstance(imgs, list) or len(imgs) != need:
            raise ParseError(f"images must list {need} elements", path)
        return Hom(source, target, tuple(elem_from_json(target, y, f"{path}.images[{k}]") for k, y in enumerate(imgs)))
    raise ParseError("homomorphism must have an 'images' or 'matrix' field", path)


# discrete data -----------------------------------------------------------


def period_to_str(p: Fraction) -> str:
    return f"{p.numerator}/{p.denominator}"


def period_from_json(raw, path: str) -> Fraction:
    try:
        if isinstance(raw, bool):
            raise ValueError
        if isinstance(raw, int):
            p = Fraction(raw)
        elif isinstance(raw, str):
            num, _, den = raw.strip().partition("/")
            p = Fraction(int(num), int(den) if den else 1)
        else:
            raise ValueError
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"period must be a string 'num/den' with non-zero denominator, got {raw!r}", path) from None
    if p <= 0:
        raise ParseError(f"period must be positive, got {raw!r}", path)
    return p


def parse(text: str) -> DiscreteData:
    notes, d, body, offset = _load_json(text)
    if not isinstance(d, dict):
        raise ParseError("top level must be an object")
    _keys(d, {"groups", "vertices", "edges"}, "", {"groups", "vertices", "edges"})
    groups = {}
    if not isinstance(d["groups"], dict):
        raise ParseError("groups must be an object", "groups")
    for name, gd in d["groups"].items():
        try:
            groups[name] = group_from_json(gd, f"groups[{name}]")
        except ParseError as exc:
            exc_line = _line_of(body, offset, json.dumps(name))
            raise ParseError(str(exc).split(": ", 1)[-1], exc.path, exc_line) from None
    vertices = {}
    if not isinstance(d["vertices"], list):
        raise ParseError("vertices must be a list", "vertices")
    for k, vd in enumerate(d["vertices"]):
        path = f"vertices[{k}]"
        if not isinstance(vd, dict):
            raise ParseError("vertex must be an object", path)
        _keys(vd, {"id", "sign", "group"}, path, {"id", "sign", "group"})
        vid = vd["id"]
        if not isinstance(vid, str):
            raise ParseError("id must be a string", path + ".id")
        if vid in vertices:
            raise ParseError(f"duplicate vertex id {vid!r}", path, _line_of(body, offset, json.dumps(vid)))
        if vd["group"] not in groups:
            raise ParseError(f"unknown group {vd['group']!r}", f"vertices[{vid}].group", _line_of(body, offset, json.dumps(vid)))
        vertices[vid] = Vertex(vid, vd["sign"], vd["group"])
    edges = {}
    if not isinstance(d["edges"], list):
        raise ParseError("edges must be a list", "edges")
    fields = {"id", "pos_vertex", "neg_vertex", "period", "H", "phi_plus", "phi_minus", "hol",
              "gamma_plus", "gamma_minus"}
    for k, ed in enumerate(d["edges"]):
        if not isinstance(ed, dict):
            raise ParseError("edge must be an object", f"edges[{k}]")
        eid = ed.get("id")
        path = f"edges[{eid if isinstance(eid, str) else k}]"
        line = _line_of(body, offset, json.dumps(eid)) if isinstance(eid, str) else None
        try:
            _keys(ed, fields, path, fields)
            if not isinstance(eid, str):
                raise ParseError("id must be a string", path + ".id")
            if eid in edges:
                raise ParseError(f"duplicate edge id {eid!r}", path)
            ends = {}
            for attr in ("pos_vertex", "neg_vertex"):
                vid = ed[attr]
                if vid not in vertices:
                    raise ParseError(f"unknown vertex {vid!r}", f"{path}.{attr}")
                ends[attr] = groups[vertices[vid].group]
            if ed["H"] not in groups:
                raise ParseError(f"unknown group {ed['H']!r}", f"{path}.H")
            H = groups[ed["H"]]
            edges[eid] = Edge(
                eid,
                ed["pos_vertex"],
                ed["neg_vertex"],
                period_from_json(ed["period"], f"{path}.period"),
                ed["H"],
                hom_from_json(ed["phi_plus"], H, ends["pos_vertex"], f"{path}.phi_plus"),
                hom_from_json(ed["phi_minus"], H, ends["neg_vertex"], f"{path}.phi_minus"),
                hom_from_json(ed["hol"], H, H, f"{path}.hol"),
                elem_from_json(ends["pos_vertex"], ed["gamma_plus"], f"{path}.gamma_plus"),
                elem_from_json(ends["neg_vertex"], ed["gamma_minus"], f"{path}.gamma_minus"),
            )
        except ParseError as exc:
            if exc.line is None and line is not None:
                raise ParseError(str(exc).split(": ", 1)[-1] if exc.path else str(exc), exc.path, line) from None
            raise
    return DiscreteData(groups, vertices, edges, notes)


def to_json(gr: DiscreteData) -> dict:
    edges = []
    for eid, ed in gr.edges.items():
        pos_g = gr.groups[gr.vertices[ed.pos_vertex].group]
        neg_g = gr.groups[gr.vertices[ed.neg_vertex].group]
        edges.append({
            "id": eid,
            "pos_vertex": ed.pos_vertex,
            "neg_vertex": ed.neg_vertex,
            "period": period_to_str(ed.period),
            "H": ed.H,
            "phi_plus": hom_to_json(ed.phi_plus),
            "phi_minus": hom_to_json(ed.phi_minus),
            "hol": hom_to_json(ed.hol),
            "gamma_plus": elem_to_json(pos_g, ed.gamma_plus),
            "gamma_minus": elem_to_json(neg_g, ed.gamma_minus),
        })
    return {
        "groups": {name: group_to_json(g) for name, g in gr.groups.items()},
        "vertices": [{"id": v.id, "sign": v.sign, "group": v.group} for v in gr.vertices.values()],
        "edges": edges,
    }


def _comment_block(notes) -> str:
    return "".join(f"# {n}\n" if n else "#\n" for n in notes)


def serialize(gr: DiscreteData) -> str:
    return _comment_block(gr.notes) + dumps(to_json(gr)) + "\n"


def load(path) -> DiscreteData:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def fixture_path(name: str) -> str:
    """Path of a bundled fixture, e.g. ``fixture_path("radko_sphere")``."""
    if not name.endswith(".bsm"):
        name += ".bsm"
    return str(resources.files("bsm") / "fixtures" / name)


# isomorphism witnesses -------------------------------------------------------


def iso_to_json(f: DiscreteDataIso, gr1: DiscreteData, gr2: DiscreteData) -> dict:
    edges = {}
    for e, m in f.edge_isos.items():
        H2 = m.psi.target
        edges[e] = {
            "psi": hom_to_json(m.psi),
            "psi_minus": hom_to_json(m.iso.psi_minus),
            "psi_plus": hom_to_json(m.iso.psi_plus),
            "h": H2.encode(m.h),
        }
    coc = []
    for (v, i, j), g in sorted(f.cocycles.items()):
        coc.append({"vertex": v, "i": i, "j": j, "g": gr2.vertex_group(f.vertex_map[v]).encode(g)})
    return {
        "orientation": f.orientation,
        "vertex_map": dict(f.vertex_map),
        "edge_map": dict(f.edge_map),
        "edges": edges,
        "cocycles": coc,
    }


def serialize_iso(f: DiscreteDataIso, gr1: DiscreteData, gr2: DiscreteData) -> str:
    return dumps(iso_to_json(f, gr1, gr2)) + "\n"


def parse_iso(text: str, gr1: DiscreteData, gr2: DiscreteData) -> DiscreteDataIso:
    _, d, _, _ = _load_json(text)
    if not isinstance(d, dict):
        raise ParseError("witness must be an object")
    _keys(d, {"orientation", "vertex_map", "edge_map", "edges", "cocycles"}, "",
          {"orientation", "vertex_map", "edge_map", "edges", "cocycles"})
    if d["orientation"] not in ("preserving", "reversing"):
        raise ParseError("orientation must be 'preserving' or 'reversing'", "orientation")
    rev = d["orientation"] == "reversing"
    vm, em = d["vertex_map"], d["edge_map"]
    for v, w in vm.items():
        if v not in gr1.vertices or w not in gr2.vertices:
            raise ParseError(f"unknown vertex in {v!r} -> {w!r}", "vertex_map")
    for e, k in em.items():
        if e not in gr1.edges or k not in gr2.edges:
            raise ParseError(f"unknown edge in {e!r} -> {k!r}", "edge_map")
    isos = {}
    for e, ed in d["edges"].items():
        path = f"edges[{e}]"
        if e not in em:
            raise ParseError("edge missing from edge_map", path)
        k = em[e]
        H1, H2 = gr1.edge_H(e), gr2.edge_H(k)
        psi = hom_from_json(ed.get("psi"), H1, H2, path + ".psi")
        sides = {}
        for s, name in ((MINUS, "psi_minus"), (PLUS, "psi_plus")):
            t = target_side(s, rev)
            g1 = gr1.vertex_group(gr1.edges[e].vertex(s))
            g2 = gr2.vertex_group(gr2.edges[k].vertex(t))
            sides[s] = hom_from_json(ed.get(name), g1, g2, f"{path}.{name}")
        h = elem_from_json(H2, ed.get("h"), path + ".h")
        isos[e] = HolonomyIso(IsotropyIso(rev, psi, sides[MINUS], sides[PLUS]), h)
    coc = {}
    for n, c in enumerate(d["cocycles"]):
        path = f"cocycles[{n}]"
        v = c.get("vertex")
        if v not in vm:
            raise ParseError(f"unknown vertex {v!r}", path)
        coc[(v, c.get("i"), c.get("j"))] = elem_from_json(gr2.vertex_group(vm[v]), c.get("g"), path + ".g")
    return DiscreteDataIso(dict(vm), dict(em), rev, isos, coc, {v: gr1.sign(v) for v in gr1.vertices})
