"""Deterministic corpus of small decorated graphs over finite groups.

Shapes cover every connected or disconnected signed graph with one or
two edges.  Vertex and edge groups are drawn from 1, Z2, Z3, Z2xZ2 and
S3 and periods from {1, 2}.  Enumerating every decoration is far too
large, so decorations are sampled with a fixed seed; ``twin`` produces
an isomorphic copy with renamed ids and transported decorations.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from .data import MINUS, PLUS, DiscreteData, Edge, Vertex, validate_discrete
from .groups import (
    FiniteGroup,
    Hom,
    cyclic_table,
    direct_product_table,
    extend_to_hom,
    hom_compose,
    symmetric_group_table,
)

SEED = 20240611


def small_groups() -> dict[str, FiniteGroup]:
    return {
        "1": cyclic_table(1),
        "Z2": cyclic_table(2),
        "Z3": cyclic_table(3),
        "Z2xZ2": direct_product_table(cyclic_table(2), cyclic_table(2)),
        "S3": symmetric_group_table(3),
    }


# (vertex signs, edges as (pos, neg))
SHAPES = {
    "one_edge": ({"a": PLUS, "b": MINUS}, [("a", "b")]),
    "path_plus_center": ({"a": PLUS, "b": MINUS, "c": MINUS}, [("a", "b"), ("a", "c")]),
    "path_minus_center": ({"a": MINUS, "b": PLUS, "c": PLUS}, [("b", "a"), ("c", "a")]),
    "parallel": ({"a": PLUS, "b": MINUS}, [("a", "b"), ("a", "b")]),
    "disjoint": ({"a": PLUS, "b": MINUS, "c": PLUS, "d": MINUS}, [("a", "b"), ("c", "d")]),
}


def all_homs(h: FiniteGroup, g: FiniteGroup) -> list[Hom]:
    gens = h.generators()
    out = {}
    for imgs in product(g.elements(), repeat=len(gens)):
        table = extend_to_hom(h, g, gens, imgs)
        if table is not None:
            f = Hom(h, g, tuple(table[x] for x in range(h.n)))
            out[f.key()] = f
    return list(out.values())


def _autos(g: FiniteGroup) -> list[Hom]:
    return [f for f in all_homs(g, g) if len(set(f.data)) == g.n]


def _valid_gammas(phi: Hom, hol: Hom, G: FiniteGroup) -> list[int]:
    H = phi.source
    target = [phi(hol(x)) for x in range(H.n)]
    return [g for g in G.elements()
            if all(G.mul(G.mul(g, phi(x)), G.inv(g)) == target[x] for x in range(H.n))]


def random_datum(rng: random.Random, shape: str, groups: dict | None = None, tries: int = 50) -> DiscreteData:
    groups = groups or small_groups()
    names = sorted(groups)
    signs, pairs = SHAPES[shape]
    for _ in range(tries):
        vgroup = {v: rng.choice(names) for v in signs}
        edges = {}
        ok = True
        for n, (p, m) in enumerate(pairs):
            hname = rng.choice(names)
            H = groups[hname]
            phis = {}
            for s, v in ((PLUS, p), (MINUS, m)):
                phis[s] = rng.choice(all_homs(H, groups[vgroup[v]]))
            hol = rng.choice(_autos(H))
            gammas = {}
            for s, v in ((PLUS, p), (MINUS, m)):
                cands = _valid_gammas(phis[s], hol, groups[vgroup[v]])
                if not cands:
                    ok = False
                    break
                gammas[s] = rng.choice(cands)
            if not ok:
                break
            eid = f"e{n + 1}"
            edges[eid] = Edge(eid, p, m, Fraction(rng.choice((1, 2))), hname, phis[PLUS], phis[MINUS],
                              hol, gammas[PLUS], gammas[MINUS])
        if not ok:
            continue
        used = set(vgroup.values()) | {e.H for e in edges.values()}
        gr = DiscreteData({k: groups[k] for k in used},
                          {v: Vertex(v, s, vgroup[v]) for v, s in signs.items()}, edges)
        if validate_discrete(gr).ok:
            return gr
    raise RuntimeError(f"could not sample a valid datum of shape {shape}")


def twin(gr: DiscreteData, rng: random.Random) -> DiscreteData:
    """Isomorphic copy: ids renamed, vertex groups twisted by random automorphisms."""
    sigma = {v: rng.choice(_autos(gr.vertex_group(v))) for v in gr.vertices}
    vnames = {v: f"x_{v}" for v in gr.vertices}
    enames = {e: f"y_{e}" for e in gr.edges}
    vertices = {vnames[v]: Vertex(vnames[v], vx.sign, vx.group) for v, vx in gr.vertices.items()}
    edges = {}
    for e, ed in gr.edges.items():
        sp, sm = sigma[ed.pos_vertex], sigma[ed.neg_vertex]
        edges[enames[e]] = Edge(enames[e], vnames[ed.pos_vertex], vnames[ed.neg_vertex], ed.period, ed.H,
                                hom_compose(sp, ed.phi_plus), hom_compose(sm, ed.phi_minus), ed.hol,
                                sp(ed.gamma_plus), sm(ed.gamma_minus))
    return DiscreteData(dict(gr.groups), vertices, edges, [])


def corpus(per_shape: int = 6, seed: int = SEED) -> list[tuple[str, DiscreteData]]:
    """Fixed sample: per_shape data for each shape, named shape/index."""
    rng = random.Random(seed)
    groups = small_groups()
    out = []
    for shape in SHAPES:
        for k in range(per_shape):
            out.append((f"{shape}/{k}", random_datum(rng, shape, groups)))
    return out
