"""Brute-force reference enumerations for small finite data.

Nothing here uses the pruned search.  Group automorphisms come from
trying every bijection that respects the multiplication table, data
isomorphisms from every graph bijection, every triple of group
isomorphisms, every h and every cocycle table, kept only if they pass
the validators.  Slow by design and guarded by size limits.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from .data import MINUS, PLUS, DiscreteData
from .groups import Hom
from .isos import (
    DiscreteDataIso,
    HolonomyIso,
    IsotropyIso,
    compose_discrete_iso,
    target_side,
    validate_discrete_iso,
    validate_holonomy_iso,
)

MAX_ORDER = 12
MAX_EDGES = 3


class OracleLimit(ValueError):
    """Input larger than the oracle accepts."""


def _check_group(g):
    if not g.finite:
        raise OracleLimit("oracle only handles finite groups")
    if g.order() > MAX_ORDER:
        raise OracleLimit(f"group of order {g.order()} exceeds the oracle limit {MAX_ORDER}")


def brute_group_isos(g1, g2) -> list[Hom]:
    """Every bijection g1 -> g2 that respects multiplication."""
    _check_group(g1)
    _check_group(g2)
    e1, e2 = g1.elements(), g2.elements()
    if len(e1) != len(e2):
        return []
    n = len(e1)
    idx = {x: k for k, x in enumerate(e1)}
    prod = [[idx[g1.mul(a, b)] for b in e1] for a in e1]
    out = []
    img = [None] * n
    used = set()

    def rec(k):
        if k == n:
            out.append(tuple(img))
            return
        for y in e2:
            if y in used:
                continue
            img[k] = y
            ok = True
            for j in range(k + 1):
                for a, b in ((k, j), (j, k)):
                    c = prod[a][b]
                    if c <= k and img[c] != g2.mul(img[a], img[b]):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                used.add(y)
                rec(k + 1)
                used.discard(y)
        img[k] = None

    rec(0)
    return [_as_hom(g1, g2, imgs) for imgs in out]


def _as_hom(g1, g2, imgs) -> Hom:
    """Hom from the image of every element, in the storage form the Hom type expects."""
    table = dict(zip(g1.elements(), imgs))
    return Hom.from_function(g1, g2, lambda x: table[g1.normalize(x)])


def brute_group_autos(g) -> list[Hom]:
    return brute_group_isos(g, g)


def _guard(gr: DiscreteData):
    if len(gr.edges) > MAX_EDGES:
        raise OracleLimit(f"{len(gr.edges)} edges exceed the oracle limit {MAX_EDGES}")
    for name in {v.group for v in gr.vertices.values()} | {e.H for e in gr.edges.values()}:
        _check_group(gr.groups[name])


def _graph_bijections(gr1: DiscreteData, gr2: DiscreteData):
    vs1, vs2 = list(gr1.vertices), list(gr2.vertices)
    es1, es2 = list(gr1.edges), list(gr2.edges)
    if len(vs1) != len(vs2) or len(es1) != len(es2):
        return
    for rev in (False, True):
        for vp in permutations(vs2):
            vm = dict(zip(vs1, vp))
            if any(gr2.sign(vm[v]) != (gr1.sign(v) if not rev else (MINUS if gr1.sign(v) == PLUS else PLUS))
                   for v in vs1):
                continue
            for ep in permutations(es2):
                em = dict(zip(es1, ep))
                ok = True
                for e, k in em.items():
                    for s in (PLUS, MINUS):
                        if vm[gr1.edges[e].vertex(s)] != gr2.edges[k].vertex(target_side(s, rev)):
                            ok = False
                    if gr1.period(e) != gr2.period(k):
                        ok = False
                if ok:
                    yield rev, vm, em


def _edge_isos(gr1, gr2, e, k, rev, cache):
    key = (e, k, rev)
    if key in cache:
        return cache[key]
    hd1, hd2 = gr1.holonomy(e), gr2.holonomy(k)
    psis = brute_group_isos(hd1.H, hd2.H)
    side = {}
    for s in (MINUS, PLUS):
        t = target_side(s, rev)
        side[s] = brute_group_isos(hd1.G(s), hd2.G(t))
    found = []
    for psi, pm, pp in product(psis, side[MINUS], side[PLUS]):
        iso = IsotropyIso(rev, psi, pm, pp)
        for h in hd2.H.elements():
            m = HolonomyIso(iso, h)
            if validate_holonomy_iso(m, hd1, hd2).ok:
                found.append(m)
    cache[key] = found
    return found


def _vertex_tables(gr1, gr2, v, w, edge_isos, em):
    """All cocycle tables at v satisfying the conjugation and product rules."""
    adj = gr1.adjacent(v)
    G2 = gr2.vertex_group(w)
    elems = G2.elements()
    slots = [(i, j) for i in adj for j in adj]
    sides = {i: gr1.edge_sign_at(i, v) for i in adj}
    dom = gr1.vertex_group(v).elements()

    def psi(i):
        return edge_isos[i].side(sides[i])

    tables = []
    for vals in product(elems, repeat=len(slots)):
        g = dict(zip(slots, vals))
        ok = True
        for (i, j), x in g.items():
            xi = G2.inv(x)
            pi, pj = psi(i), psi(j)
            if any(pi(a) != G2.mul(G2.mul(x, pj(a)), xi) for a in dom):
                ok = False
                break
        if ok:
            for i, j, k in product(adj, repeat=3):
                if G2.mul(g[(i, j)], g[(j, k)]) != g[(i, k)]:
                    ok = False
                    break
        if ok:
            tables.append({(v, i, j): x for (i, j), x in g.items()})
    return tables


def brute_isos(gr1: DiscreteData, gr2: DiscreteData) -> list[DiscreteDataIso]:
    """Every valid isomorphism gr1 -> gr2, sorted canonically."""
    _guard(gr1)
    _guard(gr2)
    cache: dict = {}
    out = {}
    signs = {v: gr1.sign(v) for v in gr1.vertices}
    for rev, vm, em in _graph_bijections(gr1, gr2):
        es = list(em)
        choices = [_edge_isos(gr1, gr2, e, em[e], rev, cache) for e in es]
        for combo in product(*choices):
            eisos = dict(zip(es, combo))
            per_vertex = [_vertex_tables(gr1, gr2, v, vm[v], eisos, em) for v in gr1.vertices]
            for tabs in product(*per_vertex):
                coc = {}
                for t in tabs:
                    coc.update(t)
                f = DiscreteDataIso(dict(vm), dict(em), rev, dict(eisos), coc, dict(signs))
                if validate_discrete_iso(f, gr1, gr2).ok:
                    out[f.key()] = f
    return sorted(out.values(), key=lambda f: f.sort_key())


def _brute_inner(gr: DiscreteData) -> list[DiscreteDataIso]:
    """Inner automorphisms built straight from their defining formulas."""
    es = list(gr.edges)
    signs = {v: gr.sign(v) for v in gr.vertices}
    out = {}
    for alphas in product(*(gr.edge_H(e).elements() for e in es)):
        a = dict(zip(es, alphas))
        eisos = {}
        for e in es:
            hd = gr.holonomy(e)
            H = hd.H
            x, xi = a[e], H.inv(a[e])
            psi = Hom.from_function(H, H, lambda y, x=x, xi=xi, H=H: H.mul(H.mul(x, y), xi))
            sides = {}
            for s in (MINUS, PLUS):
                G = hd.G(s)
                gx = hd.phi(s)(x)
                gxi = G.inv(gx)
                sides[s] = Hom.from_function(G, G, lambda y, gx=gx, gxi=gxi, G=G: G.mul(G.mul(gx, y), gxi))
            h = H.mul(hd.hol(x), xi)
            eisos[e] = HolonomyIso(IsotropyIso(False, psi, sides[MINUS], sides[PLUS]), h)
        coc = {}
        for v in gr.vertices:
            G = gr.vertex_group(v)
            for i in gr.adjacent(v):
                for j in gr.adjacent(v):
                    gi = gr.edges[i].phi_plus if gr.edges[i].pos_vertex == v else gr.edges[i].phi_minus
                    gj = gr.edges[j].phi_plus if gr.edges[j].pos_vertex == v else gr.edges[j].phi_minus
                    coc[(v, i, j)] = G.mul(gi(a[i]), G.inv(gj(a[j])))
        f = DiscreteDataIso({v: v for v in gr.vertices}, {e: e for e in es}, False, eisos, coc, dict(signs))
        out[f.key()] = f
    return list(out.values())


@dataclass
class BruteOut:
    autos: list[DiscreteDataIso]
    inner: list[DiscreteDataIso]
    classes: list[list[DiscreteDataIso]]
    class_of: dict

    @property
    def order(self) -> int:
        return len(self.classes)


def brute_out_aut(gr: DiscreteData) -> BruteOut:
    """Automorphisms grouped into classes f ~ f o i for inner i (union-find)."""
    autos = brute_isos(gr, gr)
    inner = _brute_inner(gr)
    keys = [f.key() for f in autos]
    parent = {k: k for k in keys}

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for f in autos:
        for i in inner:
            g = compose_discrete_iso(f, i).key()
            if g not in parent:
                raise RuntimeError("automorphism composed with an inner automorphism is missing from the enumeration")
            a, b = find(f.key()), find(g)
            if a != b:
                parent[max(a, b, key=repr)] = min(a, b, key=repr)
    groups: dict = {}
    for f in autos:
        groups.setdefault(find(f.key()), []).append(f)
    classes = sorted(groups.values(), key=lambda c: c[0].sort_key())
    class_of = {f.key(): n for n, c in enumerate(classes) for f in c}
    return BruteOut(autos, inner, classes, class_of)
