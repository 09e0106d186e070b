"""Picard group descriptions built from outer automorphisms and periods.

The Picard group is presented as (Out x R^N) / K, where R^N has one
coordinate per edge, Out acts by permuting edge coordinates, and K is
generated by ([T_i]^-1, rho_i e_i) for the twisting automorphisms T_i.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from . import intlinalg as il
from .data import MINUS, PLUS, DiscreteData, HolonomyData, IsotropyData
from .groups import (
    DEFAULT_BOUND,
    AbelianGroup,
    Intertwine,
    Pin,
    conjugation_aut,
    hom_apply,
    solve_isomorphisms,
)
from .isos import (
    DiscreteDataIso,
    HolonomyIso,
    IsoError,
    IsotropyIso,
    compose_holonomy_iso,
    compose_isotropy_iso,
    identity_discrete_iso,
    identity_holonomy_iso,
    inner_holonomy_auto,
    inner_isotropy_auto,
    invert_discrete_iso,
    target_side,
)
from .out import OutAutDescription, format_invariants, out_aut_discrete
from .search import UnsupportedBackend, solve_edge


def twisting_auto(gr: DiscreteData, edge: str) -> DiscreteDataIso:
    """Twist about one edge: (hol_i, conjugation by gamma_i) on that edge,
    identity elsewhere, cocycles gamma_i^s from edge i to its neighbours."""
    if edge not in gr.edges:
        raise IsoError(f"unknown edge {edge!r}")
    f = identity_discrete_iso(gr)
    hd = gr.holonomy(edge)
    iso = IsotropyIso(
        False,
        hd.hol,
        conjugation_aut(hd.G(MINUS), hd.gamma(MINUS)),
        conjugation_aut(hd.G(PLUS), hd.gamma(PLUS)),
    )
    f.edge_isos[edge] = HolonomyIso(iso, hd.H.one)
    for s in (MINUS, PLUS):
        v = gr.edges[edge].vertex(s)
        g = gr.vertex_group(v)
        gam = hd.gamma(s)
        for j in gr.adjacent(v):
            if j != edge:
                f.cocycles[(v, edge, j)] = gam
                f.cocycles[(v, j, edge)] = g.inv(gam)
    return f


def pic_lie_dim(gr: DiscreteData) -> int:
    return len(gr.edges)


@dataclass
class Factor:
    kind: str  # "Z", "Zn", "group", "circle", "line"
    value: object = None

    def __str__(self):
        if self.kind == "Z":
            return "Z"
        if self.kind == "Zn":
            return f"Z{self.value}"
        if self.kind == "group":
            return f"G{self.value}"
        if self.kind == "circle":
            v = Fraction(self.value)
            return f"Circle({v.numerator}/{v.denominator})"
        return "Line"

    @property
    def continuous(self) -> bool:
        return self.kind in ("circle", "line")

    def sort_key(self):
        order = {"Z": 0, "Zn": 1, "group": 2, "circle": 3, "line": 4}
        return (order[self.kind], self.value if self.kind in ("Zn", "group") else 0)


@dataclass
class PicPresentation:
    out_aut: OutAutDescription
    N: int
    edges: list[str]
    periods: list[Fraction]
    twists: list[DiscreteDataIso]
    twist_orders: list[int]
    action: list[tuple[DiscreteDataIso, list[int], int]]
    kernel_generators: list[tuple[DiscreteDataIso, list[Fraction]]]
    sign_flip: bool = False
    notes: list[str] = field(default_factory=list)

    def action_trivial(self) -> bool:
        return all(perm == list(range(self.N)) and sign == 1 for _, perm, sign in self.action)


@dataclass
class PicFactorization:
    factors: list[Factor]
    applicable: bool
    reason: str = ""
    compact_rank: int | None = None

    def continuous_count(self) -> int:
        return sum(1 for f in self.factors if f.continuous)

    def __str__(self):
        if not self.applicable:
            return f"no product decomposition ({self.reason})"
        return " x ".join(str(f) for f in self.factors) if self.factors else "trivial"


def picard_presentation(gr: DiscreteData, bound: int = DEFAULT_BOUND, sign_flip: bool = False,
                        out: OutAutDescription | None = None) -> PicPresentation:
    out = out if out is not None else out_aut_discrete(gr, bound)
    edges = list(gr.edges)
    twists = [twisting_auto(gr, e) for e in edges]
    orders = []
    for t in twists:
        try:
            orders.append(out.element_order(t))
        except Exception as exc:  # structure unknown
            out.notes.append(f"twist order not determined: {exc}")
            orders.append(-1)
    elems = out.representatives if out.kind == "finite" else out._generators
    action = []
    for f in elems:
        perm = [edges.index(f.edge_map[e]) for e in edges]
        sign = -1 if (sign_flip and f.reversing) else 1
        action.append((f, perm, sign))
    kernel = []
    for i, t in enumerate(twists):
        vec = [Fraction(0)] * len(edges)
        vec[i] = gr.period(edges[i])
        kernel.append((invert_discrete_iso(t), vec))
    return PicPresentation(out, len(edges), edges, [gr.period(e) for e in edges], twists, orders,
                           action, kernel, sign_flip, list(out.notes))


def factorize_pic(p: PicPresentation) -> PicFactorization:
    out = p.out_aut
    if not p.action_trivial():
        return PicFactorization([], False, "Out acts non-trivially on the period coordinates")
    circles = []
    if out.kind == "finite" and not out.abelian:
        if any(k != 1 for k in p.twist_orders):
            return PicFactorization([], False, "non-abelian Out with non-trivial twists")
        factors = [Factor("group", out.order)] + [Factor("circle", r) for r in p.periods]
        return PicFactorization(factors, True, compact_rank=p.N)
    if not out.abelian:
        return PicFactorization([], False, "Out is not known to be abelian")
    try:
        st = out.structure_with(p.twists)
    except Exception as exc:
        return PicFactorization([], False, f"structure not determined: {exc}")
    m = st.ngens - p.N
    tw = list(range(m, st.ngens))
    orders = [st.order_of([int(j == c) for j in range(st.ngens)]) for c in tw]
    meet = st.meet_coordinates(tw)
    diag = il.hermite_basis([[k if a == b else 0 for b in range(p.N)] for a, k in enumerate(orders) if k], p.N)
    rank = len(meet)
    if meet != diag:
        return PicFactorization([], False, "twist classes are not independent", compact_rank=rank)
    quot = st.quotient([[int(j == c) for j in range(st.ngens)] for c in tw])
    free, tors = quot.invariants()
    factors = [Factor("Z") for _ in range(free)] + [Factor("Zn", d) for d in tors]
    for k, rho in zip(orders, p.periods):
        circles.append(Factor("circle", k * rho) if k else Factor("line"))
    factors += circles
    factors.sort(key=Factor.sort_key)
    return PicFactorization(factors, True, compact_rank=rank)


# affine plane and single cylinder -------------------------------------------


@dataclass
class PlaneDescription:
    order: int | None
    invariants: tuple | None
    abelian: bool
    complete: bool
    autos: int

    def factors(self) -> list[Factor]:
        out = []
        if self.invariants is not None:
            free, tors = self.invariants
            out += [Factor("Z")] * free + [Factor("Zn", d) for d in tors]
        elif self.order and self.order > 1:
            out.append(Factor("group", self.order))
        return out + [Factor("line")]

    def __str__(self):
        fs = self.factors()
        return " x ".join(str(f) for f in fs)


def _isotropy_autos(iso: IsotropyData, orientations, bound):
    autos, complete = [], True
    psis = solve_isomorphisms(iso.H, iso.H, [], bound)
    complete &= psis.complete
    for reversing in orientations:
        for psi in psis:
            sides = {}
            for s in (MINUS, PLUS):
                t = target_side(s, reversing)
                cons = [Pin(hom_apply(iso.phi(s), x), hom_apply(iso.phi(t), hom_apply(psi, x)))
                        for x in iso.H.generators()]
                r = solve_isomorphisms(iso.G(s), iso.G(t), cons, bound)
                complete &= r.complete
                sides[s] = r.solutions
            for pm, pp in product(sides[MINUS], sides[PLUS]):
                autos.append(IsotropyIso(reversing, psi, pm, pp))
    return autos, complete


def _finite_quotient(autos, inner, compose, key):
    cls, reps = {}, []
    for a in autos:
        if key(a) in cls:
            continue
        reps.append(a)
        for i in inner:
            cls[key(compose(a, i))] = len(reps) - 1
    table = [[cls[key(compose(a, b))] for b in reps] for a in reps]
    return reps, table, cls


def _table_invariants(reps, table, compose, key, cls):
    from .abelian import find_relations
    n = len(reps)
    abelian = all(table[i][j] == table[j][i] for i in range(n) for j in range(n))
    if not abelian:
        return False, None
    one = next(r for r in reps if cls[key(r)] == _identity_class(table))
    st = find_relations(reps, compose, None, one, lambda x: cls[key(x)])
    return True, st.invariants()


def _identity_class(table):
    for i, row in enumerate(table):
        if row == list(range(len(row))):
            return i
    raise RuntimeError("no identity in table")


def picard_plane(iso: IsotropyData, orientation: str = "both", bound: int = DEFAULT_BOUND) -> PlaneDescription:
    """Automorphisms of isotropy data modulo conjugations, times a line.

    ``orientation`` is "both" or "preserving" (only maps that keep sides).
    """
    orients = (False, True) if orientation == "both" else (False,)
    autos, complete = _isotropy_autos(iso, orients, bound)
    if iso.H.finite:
        inner = {}
        for a in iso.H.elements():
            i = inner_isotropy_auto(iso, a)
            inner.setdefault(i.key(), i)
        inner = list(inner.values())
    elif isinstance(iso.H, AbelianGroup) and iso.G_minus.is_abelian() and iso.G_plus.is_abelian():
        inner = [inner_isotropy_auto(iso, iso.H.one)]
    else:
        raise UnsupportedBackend("conjugations of an infinite non-abelian setting")
    if not autos:
        raise RuntimeError("no automorphisms found")
    key = lambda a: a.key()
    reps, table, cls = _finite_quotient(autos, inner, compose_isotropy_iso, key)
    abelian, inv = _table_invariants(reps, table, compose_isotropy_iso, key, cls)
    return PlaneDescription(len(reps), inv, abelian, complete, len(autos))


@dataclass
class CylinderDescription:
    order: int
    abelian: bool
    invariants: tuple | None
    twist_order: int
    period: Fraction
    kernel_generator: tuple

    def factors(self) -> list[Factor]:
        out = []
        if self.abelian and self.invariants is not None:
            free, tors = self.invariants
            # quotient by the twist subgroup handled only for trivial twist
            if self.twist_order == 1:
                out += [Factor("Z")] * free + [Factor("Zn", d) for d in tors]
                out.append(Factor("circle", self.period))
        return out


def picard_cylinder(hd: HolonomyData, rho: Fraction, bound: int = DEFAULT_BOUND) -> CylinderDescription:
    """Single-cylinder Picard data computed directly from holonomy maps.

    Finite groups only: holonomy automorphisms modulo inner ones, the
    class of (hol, e) and the kernel generator (twist^-1, rho).
    """
    if not (hd.H.finite and hd.G(PLUS).finite and hd.G(MINUS).finite):
        raise UnsupportedBackend("the direct cylinder computation needs finite groups")
    autos = []
    for reversing in (False, True):
        for sol in solve_edge(hd, hd, reversing, bound).solutions:
            for h in sol.hs:
                autos.append(HolonomyIso(sol.iso, h))
    inner = {}
    for a in hd.H.elements():
        i = inner_holonomy_auto(hd, a)
        inner.setdefault(i.key(), i)
    key = lambda a: a.key()
    reps, table, cls = _finite_quotient(autos, list(inner.values()), compose_holonomy_iso, key)
    twist = HolonomyIso(IsotropyIso(False, hd.hol, conjugation_aut(hd.G(MINUS), hd.gamma(MINUS)),
                                    conjugation_aut(hd.G(PLUS), hd.gamma(PLUS))), hd.H.one)
    tclass = cls[twist.key()]
    ident = cls[identity_holonomy_iso(hd).key()]
    k, j = 1, tclass
    while j != ident:
        j = table[j][tclass]
        k += 1
    abelian, inv = _table_invariants(reps, table, compose_holonomy_iso, key, cls)
    inv_twist = next(r for r in reps if table[cls[r.key()]][tclass] == ident)
    return CylinderDescription(len(reps), abelian, inv, k, Fraction(rho), (inv_twist, Fraction(rho)))
