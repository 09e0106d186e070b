from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bsm.builders import lefschetz_dehn_twist, radko_sphere
from bsm.corpus import small_groups
from bsm.data import MINUS, PLUS, DiscreteData, Edge, HolonomyData, IsotropyData, Vertex
from bsm.groups import AbelianGroup, Hom, cyclic_table, hom_compose, identity_hom, trivial_hom
from bsm.isos import (
    REVERSING_NOTE,
    DiscreteDataIso,
    HolonomyIso,
    IsotropyIso,
    compose_discrete_iso,
    compose_holonomy_iso,
    identity_discrete_iso,
    identity_holonomy_iso,
    identity_isotropy_iso,
    inner_discrete_auto,
    inner_holonomy_auto,
    inner_witnesses_abelian,
    invert_discrete_iso,
    invert_holonomy_iso,
    is_inner_discrete,
    is_inner_holonomy,
    validate_discrete_iso,
    validate_holonomy_iso,
    validate_isotropy_iso,
)
from bsm.search import find_discrete_isos

T = AbelianGroup(0)


def radko_swap(gr):
    hd = gr.holonomy("equator")
    iso = IsotropyIso(True, identity_hom(T), identity_hom(T), identity_hom(T))
    return DiscreteDataIso(
        {"north": "south", "south": "north"},
        {"equator": "equator"},
        True,
        {"equator": HolonomyIso(iso, ())},
        {("north", "equator", "equator"): (), ("south", "equator", "equator"): ()},
        {"north": PLUS, "south": MINUS},
    )


def test_identity_valid_everywhere(small_corpus):
    for name, gr in small_corpus:
        f = identity_discrete_iso(gr)
        assert validate_discrete_iso(f, gr, gr).ok, name
        assert f.orientation == "preserving"


def test_trivial_reversing_isotropy_iso():
    i = IsotropyData(T, T, T, trivial_hom(T, T), trivial_hom(T, T))
    m = IsotropyIso(True, identity_hom(T), identity_hom(T), identity_hom(T))
    assert validate_isotropy_iso(m, i, i).ok


@pytest.mark.parametrize("a", [-2, 0, 1, 5])
def test_lefschetz_shear_isotropy_iso(a):
    hd = lefschetz_dehn_twist().holonomy("twist")
    z = hd.G(PLUS)
    psi = Hom.from_matrix(hd.H, hd.H, [[1, a], [0, 1]])
    m = IsotropyIso(False, psi, identity_hom(z), identity_hom(z))
    # the second projection is unchanged by the shear, so the squares commute
    assert validate_isotropy_iso(m, hd.iso, hd.iso).ok


def test_lefschetz_swap_of_coordinates_fails_squares():
    hd = lefschetz_dehn_twist().holonomy("twist")
    z = hd.G(PLUS)
    psi = Hom.from_matrix(hd.H, hd.H, [[0, 1], [1, 0]])
    m = IsotropyIso(False, psi, identity_hom(z), identity_hom(z))
    assert not validate_isotropy_iso(m, hd.iso, hd.iso).ok


def test_lefschetz_twist_candidate_valid():
    hd = lefschetz_dehn_twist().holonomy("twist")
    z = hd.G(PLUS)
    m = HolonomyIso(IsotropyIso(False, hd.hol, identity_hom(z), identity_hom(z)), (0, 0))
    assert validate_holonomy_iso(m, hd, hd).ok


def test_lefschetz_inner_translations():
    hd = lefschetz_dehn_twist().holonomy("twist")
    # hol - id = [[0, 1], [0, 0]], whose image is {(w, 0)}
    for w in range(-3, 4):
        x, _ = inner_witnesses_abelian(hd, (w, 0))
        assert x is not None
        assert inner_holonomy_auto(hd, tuple(x)).h == (w, 0)
    x, _ = inner_witnesses_abelian(hd, (0, 1))
    assert x is None
    m = HolonomyIso(identity_isotropy_iso(hd.iso), (0, 1))
    assert is_inner_holonomy(m, hd) is None
    assert is_inner_holonomy(HolonomyIso(identity_isotropy_iso(hd.iso), (4, 0)), hd) is not None


def test_inner_holonomy_alpha_identity():
    hd = lefschetz_dehn_twist().holonomy("twist")
    assert inner_holonomy_auto(hd, (0, 0)) == identity_holonomy_iso(hd)


def _all_edges(corpus):
    for name, gr in corpus:
        for e in gr.edges:
            yield name, e, gr.holonomy(e)


def test_inner_holonomy_always_valid_exhaustive(small_corpus):
    for name, e, hd in _all_edges(small_corpus):
        for a in hd.H.elements():
            assert validate_holonomy_iso(inner_holonomy_auto(hd, a), hd, hd).ok, (name, e, a)


def test_inner_composition_is_inner_of_product(small_corpus):
    for name, e, hd in _all_edges(small_corpus):
        H = hd.H
        for a in H.elements():
            for b in H.elements():
                lhs = compose_holonomy_iso(inner_holonomy_auto(hd, a), inner_holonomy_auto(hd, b))
                assert lhs == inner_holonomy_auto(hd, H.mul(a, b)), (name, e)


def test_inner_composition_z4():
    # H = Z4 with hol = inversion, trivial vertex groups: h(alpha) = -2 alpha
    z4 = cyclic_table(4)
    inv = Hom.checked(z4, z4, (0, 3, 2, 1))
    t = cyclic_table(1)
    hd = HolonomyData(IsotropyData(z4, t, t, trivial_hom(z4, t), trivial_hom(z4, t)), inv, 0, 0)
    for a in range(4):
        assert inner_holonomy_auto(hd, a).h == (-2 * a) % 4
        for b in range(4):
            m = compose_holonomy_iso(inner_holonomy_auto(hd, a), inner_holonomy_auto(hd, b))
            assert m == inner_holonomy_auto(hd, (a + b) % 4)
            assert m.h == (inner_holonomy_auto(hd, a).h + inner_holonomy_auto(hd, b).h) % 4


def test_compose_formula_and_identity(corpus_twins):
    for name, gr, tw in corpus_twins[:9]:
        for e in gr.edges:
            hd = gr.holonomy(e)
            for f in find_discrete_isos(gr, gr).isos[:4]:
                m1 = f.edge_isos[f.edge_map[e]] if f.edge_map[e] in f.edge_isos else None
                m = f.edge_isos[e]
                k = f.edge_map[e]
                # m: e -> k; compose with identity on both sides
                assert compose_holonomy_iso(m, identity_holonomy_iso(hd)) == m
                assert compose_holonomy_iso(identity_holonomy_iso(gr.holonomy(k)), m) == m
                mi = invert_holonomy_iso(m)
                assert compose_holonomy_iso(mi, m) == identity_holonomy_iso(hd)
                if m1 is not None:
                    c = compose_holonomy_iso(m1, m)
                    H = m1.psi.target
                    assert c.h == H.mul(m1.h, m1.psi(m.h))
                    assert c.psi == hom_compose(m1.psi, m.psi)


def test_two_reversing_compose_to_preserving():
    gr = radko_sphere()
    s = radko_swap(gr)
    assert validate_discrete_iso(s, gr, gr).ok
    c = compose_discrete_iso(s, s)
    assert not c.reversing
    assert c == identity_discrete_iso(gr)
    assert is_inner_discrete(c, gr) is not None


def test_reversing_reports_note():
    gr = radko_sphere()
    rep = validate_discrete_iso(radko_swap(gr), gr, gr)
    assert REVERSING_NOTE in rep.notes


def test_period_mismatch_invalid():
    a, b = radko_sphere(1), radko_sphere(2)
    rep = validate_discrete_iso(radko_swap(a), a, b)
    assert not rep.ok
    assert any("period" in p or "period" in m for p, m in rep.errors)


def test_only_inner_on_radko_is_identity():
    gr = radko_sphere()
    assert inner_discrete_auto(gr, {"equator": ()}) == identity_discrete_iso(gr)
    assert is_inner_discrete(radko_swap(gr), gr) is None


def test_all_alpha_identity_gives_identity(small_corpus):
    for name, gr in small_corpus:
        alphas = {e: gr.edge_H(e).one for e in gr.edges}
        assert inner_discrete_auto(gr, alphas) == identity_discrete_iso(gr), name


def test_discrete_validity_closed_under_composition_and_inverse(corpus_twins):
    for name, gr, tw in corpus_twins:
        autos = find_discrete_isos(gr, gr).isos[:12]
        isos = find_discrete_isos(gr, tw).isos[:6]
        for f in isos:
            fi = invert_discrete_iso(f)
            assert validate_discrete_iso(fi, tw, gr).ok, name
            assert compose_discrete_iso(fi, f) == identity_discrete_iso(gr)
            for a in autos:
                assert validate_discrete_iso(compose_discrete_iso(f, a), gr, tw).ok, name
        for a in autos:
            for b in autos:
                assert validate_discrete_iso(compose_discrete_iso(a, b), gr, gr).ok, name


def test_inner_autos_normal_with_witness(small_corpus):
    from itertools import product

    for name, gr in small_corpus:
        autos = find_discrete_isos(gr, gr).isos[:10]
        edges = list(gr.edges)
        alphas = list(product(*(gr.edge_H(e).elements() for e in edges)))[:12]
        for al in alphas:
            i = inner_discrete_auto(gr, dict(zip(edges, al)))
            assert validate_discrete_iso(i, gr, gr).ok
            for f in autos:
                c = compose_discrete_iso(compose_discrete_iso(f, i), invert_discrete_iso(f))
                w = is_inner_discrete(c, gr)
                assert w is not None, name
                assert inner_discrete_auto(gr, w) == c


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
@settings(max_examples=60, deadline=None)
def test_lefschetz_inner_discrete_abelian(a1, a2, b1, b2):
    gr = lefschetz_dehn_twist()
    f = inner_discrete_auto(gr, {"twist": (a1, a2)})
    g = inner_discrete_auto(gr, {"twist": (b1, b2)})
    assert validate_discrete_iso(f, gr, gr).ok
    c = compose_discrete_iso(f, g)
    assert c == inner_discrete_auto(gr, {"twist": (a1 + b1, a2 + b2)})
    assert is_inner_discrete(c, gr) is not None
