from fractions import Fraction

from bsm.builders import lefschetz_dehn_twist, radko_sphere
from bsm.corpus import small_groups
from bsm.data import (
    MINUS,
    PLUS,
    DiscreteData,
    Edge,
    HolonomyData,
    IsotropyData,
    Vertex,
    validate_discrete,
    validate_holonomy,
    validate_isotropy,
)
from bsm.groups import AbelianGroup, Hom, cyclic_table, identity_hom, trivial_hom

G = small_groups()


def one_edge(vg_plus, vg_minus, H, phi_plus, phi_minus, hol, gp, gm, signs=(PLUS, MINUS)):
    groups = {"P": vg_plus, "M": vg_minus, "H": H}
    return DiscreteData(
        groups,
        {"p": Vertex("p", signs[0], "P"), "m": Vertex("m", signs[1], "M")},
        {"e": Edge("e", "p", "m", Fraction(1), "H", phi_plus, phi_minus, hol, gp, gm)},
    )


def test_isotropy_validation():
    z2 = G["Z2"]
    i = IsotropyData(z2, z2, z2, identity_hom(z2), identity_hom(z2))
    assert validate_isotropy(i).ok
    bad = IsotropyData(G["Z3"], z2, z2, Hom(G["Z3"], z2, (0, 1, 1)), trivial_hom(G["Z3"], z2))
    rep = validate_isotropy(bad)
    assert not rep.ok
    assert any("phi" in p for p, _ in rep.errors)


def test_holonomy_condition_checked():
    s3 = G["S3"]
    z2 = G["Z2"]
    # phi: Z2 -> S3 onto a transposition; conjugating by a 3-cycle moves it
    t = next(x for x in s3.elements() if s3.element_order(x) == 2)
    c = next(x for x in s3.elements() if s3.element_order(x) == 3)
    phi = Hom.checked(z2, s3, (0, t))
    iso = IsotropyData(z2, s3, s3, phi, phi)
    assert validate_holonomy(HolonomyData(iso, identity_hom(z2), 0, 0)).ok
    rep = validate_holonomy(HolonomyData(iso, identity_hom(z2), c, 0))
    assert not rep.ok


def test_valid_fixtures():
    assert validate_discrete(radko_sphere(Fraction(3, 2))).ok
    assert validate_discrete(lefschetz_dehn_twist()).ok


def test_first_projection_lefschetz_invalid():
    rep = validate_discrete(lefschetz_dehn_twist(projection=1))
    assert not rep.ok
    assert all(p.startswith("edges[twist]") for p, _ in rep.errors)


def test_sign_violation_names_edge():
    t = G["1"]
    gr = one_edge(t, t, t, trivial_hom(t, t), trivial_hom(t, t), identity_hom(t), 0, 0, signs=(MINUS, MINUS))
    rep = validate_discrete(gr)
    assert [p for p, _ in rep.errors] == ["edges[e].pos_vertex"]


def test_errors_reported_for_every_edge():
    z2, z3 = G["Z2"], G["Z3"]
    bad = Hom(z3, z2, (0, 1, 1))
    groups = {"A": z2, "H": z3}
    edges = {
        eid: Edge(eid, "p", "m", Fraction(1), "H", bad, bad, identity_hom(z3), 0, 0) for eid in ("e1", "e2")
    }
    gr = DiscreteData(groups, {"p": Vertex("p", PLUS, "A"), "m": Vertex("m", MINUS, "A")}, edges)
    paths = {p.split(".")[0] for p, _ in validate_discrete(gr).errors}
    assert paths == {"edges[e1]", "edges[e2]"}


def test_nonpositive_period_rejected():
    t = AbelianGroup(0)
    gr = DiscreteData(
        {"1": t},
        {"p": Vertex("p", PLUS, "1"), "m": Vertex("m", MINUS, "1")},
        {"e": Edge("e", "p", "m", Fraction(0), "1", trivial_hom(t, t), trivial_hom(t, t), identity_hom(t), (), ())},
    )
    assert [p for p, _ in validate_discrete(gr).errors] == ["edges[e].period"]


def test_cocycle_slots():
    from bsm.corpus import SHAPES, random_datum
    import random

    gr = random_datum(random.Random(3), "path_plus_center")
    slots = gr.cocycle_slots()
    assert ("a", "e1", "e2") in slots and ("a", "e2", "e1") in slots
    assert len(slots) == 4 + 1 + 1
    assert set(SHAPES) >= {"one_edge", "parallel"}


def test_corpus_data_valid(small_corpus):
    for name, gr in small_corpus:
        assert validate_discrete(gr).ok, name
