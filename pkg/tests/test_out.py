from fractions import Fraction

from bsm.builders import build_surface, lefschetz_dehn_twist, radko_sphere
from bsm.data import DiscreteData, Edge, Vertex
from bsm.groups import cyclic_table, identity_hom, trivial_hom
from bsm.isos import compose_discrete_iso, invert_discrete_iso, is_inner_discrete
from bsm.oracle import brute_out_aut
from bsm.out import out_aut_discrete
from bsm.search import find_discrete_isos


def z2_z3_edge(gamma_minus=0):
    z2, z3, t = cyclic_table(2), cyclic_table(3), cyclic_table(1)
    return DiscreteData(
        {"Z2": z2, "Z3": z3, "1": t},
        {"p": Vertex("p", "+", "Z2"), "m": Vertex("m", "-", "Z3")},
        {"e": Edge("e", "p", "m", Fraction(1), "1", trivial_hom(t, z2), trivial_hom(t, z3), identity_hom(t), 0, gamma_minus)},
    )


def test_radko_out_order_two():
    out = out_aut_discrete(radko_sphere())
    assert out.kind == "finite" and out.order == 2
    assert out.invariants() == (0, (2,))
    assert brute_out_aut(radko_sphere()).order == 2
    assert {f.reversing for f in out.representatives} == {False, True}


def test_asymmetric_edge_out_trivial():
    # boundary loop on the Z3 side is a generator: x -> -x would move it
    gr = z2_z3_edge(gamma_minus=1)
    assert out_aut_discrete(gr).order == 1
    b = brute_out_aut(gr)  # oracle value, frozen
    assert b.order == 1 and len(b.autos) == 1


def test_asymmetric_edge_with_trivial_loops_keeps_sign_map():
    gr = z2_z3_edge(gamma_minus=0)
    assert out_aut_discrete(gr).order == 2
    b = brute_out_aut(gr)  # oracle value, frozen
    assert b.order == 2 and len(b.autos) == 2


def test_class_iff_quotient_inner(small_corpus):
    for name, gr in small_corpus:
        autos = find_discrete_isos(gr, gr).isos
        if len(autos) > 40:
            continue
        out = out_aut_discrete(gr)
        for f in autos:
            for g in autos:
                inner = is_inner_discrete(compose_discrete_iso(f, invert_discrete_iso(g)), gr) is not None
                assert out.same_class(f, g) == inner, name


def test_table_is_a_group(small_corpus):
    for name, gr in small_corpus:
        out = out_aut_discrete(gr)
        n = len(out.representatives)
        tab = out.table
        e = out.identity_index
        for i in range(n):
            assert tab[e][i] == i == tab[i][e]
            assert sorted(tab[i]) == list(range(n))
            for j in range(n):
                for k in range(n):
                    assert tab[tab[i][j]][k] == tab[i][tab[j][k]]


def test_lefschetz_out_structure():
    out = out_aut_discrete(lefschetz_dehn_twist())
    assert out.kind == "abelian-family"
    assert out.invariants() == (1, (2, 2))
    assert not out.complete


def test_lefschetz_gamma_choice_same_structure():
    a = out_aut_discrete(lefschetz_dehn_twist(gamma=0)).invariants()
    b = out_aut_discrete(lefschetz_dehn_twist(gamma=1)).invariants()
    assert a == b == (1, (2, 2))


def two_circle_sphere(r1="1/1", r2="2/1"):
    return build_surface({
        "vertices": [
            {"id": "d1", "sign": "+", "genus": 0, "boundaries": 1},
            {"id": "ann", "sign": "-", "genus": 0, "boundaries": 2},
            {"id": "d2", "sign": "+", "genus": 0, "boundaries": 1},
        ],
        "edges": [
            {"id": "c1", "pos_vertex": "d1", "neg_vertex": "ann", "period": r1},
            {"id": "c2", "pos_vertex": "d2", "neg_vertex": "ann", "period": r2},
        ],
    })


def test_two_circle_sphere_out():
    out = out_aut_discrete(two_circle_sphere())
    assert out.invariants() == (1, ())
