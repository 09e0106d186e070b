from fractions import Fraction

import pytest

from bsm.builders import radko_sphere
from bsm.corpus import small_groups
from bsm.data import MINUS, PLUS, DiscreteData, Edge, Vertex
from bsm.groups import AbelianGroup, cyclic_table, identity_hom, symmetric_group_table, trivial_hom
from bsm.oracle import MAX_ORDER, OracleLimit, brute_group_autos, brute_isos, brute_out_aut
from bsm.search import find_discrete_isos


def trivial_table_datum(rho=1, names=("a", "b")):
    t = cyclic_table(1)
    p, m = names
    return DiscreteData(
        {"1": t},
        {p: Vertex(p, PLUS, "1"), m: Vertex(m, MINUS, "1")},
        {"e": Edge("e", p, m, Fraction(rho), "1", trivial_hom(t, t), trivial_hom(t, t), identity_hom(t), 0, 0)},
    )


def keys(isos):
    return [f.key() for f in isos]


def test_group_autos_small():
    assert len(brute_group_autos(cyclic_table(2))) == 1
    assert len(brute_group_autos(cyclic_table(3))) == 2
    assert len(brute_group_autos(symmetric_group_table(3))) == 6


def test_group_autos_are_bijective_homs():
    for name, g in small_groups().items():
        for f in brute_group_autos(g):
            assert sorted(f(x) for x in g.elements()) == sorted(g.elements()), name
            for a in g.elements():
                for b in g.elements():
                    assert f(g.mul(a, b)) == g.mul(f(a), f(b))


def test_trivial_groups_match_engine():
    gr = trivial_table_datum()
    assert keys(brute_isos(gr, gr)) == keys(find_discrete_isos(gr, gr).isos)
    assert len(brute_isos(gr, gr)) == 2


def test_period_mismatch_empty():
    assert brute_isos(trivial_table_datum(1), trivial_table_datum(2)) == []


def test_radko_two_classes():
    b = brute_out_aut(radko_sphere())
    assert len(b.autos) == 2 and b.order == 2


def test_identity_only_datum():
    # +/- vertices with different groups and a generator loop pin everything down
    z2, z3, t = cyclic_table(2), cyclic_table(3), cyclic_table(1)
    gr = DiscreteData(
        {"Z2": z2, "Z3": z3, "1": t},
        {"p": Vertex("p", PLUS, "Z2"), "m": Vertex("m", MINUS, "Z3")},
        {"e": Edge("e", "p", "m", Fraction(1), "1", trivial_hom(t, z2), trivial_hom(t, z3), identity_hom(t), 0, 1)},
    )
    b = brute_out_aut(gr)
    assert len(b.autos) == 1 and b.order == 1


def test_size_guards():
    big = cyclic_table(MAX_ORDER + 1)
    with pytest.raises(OracleLimit):
        brute_group_autos(big)
    gr = radko_sphere()  # fg_abelian trivial group is accepted as finite
    assert brute_out_aut(gr).order == 2
    z = DiscreteData({"Z": AbelianGroup(1, [])}, {"a": Vertex("a", PLUS, "Z"), "b": Vertex("b", MINUS, "Z")}, {})
    with pytest.raises(OracleLimit):
        brute_isos(z, z)


def test_twin_pairs_match_engine(corpus_twins):
    for name, gr, tw in corpus_twins[:6]:
        assert keys(brute_isos(gr, tw)) == keys(find_discrete_isos(gr, tw).isos), name
