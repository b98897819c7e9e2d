import pytest

from toricmap.groebner import Ideal
from toricmap.lattice import Cone, Fan
from toricmap.poly import Grading, parse_polynomial, parse_section, section_to_str
from toricmap.variety import (
    CoxDataError,
    FanRequired,
    Subscheme,
    ToricVariety,
    gradings_equivalent,
    monomial_section,
)


def P1():
    return ToricVariety.from_fan(Fan(1, [(1,), (-1,)], [(0,), (1,)]))


def P112():
    return ToricVariety.from_fan(
        Fan(2, [(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    )


def P1xP1():
    return ToricVariety.from_fan(
        Fan(2, [(1, 0), (-1, 0), (0, 1), (0, -1)], [(0, 2), (0, 3), (1, 2), (1, 3)])
    )


def Y622():
    # weights (1,2,0,-1),(0,0,1,1) up to row operations; B = (y1,y2) cap (y3,y4)
    return ToricVariety.from_fan(
        Fan(2, [(1, 0), (0, 1), (-1, -2), (1, 2)], [(1, 3), (1, 2), (0, 3), (0, 2)]),
        names=("y1", "y2", "y3", "y4"),
    )


def ideal_of(X, *texts):
    return Ideal(X.nvars, [parse_polynomial(t, X.names) for t in texts])


def test_projective_line():
    X = P1()
    assert X.grading.free_rows == ((1, 1),)
    assert X.grading.torsion == ()
    assert X.irrelevant_ideal == ideal_of(X, "x1", "x2")
    assert [section_to_str(s, X.names) for s in X.degree0_generators()] == ["x2/x1"]


def test_weighted_plane_from_fan():
    X = P112()
    assert X.grading.free_rows == ((1, 1, 2),)
    assert X.irrelevant_ideal == ideal_of(X, "x1", "x2", "x3")
    gens = X.degree0_generators()
    assert [section_to_str(s, X.names) for s in gens] == ["x3/x1^2", "x2/x1"]


def test_bigraded_product_block_structure():
    X = P1xP1()
    assert X.grading.free_rows == ((1, 1, 0, 0), (0, 0, 1, 1))


def test_birational_pair_target():
    Y = Y622()
    paper = Grading(4, [(1, 2, 0, -1), (0, 0, 1, 1)], [])
    assert gradings_equivalent(Y.grading, paper)
    assert Y.irrelevant_ideal == ideal_of(Y, "y1*y3", "y1*y4", "y2*y3", "y2*y4")
    assert Y.class_group.free_rank == 2 and Y.class_group.torsion_orders == ()


def test_fake_projective_plane():
    X = ToricVariety.from_fan(Fan(2, [(1, 0), (1, 3), (-2, -3)], [(0, 1), (1, 2), (0, 2)]))
    paper = Grading(3, [(1, 1, 1)], [(3, (2, 1, 0))])
    assert gradings_equivalent(X.grading, paper)
    assert X.class_group.free_rank == 1 and X.class_group.torsion_orders == (3,)


def test_from_cox_data():
    X = ToricVariety.from_cox_data([(1, 1, 2)], irrelevant_monomials=[[0], [1], [2]])
    assert X.grading.free_rows == ((1, 1, 2),)
    assert X.irrelevant_ideal == ideal_of(X, "x1", "x2", "x3")
    assert not X.is_fan_backed
    with pytest.raises(FanRequired):
        X.require_fan("testing")

    flop = ToricVariety.from_cox_data([(1, 1, -1, -1)], names=("y1", "y2", "y3", "y4"))
    assert flop.irrelevant_ideal.is_whole_ring()
    lattice = {tuple(v) for v in flop.degree0_lattice}
    assert lattice == {(1, 0, 0, 1), (1, 0, 1, 0), (-1, 1, 0, 0)}

    fake = ToricVariety.from_cox_data([(1, 1, 1)], torsion=[(3, (2, 1, 0))])
    assert fake.class_group.torsion_orders == (3,)

    with pytest.raises(CoxDataError):
        ToricVariety.from_cox_data([(1, 1)], names=("x1",))
    with pytest.raises(CoxDataError):
        ToricVariety.from_cox_data([(1, 1)], torsion=[(1, (0, 1))])


def test_virtual_ray_cox_data():
    # the affine line times a torus: one real ray, one virtual
    X = ToricVariety.from_fan(Fan(2, [(1, 0)], [(0,)]))
    assert X.nvars == 2
    assert X.irrelevant_ideal == ideal_of(X, "x2")
    assert X.grading.free_rows == () and X.grading.torsion == ()


def test_degree0_generators_shapes():
    X = P112()
    sub = X.degree0_generators(support_vars=[0, 2])
    assert [section_to_str(s, X.names) for s in sub] == ["x3/x1^2"]

    wps = ToricVariety.from_cox_data([(1, 2, 3)], irrelevant_monomials=[[0], [1], [2]])
    gens = wps.degree0_generators()
    assert [section_to_str(s, wps.names) for s in gens] == ["x3/x1^3", "x2/x1^2"]

    fake = ToricVariety.from_cox_data(
        [(1, 1, 1)], torsion=[(3, (2, 1, 0))], names=("y1", "y2", "y3")
    )
    gens = fake.degree0_generators()
    for s in gens:
        d = s.degree_of(fake.grading)
        assert d is not None and d.is_zero()
    assert {tuple(v) for v in fake.degree0_lattice} == {(-2, 1, 1), (-3, 3, 0)}


def test_chart_ring_membership():
    X = P1()
    x1 = parse_polynomial("x1", X.names)
    assert X.chart_ring_membership(x1, parse_section("x2/x1", X.names))
    assert not X.chart_ring_membership(x1, parse_section("x1/x2", X.names))
    assert not X.chart_ring_membership(x1, parse_section("x1", X.names))

    W = P112()
    h = parse_polynomial("x1", W.names)
    assert W.chart_ring_membership(h, parse_section("x2*x3/x1^3", W.names))
    with pytest.raises(ValueError):
        W.chart_ring_membership(parse_polynomial("x1 + x3", W.names), parse_section("x2/x1", W.names))


def test_is_relevant_ideal():
    X = P1()
    assert X.is_relevant_ideal(Ideal.zero(2))
    assert not X.is_relevant_ideal(ideal_of(X, "x1", "x2"))
    assert X.is_relevant_ideal(ideal_of(X, "x1"))

    flop = ToricVariety.from_cox_data([(1, 1, -1, -1)])
    assert flop.is_relevant_ideal(ideal_of(flop, "x1"))
    assert not flop.is_relevant_ideal(Ideal.whole_ring(4))


def test_subscheme_requires_homogeneous_ideal():
    X = P112()
    Subscheme(X, ideal_of(X, "x1^2 - x2^2", "x3"))
    with pytest.raises(ValueError):
        Subscheme(X, ideal_of(X, "x1 + x3"))


def test_singular_strata():
    X = P112()
    ideals = X.singular_strata_ideals()
    assert len(ideals) == 1
    assert ideals[0] == ideal_of(X, "x1", "x2")
    with pytest.raises(FanRequired):
        ToricVariety.from_cox_data([(1, 1, 2)]).singular_strata_ideals()


def test_gradings_equivalent():
    a = Grading(2, [(1, 1)], [])
    assert gradings_equivalent(a, Grading(2, [(2, 2)], []))
    assert not gradings_equivalent(a, Grading(2, [(1, -1)], []))
    assert not gradings_equivalent(a, Grading(3, [(1, 1, 0)], []))


def test_monomial_section():
    s = monomial_section(3, (-2, 1, 0))
    assert section_to_str(s, ("x1", "x2", "x3")) == "x2/x1^2"
