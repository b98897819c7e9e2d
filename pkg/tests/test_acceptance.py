"""Acceptance suite: one test per shipped criterion, exact equality throughout."""

from fractions import Fraction

from toricmap.groebner import Ideal, intersect, saturate
from toricmap.lattice import Fan, smith_normal_form
from toricmap.maps import (
    Description,
    agreement_locus,
    check_homogeneity,
    check_relevance,
    complete,
    compose,
    identity_description,
    same_map,
)
from toricmap.poly import RationalSection, parse_polynomial, parse_section
from toricmap.radical import SymbolicValue, build_map_ring, evaluate, parse_formal
from toricmap.schemes import (
    VALID_EVERYWHERE,
    VALID_SMOOTH,
    image_closure,
    map_point,
    preimage_ideal,
    pullback_divisor,
)
from toricmap.variety import ToricVariety

import test_properties


def poly(text, X):
    return parse_polynomial(text, X.names)


def desc(X, Y, exprs):
    return Description(X, Y, [parse_formal(e, X.names) for e in exprs])


def P1():
    return ToricVariety.from_fan(Fan(1, [(1,), (-1,)], [(0,), (1,)]), names=["x1", "x2"])


def P2():
    fan = Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    return ToricVariety.from_fan(fan, names=["x1", "x2", "x3"])


def P112(names):
    fan = Fan(2, [(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    return ToricVariety.from_fan(fan, names=names)


def Y622():
    fan = Fan(2, [(1, 0), (0, 1), (-1, -2), (1, 2)], [(1, 3), (1, 2), (0, 3), (0, 2)])
    return ToricVariety.from_fan(fan, names=["y1", "y2", "y3", "y4"])


def P1xP1(names):
    fan = Fan(2, [(1, 0), (-1, 0), (0, 1), (0, -1)], [(0, 2), (0, 3), (1, 2), (1, 3)])
    return ToricVariety.from_fan(fan, names=names)


def axis_embedding():
    return desc(P1(), P112(["y1", "y2", "y3"]), ["root(x1,2)", "0", "x2"])


def blow_up_chart():
    X = ToricVariety.from_fan(Fan(2, [(1, 0), (0, 1)], [(0, 1)]), names=["x1", "x2"])
    Y = ToricVariety.from_fan(Fan(2, [(1, 0), (1, 2)], [(0, 1)]), names=["y1", "y2"])
    return desc(X, Y, ["root(x1,2)", "x2*root(x1,2)"])


def quotient_map():
    return desc(P2(), P112(["y1", "y2", "y3"]), ["x1", "x2", "x3^2"])


def cube_variety():
    rays = [
        (1, 1, 1), (1, 1, -1), (1, -1, 1), (2, -1, -1),
        (-1, 1, 1), (-1, 1, -1), (-1, -1, 1), (-1, -1, -1),
    ]
    cones = [(0, 1, 2, 3), (4, 5, 6, 7), (0, 1, 4, 5), (2, 3, 6, 7), (0, 2, 4, 6), (1, 3, 5, 7)]
    return ToricVariety.from_fan(Fan(3, rays, cones), names=["y%d" % i for i in range(1, 9)])


def test_criterion_01_point_images_and_pullback_of_axis_embedding():
    emb = axis_embedding()
    at_zero = map_point(emb, [0, 1])
    assert at_zero.defined
    assert [v.as_fraction() for v in at_zero.values] == [0, 0, 1]

    at_pole = map_point(emb, [1, 0])
    assert at_pole.defined
    assert len(at_pole.branches) == 2
    b1, b2 = [[v.as_fraction() for v in b] for b in at_pole.branches]
    assert b1 == [1, 0, 0]
    # the two branches sit in one orbit of the target torus action
    (w,) = emb.target.grading.free_rows
    assert any(
        b2 == [lam ** wi * v for wi, v in zip(w, b1)]
        for lam in (Fraction(1), Fraction(-1))
    )

    d, alpha, report = pullback_divisor(emb, poly("y3", emb.target))
    assert d == RationalSection(poly("x2", emb.source))
    assert alpha == emb.ring.embed(1)
    assert report.validity_region == VALID_EVERYWHERE


def test_criterion_02_half_quadric_chart_checks_and_invariant_pullbacks():
    bl = blow_up_chart()
    assert check_homogeneity(bl) == (True, None)
    ok, _ = check_relevance(bl)
    assert ok
    invariants = ["y1^2", "y1*y2", "y2^2"]
    expected = ["x1", "x1*x2", "x1*x2^2"]
    for mono, image in zip(invariants, expected):
        pb = bl.pullback_polynomial(poly(mono, bl.target))
        assert pb.as_rational_section() == RationalSection(poly(image, bl.source))


def test_criterion_03_torsion_graded_blow_down_is_homogeneous():
    X = ToricVariety.from_cox_data(
        [(1, 1, 1, 0), (2, 1, 0, -3)], names=["x1", "x2", "x3", "x4"]
    )
    Y = ToricVariety.from_cox_data(
        [(1, 1, 1)], torsion=[(3, (2, 1, 0))], names=["y1", "y2", "y3"]
    )
    phi = desc(X, Y, ["x1*root(x4,3)^2", "x2*root(x4,3)", "x3"])
    assert check_homogeneity(phi) == (True, None)
    assert phi.ring.distinguished == ((poly("x4", X), 3),)


def test_criterion_04_preimages_of_point_ideals_agree_off_singular_point():
    phi = quotient_map()
    Y = phi.target
    J1, _ = preimage_ideal(phi, Ideal(3, [poly("y1", Y)]))
    assert J1 == Ideal(3, [poly("x1", phi.source)])
    J2, _ = preimage_ideal(phi, Ideal(3, [poly("y1^2", Y), poly("y1*y2", Y)]))
    assert J2 == Ideal(3, [poly("x1^2", phi.source), poly("x1*x2", phi.source)])
    # the two cut the same subscheme away from the preimage of the singular point
    assert J1 != J2
    Jsing, _ = preimage_ideal(phi, Ideal(3, [poly("y1", Y), poly("y2", Y)]))
    assert saturate(J1, Jsing) == saturate(J2, Jsing)


def test_criterion_05_image_of_diagonal_is_the_quadric():
    X = P1()
    Y = P1xP1(["y1", "y2", "y3", "y4"])
    diag = desc(X, Y, ["x1", "x2", "x1", "x2"])
    assert image_closure(diag).defining_ideal == Ideal(4, [poly("y1*y4 - y2*y3", Y)])


def test_criterion_06_completion_divides_out_the_cusp_factor():
    X = P1()
    phi = desc(X, X, ["x1^3", "x1^2*x2"])
    done = complete(phi)
    assert same_map(done, identity_description(X))
    for c, var in zip(done.components, ["x1", "x2"]):
        assert c.is_single_valued()
        q = c.as_rational_section() / RationalSection(poly(var, X))
        assert q.num.is_constant() and q.den.is_constant()
    (step,) = done.completion_steps
    assert step.candidate == poly("x1", X)
    assert step.orders == (3, 2)
    assert tuple(a - b for a, b in zip(step.orders, step.corrected)) == (2, 2)


def test_criterion_07_blow_down_contraction_pair_round_trips():
    X = P112(["x1", "x2", "x3"])
    Y = Y622()
    phi = desc(X, Y, ["x1", "x1*x2", "x1*x3", "x1*x2"])
    psi = desc(Y, X, ["y1^2*y4", "y2*y4", "y1*y2*y3*y4"])
    assert same_map(compose(psi, phi), identity_description(X))
    assert same_map(compose(phi, psi), identity_description(Y))

    done_phi = complete(phi)
    assert same_map(done_phi, desc(X, Y, ["root(x1,2)", "x2", "x3", "x2*root(x1,2)"]))
    done_psi = complete(psi)
    assert same_map(done_psi, desc(Y, X, ["y1^2*root(y4,2)", "y2*root(y4,2)", "y1*y2*y3"]))

    ideals = dict(agreement_locus(done_phi).components)
    assert ideals[(0, 1)] == Ideal(3, [poly("x1", X), poly("x2", X)])
    assert ideals[(2, 3)] == Ideal(3, [poly("x3", X), poly("x1*x2", X)])
    ((vars_, ideal),) = agreement_locus(done_psi).components
    assert vars_ == (0, 1, 2)
    assert saturate(ideal, Y.irrelevant_ideal) == intersect(
        Ideal(4, [poly("y1", Y), poly("y4", Y)]),
        Ideal(4, [poly("y2", Y), poly("y4", Y)]),
    )


def test_criterion_08_cube_fan_class_group_and_point_preimage():
    Y = cube_variety()
    assert len(Y.fan.rays) == 8
    assert len(Y.fan.maximal_cones) == 6
    _, D, _ = smith_normal_form([list(r) for r in Y.fan.rays])
    rank = sum(1 for i in range(3) if D[i][i])
    assert len(Y.fan.rays) - rank == 5
    assert len(Y.grading.free_rows) == 5

    X = P1xP1(["x1", "x2", "x3", "x4"])
    phi1 = desc(
        X, Y, ["1", "x1", "1", "(x3+x4)*root(x3,3)", "x3^2+x4^2", "1", "x2", "root(x3,3)^2"]
    )
    P = Ideal(
        8,
        [
            poly("y1^3*y2*y3*y5 - 10*y6*y7*y8^3", Y),
            poly("y2^2*y6^2 - y3^2*y7^2", Y),
            poly("-1/4*y1^2*y2^2*y4 + y7^2*y8^2", Y),
        ],
    )
    J, report = preimage_ideal(phi1, P, saturate_output=True)
    assert J == Ideal(4, [poly("x1 - x2", X), poly("x3 - 1/3*x4", X)])
    assert report.validity_region == VALID_EVERYWHERE

    phi0 = desc(
        X, Y, ["1", "x1", "1", "x3*root(x3,3)", "x4^2", "1", "x2", "root(x3,3)^2"]
    )
    f = poly("y1^2*y3^2*y4 - y6^2*y8^2", Y)
    assert phi0.pullback_polynomial(f).is_zero()


def test_criterion_09_six_exact_branches_with_correlated_signs():
    X = ToricVariety.from_fan(Fan(2, [(1, 0), (0, 1)], [(0, 1)]), names=["s", "t"])
    s = RationalSection(poly("s", X))
    s3 = RationalSection(poly("s^3", X))
    ring, (alpha, b) = build_map_ring(X, [(s, 6), (s3, 2)])
    comp2 = ring.embed(poly("t^2 + s", X)) * b
    values = evaluate([alpha, comp2], (64, -1))
    assert len(values) == 6
    big = Fraction(512 * 65)
    expected = set()
    for k in range(6):
        w = SymbolicValue.make(2, 6, k)
        second = SymbolicValue.make(big if k % 2 == 0 else -big, 1, 0)
        expected.add((w, second))
    assert set(values) == expected
    bad = (SymbolicValue.make(2, 1, 0), SymbolicValue.make(-big, 1, 0))
    assert bad not in values


def test_criterion_10_randomized_law_suites():
    assert test_properties.SUITE.max_examples >= 200
    test_properties.test_floor_ceiling_laws()
    test_properties.test_eliminate_to_base_matches_groebner_oracle()
    test_properties.test_preimage_ideal_is_additive()
    test_properties.test_gcd_and_coprime_refinement_reconstruct()
    test_properties.test_smith_normal_form_identities()
    test_properties.test_homogeneity_matches_orbit_oracle()


def test_criterion_11_homogeneity_witness_and_corrected_map():
    X = P112(["x1", "x2", "x3"])
    Y = ToricVariety.from_cox_data([(1, 2, 3)], names=["y1", "y2", "y3"])
    bad = desc(X, Y, ["root(x1,2)", "x2", "root(x1^3 - x2*x3, 2)"])
    ok, witness = check_homogeneity(bad)
    assert not ok
    assert witness == parse_section("y3/y1^3", Y.names)
    a = "root(x1^3 - x2*x3, 2)"
    good = desc(X, Y, [a, "x2^3", "%s^3 + %s*x1*x3" % (a, a)])
    assert check_homogeneity(good) == (True, None)
