"""Randomized law checks, 200 exact cases per suite."""

from fractions import Fraction
from math import lcm

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from toricmap.groebner import Ideal, eliminate
from toricmap.lattice import Fan, integer_kernel, smith_normal_form
from toricmap.maps import Description, check_homogeneity
from toricmap.poly import (
    Polynomial,
    RationalSection,
    gcd,
    lcm as poly_lcm,
    order_along,
    coprime_refinement,
    parse_polynomial,
)
from toricmap.radical import (
    build_map_ring,
    ceiling,
    divide,
    eliminate_to_base,
    floor,
    is_single_valued,
    multiply,
    power,
)
from toricmap.schemes import _embed, _extract, preimage_ideal
from toricmap.variety import ToricVariety, monomial_section

SUITE = settings(
    max_examples=200,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)


def affine_plane():
    return ToricVariety.from_fan(Fan(2, [(1, 0), (0, 1)], [(0, 1)]), names=["x1", "x2"])


def ppoly(text, X):
    return parse_polynomial(text, X.names)


# -- suite 1: floor and ceiling laws -------------------------------------------------


def _localized_rings():
    X = affine_plane()
    x1, x2 = ppoly("x1", X), ppoly("x2", X)
    pool = [x1, x2, ppoly("x1 + x2", X), ppoly("x1*x2", X), ppoly("x1^2 + x2", X)]
    specs = [
        [(pool[0], 2)],
        [(pool[0], 2), (pool[2], 3)],
        [(pool[3], 4)],
        [(pool[4], 6), (pool[1], 2)],
    ]
    rings = []
    for spec in specs:
        ring, alphas = build_map_ring(
            X, spec, extra_denominators=[x1, x2] + [g for g, _ in spec]
        )
        rings.append((ring, alphas))
    return rings


_RINGS = _localized_rings()


@st.composite
def radical_section_cases(draw):
    ring, alphas = draw(st.sampled_from(_RINGS))
    c = draw(st.sampled_from([Fraction(1), Fraction(-2), Fraction(3, 2)]))
    a_exp = draw(st.integers(-2, 2))
    b_exp = draw(st.integers(-2, 2))
    section = ring.embed(c * monomial_section(2, (a_exp, b_exp)))
    for alpha in alphas:
        section = multiply(section, power(alpha, draw(st.integers(-2, 3))))
    return ring, section


@SUITE
@given(radical_section_cases())
def test_floor_ceiling_laws(case):
    ring, a = case
    one = RationalSection.from_constant(2, 1)
    # reciprocal law: the floor of 1/a is the reciprocal of the ceiling of a
    assert floor(divide(ring.embed(1), a)) == one / ceiling(a)
    # a is single-valued exactly when it equals its own floor
    assert is_single_valued(a) == (a == ring.embed(floor(a)))
    # a/floor(a) and ceiling(a)/a are integral: their lcm(r_j) powers are polynomial
    R = lcm(*[r for _, r in ring.distinguished])
    low = power(divide(a, ring.embed(floor(a))), R)
    high = power(divide(ring.embed(ceiling(a)), a), R)
    for q in (low, high):
        assert is_single_valued(q)
        assert q.rational_part.is_polynomial()


# -- suite 2: eliminate_to_base against a Groebner oracle ----------------------------


def _presentation_rings():
    X = affine_plane()
    specs = [
        [(ppoly("x1", X), 2)],
        [(ppoly("x1", X), 2), (ppoly("x2", X), 3)],
        [(ppoly("x1*x2 + x2^2", X), 2)],
    ]
    return [(build_map_ring(X, spec)) for spec in specs]


_PRES = _presentation_rings()

_BASE_POLYS = ["x1", "x2", "x1 + x2", "x1*x2 - 2", "x1^2 + x2", "x2^2 - x1", "3"]


@st.composite
def elimination_cases(draw):
    ring, alphas = draw(st.sampled_from(_PRES))
    X = ring.base_variety
    sections = []
    for _ in range(draw(st.integers(1, 3))):
        p = ppoly(draw(st.sampled_from(_BASE_POLYS)), X)
        s = ring.embed(p)
        for alpha in alphas:
            s = multiply(s, power(alpha, draw(st.integers(0, 3))))
        sections.append(s)
    return ring, sections


def _groebner_elimination(ring, sections):
    nx = ring.base_variety.nvars
    na = len(ring.distinguished)
    total = nx + na
    gens = []
    for j, (g, r) in enumerate(ring.distinguished):
        exps = [0] * total
        exps[nx + j] = r
        gens.append(Polynomial(total, {tuple(exps): Fraction(1)}) - _embed(g, 0, total))
    for s in sections:
        part = s.rational_part
        assert part.den.is_constant()
        p = _embed(part.as_polynomial(), 0, total)
        exps = [0] * total
        for j, l in enumerate(s.exponents):
            exps[nx + j] = l
        gens.append(p * Polynomial(total, {tuple(exps): Fraction(1)}))
    K = eliminate(Ideal(total, gens), range(nx))
    return Ideal(nx, [_extract(g, 0, nx) for g in K.generators])


@SUITE
@given(elimination_cases())
def test_eliminate_to_base_matches_groebner_oracle(case):
    ring, sections = case
    assert eliminate_to_base(sections) == _groebner_elimination(ring, sections)


# -- suite 3: preimage additivity ----------------------------------------------------


def _preimage_fixtures():
    P2 = ToricVariety.from_fan(
        Fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    )
    P112 = ToricVariety.from_fan(
        Fan(2, [(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (0, 2)]),
        names=["y1", "y2", "y3"],
    )
    quotient = Description(P2, P112, [ppoly("x1", P2), ppoly("x2", P2), ppoly("x3^2", P2)])
    plane = affine_plane()
    half = ToricVariety.from_fan(
        Fan(2, [(1, 0), (1, 2)], [(0, 1)]), names=["y1", "y2"]
    )
    from toricmap.radical import parse_formal

    chart = Description(
        plane,
        half,
        [parse_formal("root(x1, 2)", plane.names), parse_formal("x2*root(x1, 2)", plane.names)],
    )
    return [quotient, chart]


_PREIMAGE_MAPS = _preimage_fixtures()


def _monomial_pool(Y):
    out = {}
    span = range(0, 3)
    exps = [()]
    for _ in range(Y.nvars):
        exps = [e + (k,) for e in exps for k in span]
    for e in exps:
        if not any(e):
            continue
        d = Y.degree_of(monomial_section(Y.nvars, e).num)
        out.setdefault(d, []).append(e)
    return out


_POOLS = [_monomial_pool(phi.target) for phi in _PREIMAGE_MAPS]


@st.composite
def homogeneous_ideals(draw, index):
    Y = _PREIMAGE_MAPS[index].target
    pool = _POOLS[index]
    gens = []
    for _ in range(draw(st.integers(1, 2))):
        bucket = draw(st.sampled_from(sorted(pool, key=str)))
        exps = pool[bucket]
        e1 = draw(st.sampled_from(exps))
        p = monomial_section(Y.nvars, e1).num
        if draw(st.booleans()):
            e2 = draw(st.sampled_from(exps))
            p = p - 2 * monomial_section(Y.nvars, e2).num
        if not p.is_zero():
            gens.append(p)
    return Ideal(Y.nvars, gens)


@st.composite
def additivity_cases(draw):
    index = draw(st.integers(0, len(_PREIMAGE_MAPS) - 1))
    return index, draw(homogeneous_ideals(index)), draw(homogeneous_ideals(index))


@SUITE
@given(additivity_cases())
def test_preimage_ideal_is_additive(case):
    index, I1, I2 = case
    phi = _PREIMAGE_MAPS[index]
    ny = phi.target.nvars
    joint, _ = preimage_ideal(phi, Ideal(ny, I1.generators + I2.generators))
    J1, _ = preimage_ideal(phi, I1)
    J2, _ = preimage_ideal(phi, I2)
    assert joint == Ideal(phi.source.nvars, J1.generators + J2.generators)


# -- suite 4: gcd and coprime refinement ---------------------------------------------


_FACTORS = ["x1", "x2", "x1 + x2", "x1 - x2", "x1 + 1", "x2 - 2", "x1*x2 + 1"]


@st.composite
def factored_polynomials(draw, max_factors=3):
    X = affine_plane()
    p = Polynomial.constant(2, draw(st.sampled_from([Fraction(1), Fraction(-1), Fraction(2, 3)])))
    for _ in range(draw(st.integers(0, max_factors))):
        p = p * ppoly(draw(st.sampled_from(_FACTORS)), X) ** draw(st.integers(1, 2))
    return p


def _is_constant_multiple(a, b):
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    return (RationalSection(a) / RationalSection(b)).is_constant()


@SUITE
@given(factored_polynomials(), factored_polynomials(), factored_polynomials(max_factors=1))
def test_gcd_and_coprime_refinement_reconstruct(f, g, h):
    G = gcd(f, g)
    assert (RationalSection(f) / RationalSection(G)).is_polynomial()
    assert (RationalSection(g) / RationalSection(G)).is_polynomial()
    assert _is_constant_multiple(f * g, G * poly_lcm(f, g))
    if not h.is_constant():
        assert _is_constant_multiple(gcd(f * h, g * h), G * h)
    basis, rows = coprime_refinement([f, g])
    for q1 in basis:
        assert not q1.is_constant()
        for q2 in basis:
            if q1 is not q2:
                assert gcd(q1, q2).is_constant()
    for p, row in zip((f, g), rows):
        rebuilt = Polynomial.constant(2, Fraction(1))
        for q, e in zip(basis, row):
            assert e == order_along(q, p)
            rebuilt = rebuilt * q**e
        assert _is_constant_multiple(p, rebuilt)


# -- suite 5: Smith normal form identities -------------------------------------------


def _det(M):
    n = len(M)
    rows = [[Fraction(a) for a in row] for row in M]
    sign = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            sign = -sign
        for r in range(col + 1, n):
            factor = rows[r][col] / rows[col][col]
            rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    out = Fraction(sign)
    for i in range(n):
        out *= rows[i][i]
    return out


def _mat_mul(A, B):
    return [
        [sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
        for i in range(len(A))
    ]


@st.composite
def integer_matrices(draw):
    m = draw(st.integers(1, 4))
    n = draw(st.integers(1, 4))
    return [[draw(st.integers(-9, 9)) for _ in range(n)] for _ in range(m)]


@SUITE
@given(integer_matrices(), st.sampled_from([(), (2,), (3,), (2, 4)]))
def test_smith_normal_form_identities(A, orders):
    U, D, V = smith_normal_form(A)
    assert _mat_mul(_mat_mul(U, A), V) == [list(row) for row in D]
    assert abs(_det(U)) == 1
    assert abs(_det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    for i, row in enumerate(D):
        for j, entry in enumerate(row):
            if i != j:
                assert entry == 0
    for a, b in zip(diag, diag[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0
    orders = orders[: len(A)]
    kernel = integer_kernel(A, torsion_orders=orders, ncols=len(A[0]))
    cut = len(A) - len(orders)
    free_rows, torsion_rows = A[:cut], A[cut:]
    for u in kernel:
        for row in free_rows:
            assert sum(r * x for r, x in zip(row, u)) == 0
        for order, row in zip(orders, torsion_rows):
            assert sum(r * x for r, x in zip(row, u)) % order == 0


# -- suite 6: homogeneity against an orbit oracle ------------------------------------


def _orbit_varieties():
    P112 = ToricVariety.from_fan(
        Fan(2, [(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    )
    VT = ToricVariety.from_cox_data([(1, 1, 1)], torsion=[(3, (2, 1, 0))])
    P1xP1 = ToricVariety.from_fan(
        Fan(2, [(1, 0), (-1, 0), (0, 1), (0, -1)], [(0, 2), (0, 3), (1, 2), (1, 3)])
    )
    return P112, VT, P1xP1


_P112, _VT, _P1XP1 = _orbit_varieties()
_PAIRS = [
    (_P112, _P112),
    (_P112, _VT),
    (_VT, _VT),
    (_VT, _P112),
    (_P1XP1, _P112),
    (_P1XP1, _VT),
]

_COORDS = [Fraction(1), Fraction(2), Fraction(3), Fraction(1, 2), Fraction(-3, 2), Fraction(5)]


@st.composite
def monomial_map_cases(draw):
    X, Y = draw(st.sampled_from(_PAIRS))
    if X is Y and draw(st.booleans()):
        # known-homogeneous family: twist each variable by a degree-0 monomial
        basis = X.degree0_exponent_basis()
        m = [0] * X.nvars
        for row in basis:
            c = draw(st.integers(-2, 2))
            m = [a + c * b for a, b in zip(m, row)]
        exps = []
        for j in range(Y.nvars):
            t = draw(st.integers(-1, 2))
            e = [t * a for a in m]
            e[j] += 1
            exps.append(tuple(e))
    else:
        exps = [
            tuple(draw(st.integers(-2, 3)) for _ in range(X.nvars))
            for _ in range(Y.nvars)
        ]
    point = [draw(st.sampled_from(_COORDS)) for _ in range(X.nvars)]
    lam = draw(st.sampled_from([Fraction(2), Fraction(3), Fraction(5)]))
    return X, Y, tuple(exps), point, lam


def _monomial_value(exp, point):
    out = Fraction(1)
    for e, x in zip(exp, point):
        out *= Fraction(x) ** e
    return out


def _orbit_oracle(X, Y, exps, point, lam):
    """Scale the point through the grading action; images must stay in one
    target orbit, witnessed by every degree-0 invariant monomial.  Torsion
    scalings are enumerated exhaustively as exact root-of-unity exponents."""
    basis = Y.degree0_exponent_basis()
    base = [_monomial_value(e, point) for e in exps]
    for w in X.grading.free_rows:
        moved = [x * lam**wi for x, wi in zip(point, w)]
        vals = [_monomial_value(e, moved) for e in exps]
        for u in basis:
            before = Fraction(1)
            after = Fraction(1)
            for uj, b, v in zip(u, base, vals):
                before *= b**uj
                after *= v**uj
            if before != after:
                return False
    for order, v in X.grading.torsion:
        for k in range(order):
            # coordinate i picks up zeta^(k v_i); a monomial value picks up
            # zeta^(k <v, e>), and rational values match only at exponent 0
            for u in basis:
                zeta_exp = 0
                for uj, e in zip(u, exps):
                    zeta_exp += uj * k * sum(vi * ei for vi, ei in zip(v, e))
                if zeta_exp % order != 0:
                    return False
    return True


@SUITE
@given(monomial_map_cases())
def test_homogeneity_matches_orbit_oracle(case):
    X, Y, exps, point, lam = case
    comps = [monomial_section(X.nvars, e) for e in exps]
    verdict, _ = check_homogeneity(Description(X, Y, comps))
    assert verdict == _orbit_oracle(X, Y, exps, point, lam)
