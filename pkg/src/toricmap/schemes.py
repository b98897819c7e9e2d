"""Scheme-theoretic images and preimages of described maps.

The four geometric operations on a description: the closure of the image
(kernel of the pullback, cut down to its homogeneous part), images and
preimages of subschemes, pullback of a divisor section with its residual
unit, and evaluation at a point of the source.

Image computations run through the graph ideal in a combined ring
source + radicals + target and are Groebner-heavy; preimages are
Groebner-free ceilings per the structure of the map ring.  Every answer
that depends on a hypothesis of the underlying theorems carries a
LocusReport saying where it is valid.  Long Groebner runs respect the
cooperative deadline of the groebner module.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .groebner import (
    Ideal,
    eliminate,
    homogeneous_part,
    saturate,
    saturate_at_poly,
)
from .lattice import integer_kernel, mat_vec, smith_normal_form
from .maps import MapError, agreement_locus, complete, irrelevant_components
from .poly import Polynomial, RationalSection
from .radical import SectionError, SymbolicValue, ceiling, eliminate_to_base, evaluate
from .variety import FanRequired, Subscheme

VALID_EVERYWHERE = "everywhere"
VALID_SMOOTH = "smooth-locus-of-target"
VALID_AGREEMENT = "agreement-interior"


@dataclass(frozen=True)
class LocusReport:
    """Where a computed scheme is the honest image or preimage."""

    ideal: Ideal
    validity_region: str
    notes: tuple = ()


# -- the combined ring -----------------------------------------------------------
# variable layout: source block, one variable per distinguished radical, target block


def _embed(p, shift, total):
    terms = {}
    for mono, c in p.terms.items():
        exps = [0] * total
        exps[shift : shift + len(mono)] = mono
        terms[tuple(exps)] = c
    return Polynomial(total, terms)


def _extract(p, shift, width):
    terms = {}
    for mono, c in p.terms.items():
        assert all(e == 0 for i, e in enumerate(mono) if not shift <= i < shift + width)
        terms[mono[shift : shift + width]] = c
    return Polynomial(width, terms)


def _graph_data(phi):
    """Graph and radical relations of the description in the combined ring."""
    ring = phi.ring
    nx = phi.source.nvars
    na = len(ring.distinguished)
    ny = phi.target.nvars
    total = nx + na + ny
    gens = []
    for j, (g, r) in enumerate(ring.distinguished):
        alpha = Polynomial.variable(total, nx + j)
        gens.append(alpha**r - _embed(g, 0, total))
    for i, c in enumerate(phi.components):
        y = Polynomial.variable(total, nx + na + i)
        if c.is_zero():
            gens.append(y)
            continue
        rhs = _embed(c.rational_part.num, 0, total)
        for j, l in enumerate(c.exponents):
            if l:
                rhs = rhs * Polynomial.variable(total, nx + j) ** l
        gens.append(_embed(c.rational_part.den, 0, total) * y - rhs)
    return nx, na, ny, gens, _embed(ring.inverted_denominator, 0, total)


def _eliminate_to_target(phi, extra_source_gens=()):
    nx, na, ny, gens, den = _graph_data(phi)
    total = nx + na + ny
    for g in extra_source_gens:
        gens.append(_embed(g, 0, total))
    T = saturate_at_poly(Ideal(total, gens), den)
    K = eliminate(T, range(nx + na, total))
    J = Ideal(ny, [_extract(g, nx + na, ny) for g in K.generators])
    return homogeneous_part(J, phi.target.grading)


def image_closure(phi):
    """Closure of the image of the described map, as a subscheme of the target.

    This is the homogeneous part of the kernel of the pullback, computed by
    eliminating the source and radical variables from the graph ideal."""
    phi._require_checks("image closure")
    return Subscheme(phi.target, _eliminate_to_target(phi))


def _known_complete(phi):
    # completion needs fans on both sides; without them stay conservative
    try:
        done = complete(phi)
    except (FanRequired, MapError):
        return False
    return done.component_data() == phi.component_data()


def image_of_subscheme(phi, subscheme):
    """Scheme-theoretic image of a subscheme of the source.

    The input ideal is replaced by its saturation first (with a warning note
    when that changes it); the answer is exact on the interior of the
    agreement locus, and everywhere when the description is complete."""
    phi._require_checks("image")
    if isinstance(subscheme, Subscheme):
        I = subscheme.defining_ideal
    else:
        I = subscheme
    assert I.nvars == phi.source.nvars, "subscheme lives on the wrong variety"
    for g in I.generators:
        if phi.source.degree_of(g) is None:
            raise MapError("the subscheme ideal must be homogeneous")
    notes = []
    sat = saturate(I, phi.source.irrelevant_ideal)
    if sat != I:
        notes.append("the ideal was not saturated; its saturation is used instead")
        I = sat
    J = _eliminate_to_target(phi, I.generators)
    if _known_complete(phi):
        tag = VALID_EVERYWHERE
    else:
        tag = VALID_AGREEMENT
        notes.append("completeness of the description was not established")
    return Subscheme(phi.target, J), LocusReport(J, tag, tuple(notes))


# -- preimages -------------------------------------------------------------------


def _integer_solvable(A, b):
    """Does A*n = b have an integer solution?"""
    if not A:
        return True
    U, D, V = smith_normal_form(A)
    rhs = mat_vec(U, list(b))
    m, n = len(A), len(A[0])
    for i in range(m):
        d = D[i][i] if i < min(m, n) else 0
        if d == 0:
            if rhs[i] != 0:
                return False
        elif rhs[i] % d:
            return False
    return True


def _degree_column(variety, d):
    col = [int(a) for a in d.free]
    col += [int(a) for a in d.torsion]
    return col


def _class_is_cartier(variety, d):
    """Is the divisor class of the degree locally principal on every chart?

    On the chart of a maximal cone the class group is generated by the
    divisors outside the cone, so the class must be an integer combination
    of their degrees there."""
    fan = variety.fan
    grading = variety.grading
    k = len(grading.free_rows)
    t = len(grading.torsion)
    target = _degree_column(variety, d)
    for cone in fan.maximal_cones:
        cols = []
        for i in range(variety.nvars):
            if i in cone.rays:
                continue
            cols.append(_degree_column(variety, variety.degree_of_variable(i)))
        for j, (m, _) in enumerate(grading.torsion):
            e = [0] * (k + t)
            e[k + j] = m
            cols.append(e)
        A = [[col[r] for col in cols] for r in range(k + t)]
        if not _integer_solvable(A, target):
            return False
    return True


def _avoids_singular_strata(variety, I):
    for S in variety.singular_strata_ideals():
        both = Ideal(variety.nvars, list(I.generators) + list(S.generators))
        if not saturate(both, variety.irrelevant_ideal).is_whole_ring():
            return False
    return True


def _preimage_validity(phi, I):
    if not _known_complete(phi):
        return VALID_AGREEMENT, ("completeness of the description was not established",)
    Y = phi.target
    if not Y.fan.minimal_singular_cones():
        return VALID_EVERYWHERE, ("the target is smooth",)
    if all(_class_is_cartier(Y, Y.degree_of(g)) for g in I.generators if not g.is_zero()):
        return VALID_EVERYWHERE, ("every generator cuts out a Cartier divisor",)
    if _avoids_singular_strata(Y, I):
        return VALID_EVERYWHERE, ("the subscheme avoids the singular strata",)
    return VALID_SMOOTH, ()


def preimage_ideal(phi, I, saturate_output=False):
    """Regular preimage ideal: ceilings of the pullbacks of the generators.

    No Groebner computation is involved unless saturation at the source
    irrelevant ideal is requested.  The report's validity region depends on
    the defining generators, not just on the subscheme they cut out."""
    phi._require_checks("preimage")
    assert I.nvars == phi.target.nvars, "ideal lives on the wrong variety"
    for g in I.generators:
        if phi.target.degree_of(g) is None:
            raise MapError("the preimage ideal must be homogeneous")
    pulled = [phi.pullback_polynomial(g) for g in I.generators if not g.is_zero()]
    pulled = [s for s in pulled if not s.is_zero()]
    if pulled:
        J = eliminate_to_base(pulled)
    else:
        J = Ideal.zero(phi.source.nvars)
    tag, notes = _preimage_validity(phi, I)
    if saturate_output:
        J = saturate(J, phi.source.irrelevant_ideal)
        notes = notes + ("saturated at the source irrelevant ideal",)
    return J, LocusReport(J, tag, notes)


# -- divisor pullback --------------------------------------------------------------


def pullback_divisor(phi, f):
    """Pull back the divisor of a homogeneous section.

    Returns the ceiling of the pulled-back section, the residual unit, and a
    report: the ceiling cuts out the pullback of the divisor wherever the
    divisor is Cartier, and the residual is invertible there."""
    phi._require_checks("divisor pullback")
    if isinstance(f, Polynomial):
        f = RationalSection(f)
    if f.is_zero():
        raise MapError("the zero section does not cut out a divisor")
    d = f.degree_of(phi.target.grading)
    if d is None:
        raise MapError("the divisor section must be homogeneous")
    image = image_closure(phi)
    if image.defining_ideal.contains(f.num):
        raise MapError("the divisor contains the image of the map")
    if image.defining_ideal.contains(f.den):
        raise MapError("the polar divisor contains the image of the map")
    s = phi.pullback_section(f)
    ceil = ceiling(s)
    residual = s / ceil
    notes = ("the pullback equals the ceiling times the residual unit",)
    if phi.target.is_fan_backed and _class_is_cartier(phi.target, d):
        tag = VALID_EVERYWHERE
    else:
        tag = VALID_SMOOTH
    return ceil, residual, LocusReport(Ideal(phi.source.nvars, [ceil.num]), tag, notes)


# -- evaluation at points -----------------------------------------------------------


@dataclass(frozen=True)
class PointImage:
    """One orbit representative of the image of a point, or a refusal."""

    defined: bool
    values: tuple
    branches: tuple
    reason: str = ""
    notes: tuple = ()

    def __str__(self):
        if not self.defined:
            return "undefined here (%s)" % self.reason
        return "[%s]" % ", ".join(str(v) for v in self.values)


def _restricted_kernel(grading, support):
    rows = [[row[i] for i in support] for row in grading.free_rows]
    rows += [[row[i] for i in support] for _, row in grading.torsion]
    orders = tuple(m for m, _ in grading.torsion)
    return integer_kernel(rows, torsion_orders=orders, ncols=len(support))


def _one_orbit(grading, v, w):
    """Do the two value tuples differ by a character of the grading group?

    The image of the group in the torus of the common support is cut out by
    the monomial relations among the degrees, so it suffices to check those
    relations on the ratios."""
    support = [i for i, a in enumerate(v) if a.coeff != 0]
    one = SymbolicValue.make(1, 1, 0)
    for u in _restricted_kernel(grading, support):
        prod = one
        for i, e in zip(support, u):
            if e:
                prod = prod * (v[i] / w[i]) ** e
        if prod != one:
            return False
    return True


def _laurent_state(values, exps):
    # strong equality of invariant values: honest value, pole, or undefined
    num_zero = any(values[i].coeff == 0 for i, e in enumerate(exps) if e > 0)
    den_zero = any(values[i].coeff == 0 for i, e in enumerate(exps) if e < 0)
    if num_zero and den_zero:
        return ("undefined",)
    if den_zero:
        return ("pole",)
    if num_zero:
        return ("value", SymbolicValue.make(0, 1, 0))
    out = SymbolicValue.make(1, 1, 0)
    for i, e in enumerate(exps):
        if e:
            out = out * values[i] ** e
    return ("value", out)


def _invariants_agree(variety, v, w):
    for exps in variety.degree0_exponent_basis():
        if _laurent_state(v, exps) != _laurent_state(w, exps):
            return False
    return True


def map_point(phi, point):
    """Image of a source point under the described map.

    Membership in the agreement locus is checked first; then all branch
    values must land in a single orbit of the target.  Branches with equal
    zero patterns are compared exactly through the character lattice; the
    remaining comparisons fall back to degree-0 invariants and say so."""
    phi._require_checks("evaluation")
    point = tuple(Fraction(c) for c in point)
    assert len(point) == phi.source.nvars, "point arity mismatch"
    for vars_ in irrelevant_components(phi.source):
        if all(point[i] == 0 for i in vars_):
            return PointImage(False, (), (), "the point is irrelevant in the source")
    ag = agreement_locus(phi)
    if ag.denominator.evaluate(point) == 0:
        return PointImage(False, (), (), "a distinguished denominator vanishes here")
    for vars_, ideal in ag.components:
        if all(g.evaluate(point) == 0 for g in ideal.generators):
            return PointImage(
                False, (), (), "the description maps the point into the irrelevant locus"
            )
    try:
        branches = evaluate(list(phi.components), point)
    except SectionError as e:
        return PointImage(False, (), (), str(e))
    base = branches[0]
    pattern = tuple(a.coeff == 0 for a in base)
    notes = ()
    for row in branches[1:]:
        if tuple(a.coeff == 0 for a in row) != pattern:
            if not _invariants_agree(phi.target, base, row):
                return PointImage(
                    False, (), tuple(branches), "branch values lie in different orbits"
                )
            notes = ("equal as far as invariants can tell",)
        elif not _one_orbit(phi.target.grading, base, row):
            return PointImage(
                False, (), tuple(branches), "branch values lie in different orbits"
            )
    return PointImage(True, base, tuple(branches), "", notes)
