"""Toric varieties presented through their Cox data.

Two construction paths: from a fan (grading, irrelevant ideal, and charts all
derived), or from raw Cox data (weights, torsion rows, irrelevant monomials)
when no fan is available. Fanless varieties support everything except the
operations that genuinely need cones, which raise FanRequired.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .groebner import Ideal, saturate_at_poly
from .lattice import (
    AbelianGroupPresentation,
    cokernel_data,
    hermite_row_basis,
    integer_kernel,
)
from .poly import (
    DegreeVector,
    Grading,
    Polynomial,
    RationalSection,
    default_names,
    degree_of,
    gcd,
)


class FanRequired(RuntimeError):
    """Raised when an operation needs a fan but the variety has none."""


class CoxDataError(ValueError):
    pass


def _monomial_poly(nvars, exps):
    assert all(e >= 0 for e in exps)
    return Polynomial.monomial(nvars, tuple(exps), 1)


def monomial_section(nvars, exps):
    """Laurent monomial with integer exponent vector, as a rational section."""
    num = tuple(max(e, 0) for e in exps)
    den = tuple(max(-e, 0) for e in exps)
    return RationalSection(
        Polynomial.monomial(nvars, num, 1), Polynomial.monomial(nvars, den, 1)
    )


class ToricVariety:
    """Cox presentation of a toric variety: variables, grading, irrelevant ideal."""

    def __init__(self, names, grading, irrelevant_ideal, fan=None):
        self.names = tuple(names)
        assert len(set(self.names)) == len(self.names), "duplicate variable names"
        self.grading = grading
        assert grading.nvars == len(self.names)
        self.irrelevant_ideal = irrelevant_ideal
        assert irrelevant_ideal.nvars == len(self.names)
        self.fan = fan
        self.class_group = AbelianGroupPresentation(
            len(grading.free_rows), tuple(m for m, _ in grading.torsion)
        )
        rows = [list(r) for r in grading.free_rows] + [list(r) for _, r in grading.torsion]
        orders = tuple(m for m, _ in grading.torsion)
        self.degree0_lattice = tuple(
            tuple(v) for v in _reversed_hermite_kernel(rows, orders, self.nvars)
        )

    @property
    def nvars(self):
        return len(self.names)

    @property
    def is_fan_backed(self):
        return self.fan is not None

    def require_fan(self, what):
        if self.fan is None:
            raise FanRequired("%s needs a fan-backed variety" % what)
        return self.fan

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def from_fan(fan, names=None):
        m = len(fan.all_rays)
        if names is None:
            names = default_names(m)
        if len(names) != m:
            raise CoxDataError(
                "expected %d variable names (rays plus virtual rays), got %d"
                % (m, len(names))
            )
        A = [list(r) for r in fan.all_rays]
        free, torsion = cokernel_data(A)
        grading = Grading(m, free, torsion)
        # sanity: the grading annihilates the ray matrix, torsion rows mod order
        for row in free:
            assert all(
                sum(r * a for r, a in zip(row, col)) == 0 for col in zip(*A)
            ), "free grading row does not annihilate the rays"
        for order, row in torsion:
            assert all(
                sum(r * a for r, a in zip(row, col)) % order == 0 for col in zip(*A)
            ), "torsion grading row does not annihilate the rays"
        gens = []
        for cone in fan.maximal_cones:
            exps = [0] * m
            for i in range(m):
                if i not in cone.rays:
                    exps[i] = 1
            gens.append(_monomial_poly(m, exps))
        irrelevant = Ideal(m, gens) if gens else Ideal.whole_ring(m)
        return ToricVariety(names, grading, irrelevant, fan=fan)

    @staticmethod
    def from_cox_data(weights, torsion=(), irrelevant_monomials=None, names=None):
        """Fanless variety from grading rows and irrelevant monomial generators.

        weights: list of free grading rows. torsion: list of (order, row).
        irrelevant_monomials: list of variable-index lists, each the support of
        one monomial generator of B; None means B is the whole ring.
        """
        if not weights and not torsion:
            raise CoxDataError("need at least one grading row")
        m = len(weights[0]) if weights else len(torsion[0][1])
        for row in weights:
            if len(row) != m:
                raise CoxDataError("ragged weight matrix")
        for order, row in torsion:
            if len(row) != m:
                raise CoxDataError("ragged torsion row")
            if order < 2:
                raise CoxDataError("torsion orders must be at least 2")
        if names is None:
            names = default_names(m)
        if len(names) != m:
            raise CoxDataError("expected %d variable names, got %d" % (m, len(names)))
        grading = Grading(
            m,
            [tuple(int(a) for a in row) for row in weights],
            [(int(o), tuple(int(a) % int(o) for a in row)) for o, row in torsion],
        )
        if irrelevant_monomials is None:
            irrelevant = Ideal.whole_ring(m)
        else:
            gens = []
            for support in irrelevant_monomials:
                exps = [0] * m
                for i in support:
                    if not 0 <= i < m:
                        raise CoxDataError("irrelevant monomial uses unknown variable")
                    exps[i] += 1
                gens.append(_monomial_poly(m, exps))
            irrelevant = Ideal(m, gens) if gens else Ideal.whole_ring(m)
        return ToricVariety(names, grading, irrelevant, fan=None)

    # -- degrees ----------------------------------------------------------------

    def degree_of_variable(self, i):
        free = tuple(Fraction(row[i]) for row in self.grading.free_rows)
        tors = tuple(row[i] % m for m, row in self.grading.torsion)
        orders = tuple(m for m, _ in self.grading.torsion)
        return DegreeVector(free, tors, orders)

    def degree_of(self, f):
        return degree_of(f, self.grading)

    # -- function field ----------------------------------------------------------

    def degree0_exponent_basis(self, support_vars=None):
        """Basis of the lattice of degree-0 Laurent exponents supported on the
        given variables, as full-length integer vectors."""
        if support_vars is None:
            support = list(range(self.nvars))
        else:
            support = sorted(set(int(i) for i in support_vars))
        assert support, "empty support"
        rows = [[row[i] for i in support] for row in self.grading.free_rows]
        rows += [[row[i] for i in support] for _, row in self.grading.torsion]
        orders = tuple(m for m, _ in self.grading.torsion)
        basis = _reversed_hermite_kernel(rows, orders, len(support))
        out = []
        for v in basis:
            full = [0] * self.nvars
            for k, i in enumerate(support):
                full[i] = v[k]
            out.append(tuple(full))
        return out

    def degree0_generators(self, support_vars=None):
        """Laurent monomials in the supported variables forming a basis of the
        degree-0 exponent lattice there."""
        return [
            monomial_section(self.nvars, v)
            for v in self.degree0_exponent_basis(support_vars)
        ]

    # -- charts -------------------------------------------------------------------

    def chart_ring_membership(self, h, q):
        """Is q an element of the degree-0 part of the localization at h?"""
        if self.degree_of(h) is None:
            raise ValueError("chart element must be homogeneous")
        if h.is_zero() or h.is_constant():
            raise ValueError("chart element must be a nonzero non-unit")
        d = q.degree_of(self.grading)
        if d is None or not d.is_zero():
            return False
        den = q.den
        while not den.is_constant():
            g = gcd(den, h)
            if g.is_constant():
                return False
            den = den.exact_div(g)
        return True

    # -- irrelevant ideal ------------------------------------------------------------

    def is_relevant_ideal(self, I):
        """No power of the irrelevant ideal is contained in I."""
        if I.is_zero():
            return True
        for mu in self.irrelevant_ideal.generators:
            if mu.is_constant():
                # B is the whole ring: only the unit ideal is irrelevant
                if not I.is_whole_ring():
                    return True
                continue
            if not saturate_at_poly(I, mu).is_whole_ring():
                return True
        return False

    # -- fan-dependent helpers ----------------------------------------------------------

    def singular_strata_ideals(self):
        """Ideals of the orbit closures over the minimal singular cones."""
        fan = self.require_fan("singular locus")
        out = []
        for cone in fan.minimal_singular_cones():
            gens = [Polynomial.variable(self.nvars, i) for i in cone.rays]
            out.append(Ideal(self.nvars, gens))
        return out

    def __repr__(self):
        kind = "fan" if self.is_fan_backed else "cox-data"
        return "ToricVariety(%s; %s)" % (", ".join(self.names), kind)


@dataclass(frozen=True)
class Subscheme:
    variety: ToricVariety
    defining_ideal: Ideal

    def __post_init__(self):
        assert self.defining_ideal.nvars == self.variety.nvars
        for g in self.defining_ideal.generators:
            if self.variety.degree_of(g) is None:
                raise ValueError("defining ideal must be homogeneous")


def _reversed_hermite_kernel(rows, orders, n):
    """Kernel basis of the grading, Hermite-normalized with the variable order
    reversed so that pivots land on late variables (generators like x3/x1^3
    rather than their inverses)."""
    kernel = integer_kernel(rows, torsion_orders=orders, ncols=n)
    reversed_rows = [list(reversed(v)) for v in kernel]
    basis = hermite_row_basis(reversed_rows)
    return [list(reversed(v)) for v in basis]


def gradings_equivalent(a, b):
    """Same degree-0 sublattice, hence the same quotient presentation of Cl."""
    if a.nvars != b.nvars:
        return False
    ka = integer_kernel(
        [list(r) for r in a.free_rows] + [list(r) for _, r in a.torsion],
        torsion_orders=tuple(m for m, _ in a.torsion),
        ncols=a.nvars,
    )
    kb = integer_kernel(
        [list(r) for r in b.free_rows] + [list(r) for _, r in b.torsion],
        torsion_orders=tuple(m for m, _ in b.torsion),
        ncols=b.nvars,
    )
    return ka == kb
