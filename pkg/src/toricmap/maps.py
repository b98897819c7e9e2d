"""Multi-valued map descriptions between toric varieties.

A description assigns to every Cox variable of the target a radical section of
the source (or the zero section).  This module decides when such data defines
a rational map of the quotients, completes descriptions so they evaluate on
the largest possible locus, rescales, composes and compares them, and reports
agreement loci.
"""

import itertools
from fractions import Fraction

from .lattice import (
    Cone,
    minimal_containing_cone,
    star_and_quotient_fan,
    support_membership,
)
from .poly import (
    Polynomial,
    RationalSection,
    coprime_refinement,
    poly_to_str,
)
from .radical import (
    FormalSection,
    RadicalSection,
    SectionError,
    build_map_ring,
    eliminate_to_base,
    radical_to_str,
)
from .variety import monomial_section


class MapError(ValueError):
    """A description operation failed or a precondition does not hold."""


def _as_formal(nvars, comp):
    if isinstance(comp, FormalSection):
        assert comp.nvars == nvars, "component arity mismatch"
        return comp
    if isinstance(comp, RadicalSection):
        return _radical_to_formal(comp)
    if isinstance(comp, Polynomial):
        comp = RationalSection(comp)
    elif isinstance(comp, (int, Fraction)):
        comp = RationalSection.from_constant(nvars, comp)
    assert isinstance(comp, RationalSection) and comp.nvars == nvars
    return FormalSection.from_section(comp)


def _radical_to_formal(a):
    if a.is_zero():
        return FormalSection(a.ring.nvars, [])
    rads = tuple(
        (RationalSection(g), r, l)
        for (g, r), l in zip(a.ring.distinguished, a.exponents)
        if l
    )
    return FormalSection(a.ring.nvars, [(a.rational_part, rads)])


def _same_variety(a, b):
    if a is b:
        return True
    return (
        a.names == b.names
        and a.grading == b.grading
        and a.irrelevant_ideal == b.irrelevant_ideal
    )


class Description:
    """A multi-valued map written on Cox coordinates, one section per target
    variable.

    Components may be radical sections, rational sections, polynomials,
    constants or formal sections; they are rewritten on one common map ring.
    The homogeneity and relevance verdicts are computed once at construction.
    """

    def __init__(self, source, target, components):
        if len(components) != target.nvars:
            raise MapError(
                "expected %d components, got %d" % (target.nvars, len(components))
            )
        self.source = source
        self.target = target
        self._formals = tuple(_as_formal(source.nvars, c) for c in components)

        inputs = []
        extra = []
        for f in self._formals:
            for pair in f.radical_inputs():
                if pair not in inputs:
                    inputs.append(pair)
            for coeff, _ in f.terms:
                if not coeff.den.is_constant():
                    extra.append(coeff.den)
        self.ring, canonical = build_map_ring(source, inputs, extra_denominators=extra)
        table = dict(zip(inputs, canonical))
        self.components = tuple(
            f.to_radical_section(self.ring, table) for f in self._formals
        )

        self.zero_indices = tuple(
            i for i, c in enumerate(self.components) if c.is_zero()
        )
        self._compute_relevance()
        self._compute_homogeneity()

    # -- verdict caches -----------------------------------------------------------

    def _compute_relevance(self):
        self.sigma = None
        fan = self.target.fan
        if fan is not None:
            self.relevance_mode = "cone"
            if any(i >= len(fan.rays) for i in self.zero_indices):
                # a virtual coordinate vanishes identically: the image lies in
                # the irrelevant locus no matter what the fan says
                self.relevant = False
                return
            self.sigma = minimal_containing_cone(fan, self.zero_indices)
            self.relevant = self.sigma is not None
            return
        self.relevance_mode = "kernel"
        zero = set(self.zero_indices)
        self.relevant = any(
            not (set(g.variables()) & zero)
            for g in self.target.irrelevant_ideal.generators
        )

    def _compute_homogeneity(self):
        support = [i for i in range(self.target.nvars) if i not in self.zero_indices]
        self.homogeneous = True
        self.homogeneity_witness = None
        if not support:
            return
        for v in self.target.degree0_exponent_basis(support):
            pb = self._pullback_monomial(v)
            d = pb.degree_of(self.source.grading)
            if not pb.is_single_valued() or d is None or not d.is_zero():
                self.homogeneous = False
                self.homogeneity_witness = monomial_section(self.target.nvars, v)
                return

    # -- pullbacks ----------------------------------------------------------------

    def _pullback_monomial(self, exps):
        """Pull back a Laurent monomial of the target; negative exponents are
        only allowed on variables with nonzero component."""
        out = self.ring.embed(1)
        for i, e in enumerate(exps):
            if e == 0:
                continue
            c = self.components[i]
            if c.is_zero():
                if e > 0:
                    return self.ring.embed(0)
                raise MapError("negative power of a zero component")
            out = out * c**e
        return out

    def pullback_polynomial(self, p):
        """Substitute the components into a polynomial on the target."""
        assert isinstance(p, Polynomial) and p.nvars == self.target.nvars
        total = self.ring.embed(0)
        for exps in sorted(p.terms):
            term = self.ring.embed(p.terms[exps]) * self._pullback_monomial(exps)
            try:
                total = total + term
            except SectionError as e:
                raise MapError("pullback is not a single radical class: %s" % e)
        return total

    def pullback_section(self, s):
        if isinstance(s, Polynomial):
            s = RationalSection(s)
        den = self.pullback_polynomial(s.den)
        if den.is_zero():
            raise MapError(
                "denominator %s pulls back to zero" % poly_to_str(s.den, self.target.names)
            )
        return self.pullback_polynomial(s.num) / den

    # -- plumbing -----------------------------------------------------------------

    def passes_checks(self):
        return self.homogeneous and self.relevant

    def _require_checks(self, what):
        if not self.homogeneous:
            raise MapError(
                "%s requires a homogeneous description (witness %s)"
                % (what, self.homogeneity_witness)
            )
        if not self.relevant:
            raise MapError("%s requires a relevant description" % what)

    def _rescaled_by(self, f, w):
        """Componentwise multiply by f**w_i, rational exponents allowed."""
        base = FormalSection.from_section(RationalSection(f))
        new = []
        for formal, wi in zip(self._formals, w):
            wi = Fraction(wi)
            if formal.is_zero() or wi == 0:
                new.append(formal)
            else:
                new.append(formal * base.root(wi.denominator) ** wi.numerator)
        return Description(self.source, self.target, new)

    def _candidate_divisors(self):
        pool = []
        for c in self.components:
            if c.is_zero():
                continue
            pool.append(c.rational_part.num)
            pool.append(c.rational_part.den)
        for g, _ in self.ring.distinguished:
            pool.append(g)
        if not pool:
            return []
        basis, _ = coprime_refinement(pool)
        return [b for b in basis if not b.is_constant()]

    def component_data(self):
        """Ring-independent structural data, for exact comparisons."""
        out = []
        for c in self.components:
            rads = tuple(
                (g, r, l)
                for (g, r), l in zip(self.ring.distinguished, c.exponents)
                if l
            )
            out.append((c.rational_part, rads))
        return tuple(out)

    def __repr__(self):
        body = ", ".join(radical_to_str(c) for c in self.components)
        return "Description(%s)" % body


def identity_description(X):
    comps = [Polynomial.variable(X.nvars, i) for i in range(X.nvars)]
    return Description(X, X, comps)


# -- the checks -------------------------------------------------------------------


def check_homogeneity(phi):
    """Does the description pull exact degree-0 sections back to exact degree-0
    sections?  Returns (verdict, witness); the witness is a degree-0 monomial
    section of the target whose pullback fails."""
    return phi.homogeneous, phi.homogeneity_witness


def check_relevance(phi):
    """Does the description avoid the irrelevant locus of the target?

    With a fan on the target this asks for the zero components to span a cone;
    the cone is returned.  Without a fan only the weaker kernel test runs: some
    irrelevant generator must survive the pullback."""
    return phi.relevant, phi.sigma


def normalize_zero_strata(phi):
    """Zero out every component whose ray lies in the smallest zero cone."""
    phi._require_checks("normalization")
    if phi.sigma is None:
        return phi
    new = []
    for i, formal in enumerate(phi._formals):
        if i in phi.sigma.rays:
            new.append(FormalSection(phi.source.nvars, []))
        else:
            new.append(formal)
    return Description(phi.source, phi.target, new)


# -- rescaling and completion -----------------------------------------------------


def rescale(phi, f, w):
    """Multiply the components by f**w_i; w must be in the kernel of the star
    projection so the underlying map is unchanged."""
    phi._require_checks("rescaling")
    phi.target.require_fan("rescaling")
    if isinstance(f, (int, Fraction)):
        f = Polynomial.constant(phi.source.nvars, f)
    assert isinstance(f, Polynomial)
    if f.is_zero():
        raise MapError("cannot rescale by the zero section")
    if phi.source.degree_of(f) is None:
        raise MapError("rescaling section must be homogeneous")
    w = [Fraction(a) for a in w]
    if len(w) != phi.target.nvars:
        raise MapError("rescaling vector has wrong length")
    sq = star_and_quotient_fan(phi.target.fan, phi.sigma)
    for row in sq.L:
        if sum(a * b for a, b in zip(row, w)) != 0:
            raise MapError("rescaling vector is not in the kernel of the star projection")
    return phi._rescaled_by(f, w)


class CompletionStep:
    """One rescaling step of the completion loop: the candidate divisor, the
    component orders along it, and the corrected orders."""

    def __init__(self, candidate, orders, corrected):
        self.candidate = candidate
        self.orders = orders
        self.corrected = corrected

    def __repr__(self):
        return "CompletionStep(%s, %s -> %s)" % (
            self.candidate,
            self.orders,
            self.corrected,
        )


def _solve_nonneg(cols_of, indices, u):
    """Lexicographically first nonnegative rational solution of
    sum_i x_i * col_i = u with support among the given column indices.

    Supports are enumerated by size then lexicographically; dependent column
    subsets are skipped, so the returned solution is a vertex."""
    m = len(u)
    if all(a == 0 for a in u):
        return {}
    for size in range(1, len(indices) + 1):
        for sub in itertools.combinations(indices, size):
            rows = [[Fraction(cols_of(i)[k]) for i in sub] + [Fraction(u[k])] for k in range(m)]
            # Gaussian elimination; demand full column rank and consistency
            piv = 0
            for col in range(size):
                srow = next((r for r in range(piv, m) if rows[r][col] != 0), None)
                if srow is None:
                    piv = None
                    break
                rows[piv], rows[srow] = rows[srow], rows[piv]
                lead = rows[piv][col]
                rows[piv] = [a / lead for a in rows[piv]]
                for r in range(m):
                    if r != piv and rows[r][col] != 0:
                        f = rows[r][col]
                        rows[r] = [a - f * b for a, b in zip(rows[r], rows[piv])]
                piv += 1
            if piv is None:
                continue
            if any(all(a == 0 for a in row[:-1]) and row[-1] != 0 for row in rows):
                continue
            x = [rows[k][-1] for k in range(size)]
            if all(a >= 0 for a in x):
                return dict(zip(sub, x))
    return None


def _completion_move(phi, sq, f):
    """Orders along f, and the corrected orders if a rescale is needed.

    Returns (v, None) when the description already agrees generically along
    (f) or cannot be repaired there, and (v, v2) when rescaling by f**(v2-v)
    extends the agreement locus."""
    n = phi.target.nvars
    fan = phi.target.fan
    v = [
        Fraction(0) if c.is_zero() else c.order_along(f) for c in phi.components
    ]
    pattern = sorted(
        set(phi.zero_indices) | {i for i in range(n) if v[i] > 0}
    )
    if all(v[i] >= 0 for i in range(n)):
        if all(i < len(fan.rays) for i in pattern):
            if minimal_containing_cone(fan, pattern) is not None:
                return v, None
    u = [sum(row[i] * v[i] for i in range(n)) for row in sq.L]
    scale = 1
    for a in u:
        scale = scale * a.denominator // _gcd(scale, a.denominator)
    u_int = [int(a * scale) for a in u]
    tau_q = support_membership(sq.quotient_fan, u_int)
    if tau_q is None:
        # the underlying map is not regular at the generic point of (f)
        return v, None
    tq = set(tau_q.rays)
    indices = None
    for cone in sq.star_cones:
        img = sq.star_image_cones[cone]
        if tq <= set(img.rays):
            indices = sorted(
                i for i in cone.rays if sq.quotient_ray_index.get(i) in tq
            )
            break
    if indices is None:
        return v, None
    sol = _solve_nonneg(lambda i: [row[i] for row in sq.L], indices, u)
    if sol is None:
        return v, None
    v2 = [sol.get(i, Fraction(0)) for i in range(n)]
    if v2 == v:
        return v, None
    return v, v2


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a) if a else 1


def complete(phi):
    """Extend the agreement locus of a description over every divisor where
    the underlying map is regular, by iterated rescaling.

    The result carries the rescaling history in completion_steps; the orders
    vector before and after each step gives the multiplicities of the moved
    divisor."""
    phi.source.require_fan("completion")
    phi.target.require_fan("completion")
    phi._require_checks("completion")
    phi = normalize_zero_strata(phi)
    sq = star_and_quotient_fan(phi.target.fan, phi.sigma)
    steps = []
    for _ in range(200):
        moved = False
        for f in phi._candidate_divisors():
            v, v2 = _completion_move(phi, sq, f)
            if v2 is None:
                continue
            steps.append(CompletionStep(f, tuple(v), tuple(v2)))
            phi = phi._rescaled_by(f, [b - a for a, b in zip(v, v2)])
            moved = True
            break
        if not moved:
            phi.completion_steps = tuple(steps)
            return phi
    raise MapError("completion did not terminate")


# -- agreement --------------------------------------------------------------------


def irrelevant_components(variety):
    """Variable index sets of the irreducible components of the irrelevant
    locus: minimal hitting sets of the supports of the irrelevant generators."""
    supports = []
    for g in variety.irrelevant_ideal.generators:
        if g.is_constant():
            if not g.is_zero():
                return ()
            continue
        supports.append(set(g.variables()))
    if not supports:
        return ()
    universe = sorted(set().union(*supports))
    found = []
    for size in range(1, len(universe) + 1):
        for sub in itertools.combinations(universe, size):
            s = set(sub)
            if any(set(prev) <= s for prev in found):
                continue
            if all(s & supp for supp in supports):
                found.append(sub)
    return tuple(found)


class AgreementLocus:
    """Where a description evaluates to an honest point of the target.

    The locus is: inverted denominator nonzero, minus for each irrelevant
    component of the target the vanishing of that component's pulled-back
    ideal."""

    def __init__(self, denominator, components):
        self.denominator = denominator
        self.components = tuple(components)

    def __repr__(self):
        return "AgreementLocus(den=%s, %d components)" % (
            self.denominator,
            len(self.components),
        )


def agreement_locus(phi):
    phi._require_checks("agreement locus")
    out = []
    for vars_ in irrelevant_components(phi.target):
        gens = [phi.components[i] for i in vars_ if not phi.components[i].is_zero()]
        # a relevant description cannot vanish on a whole irrelevant component
        assert gens, "all components of an irrelevant component vanish"
        out.append((vars_, eliminate_to_base(gens)))
    return AgreementLocus(phi.ring.inverted_denominator, out)


# -- comparison -------------------------------------------------------------------


def same_map(phi, psi):
    """Do two descriptions define the same rational map of the quotients?

    True when the zero strata coincide and the pullbacks of the degree-0
    generators of the common smallest stratum agree exactly."""
    phi._require_checks("map comparison")
    psi._require_checks("map comparison")
    if not _same_variety(phi.source, psi.source) or not _same_variety(
        phi.target, psi.target
    ):
        raise MapError("descriptions connect different varieties")
    if phi.sigma is not None or psi.sigma is not None:
        if phi.sigma != psi.sigma:
            return False
        zero = set(phi.sigma.rays)
    else:
        if set(phi.zero_indices) != set(psi.zero_indices):
            return False
        zero = set(phi.zero_indices)
    support = [i for i in range(phi.target.nvars) if i not in zero]
    if not support:
        return True
    for v in phi.target.degree0_exponent_basis(support):
        a = phi._pullback_monomial(v).as_rational_section()
        b = psi._pullback_monomial(v).as_rational_section()
        assert a is not None and b is not None, "homogeneous pullback not single-valued"
        if a != b:
            return False
    return True


# -- composition ------------------------------------------------------------------


def compose(outer, inner):
    """The description of outer after inner (inner maps into outer's source).

    Radicals of the outer map pull back to formal roots of the pulled-back
    radicands; everything is re-canonicalized in a fresh map ring."""
    inner._require_checks("composition")
    outer._require_checks("composition")
    if not _same_variety(inner.target, outer.source):
        raise MapError("composition chains through different varieties")
    g = outer.ring.inverted_denominator
    if inner.pullback_polynomial(g).is_zero():
        raise MapError(
            "composition precondition failed: the inner map lands in the "
            "non-regular locus of the outer map"
        )
    roots = []
    for h, s in outer.ring.distinguished:
        ph = inner.pullback_polynomial(h)
        roots.append(_radical_to_formal(ph).root(s))
    formals = []
    for comp in outer.components:
        if comp.is_zero():
            formals.append(FormalSection(inner.source.nvars, []))
            continue
        q = comp.rational_part
        pden = inner.pullback_polynomial(q.den)
        assert not pden.is_zero(), "denominator escaped the inverted denominator"
        formal = _radical_to_formal(inner.pullback_polynomial(q.num) / pden)
        for fr, l in zip(roots, comp.exponents):
            if l:
                formal = formal * fr**l
        formals.append(formal)
    out = Description(inner.source, outer.target, formals)
    if not out.relevant:
        raise MapError(
            "composition precondition failed: the composite lands in the "
            "irrelevant locus"
        )
    return out


# -- reconstruction from pullbacks --------------------------------------------------


def describe_from_pullbacks(X, Y, assignments, zero_set=()):
    """Build a description of a map X -> Y from the pullbacks of the degree-0
    generators of a stratum of Y.

    zero_set lists the target variables that must vanish; assignments are the
    pullbacks of Y.degree0_generators on the complementary support, in that
    order.  Free choices in the construction are set to 1."""
    zero = sorted(set(int(i) for i in zero_set))
    support = [i for i in range(Y.nvars) if i not in zero]
    if not support:
        raise MapError("no support left for the map")
    basis = Y.degree0_exponent_basis(support)
    if len(assignments) != len(basis):
        raise MapError(
            "expected %d assignments (degree-0 generators on the support), got %d"
            % (len(basis), len(assignments))
        )
    values = []
    for a in assignments:
        if isinstance(a, Polynomial):
            a = RationalSection(a)
        elif isinstance(a, (int, Fraction)):
            a = RationalSection.from_constant(X.nvars, a)
        assert isinstance(a, RationalSection) and a.nvars == X.nvars
        if a.is_zero():
            raise MapError("assignments must be nonzero sections")
        d = a.degree_of(X.grading)
        if d is None or not d.is_zero():
            raise MapError(
                "inconsistent assignments: %s is not of degree zero"
                % (a,)
            )
        values.append(a)

    # pivots of the reversed-order Hermite basis sit at the last nonzero entry
    pivots = [max(i for i in support if row[i]) for row in basis]
    comps = {
        i: FormalSection.from_section(RationalSection.from_constant(X.nvars, 1))
        for i in support
    }
    for j in range(len(basis) - 1, -1, -1):
        row, p = basis[j], pivots[j]
        rhs = FormalSection.from_section(values[j])
        for i in support:
            if i == p or row[i] == 0:
                continue
            rhs = rhs * comps[i] ** (-row[i])
        d = row[p]
        assert d > 0, "Hermite pivot must be positive"
        comps[p] = rhs.root(d) if d > 1 else rhs
    components = [
        FormalSection(X.nvars, []) if i in zero else comps[i] for i in range(Y.nvars)
    ]
    desc = Description(X, Y, components)
    for row, a in zip(basis, values):
        back = desc._pullback_monomial(row).as_rational_section()
        if back != a:
            raise MapError("inconsistent assignments (pullback round trip failed)")
    return desc
