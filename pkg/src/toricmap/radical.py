"""Multi-valued sections as elements of simple radical extensions.

A map ring attaches finitely many distinguished radicals a_j = g_j^(1/r_j)
to a localized Cox ring, with the radicands square-free, pairwise coprime and
non-constant. Every multi-valued section we care about is then a monomial
q * prod a_j^(l_j) with 0 <= l_j < r_j, and that spelling is unique, which
turns equality, floors, ceilings, and root-consistent evaluation into
bookkeeping. Evaluation keeps roots symbolic: a value is an exact rational
times a root of unity times tokens for the irrational radicals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as int_gcd

from .groebner import Ideal
from .poly import (
    ExprError,
    Polynomial,
    RationalSection,
    coprime_refinement,
    degree_of as poly_degree_of,
    order_along,
    parse_expression,
    poly_to_str,
    section_to_str,
)


class SectionError(ValueError):
    pass


def _iroot(n, r):
    """Floor of the r-th root of a nonnegative integer."""
    assert n >= 0 and r >= 1
    if n in (0, 1) or r == 1:
        return n
    lo, hi = 0, 1
    while hi**r <= n:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**r <= n:
            lo = mid
        else:
            hi = mid
    return lo

def rational_root(c, r):
    """Exact r-th root of a rational number, or None if it is irrational."""
    c = Fraction(c)
    if r == 1:
        return c
    if c == 0:
        return Fraction(0)
    if c < 0:
        if r % 2 == 0:
            return None
        w = rational_root(-c, r)
        return None if w is None else -w
    p = _iroot(c.numerator, r)
    q = _iroot(c.denominator, r)
    if p**r == c.numerator and q**r == c.denominator:
        return Fraction(p, q)
    return None


# -- map rings and their elements ---------------------------------------------


class MapRing:
    """Base ring with a denominator inverted and distinguished radicals attached."""

    def __init__(self, base_variety, inverted_denominator, distinguished):
        self.base_variety = base_variety
        self.inverted_denominator = inverted_denominator
        self.distinguished = tuple(distinguished)
        for g, r in self.distinguished:
            assert isinstance(g, Polynomial) and not g.is_constant()
            assert isinstance(r, int) and r >= 2

    @property
    def nvars(self):
        return self.base_variety.nvars

    def embed(self, q):
        """A single-valued element of the ring."""
        if isinstance(q, Polynomial):
            q = RationalSection(q)
        elif isinstance(q, (int, Fraction)):
            q = RationalSection.from_constant(self.nvars, q)
        assert isinstance(q, RationalSection) and q.nvars == self.nvars
        return RadicalSection(self, q, (0,) * len(self.distinguished))

    def radical_generator(self, j):
        exps = [0] * len(self.distinguished)
        exps[j] = 1
        one = RationalSection.from_constant(self.nvars, 1)
        return RadicalSection(self, one, tuple(exps))

    def __repr__(self):
        rads = ", ".join(
            "root(%s,%d)" % (poly_to_str(g, self.base_variety.names), r)
            for g, r in self.distinguished
        )
        return "MapRing(%s; [%s])" % (
            poly_to_str(self.inverted_denominator, self.base_variety.names),
            rads,
        )


class RadicalSection:
    """Canonical monomial q * prod a_j^(l_j) in a map ring."""

    __slots__ = ("ring", "rational_part", "exponents")

    def __init__(self, ring, rational_part, exponents):
        assert isinstance(rational_part, RationalSection)
        assert rational_part.nvars == ring.nvars
        exponents = list(exponents)
        assert len(exponents) == len(ring.distinguished)
        # fold whole powers of each radical into the rational part
        for j, (g, r) in enumerate(ring.distinguished):
            k, exponents[j] = divmod(exponents[j], r)
            if k:
                rational_part = rational_part * RationalSection(g) ** k
        if rational_part.is_zero():
            exponents = [0] * len(exponents)
        self.ring = ring
        self.rational_part = rational_part
        self.exponents = tuple(exponents)

    def is_zero(self):
        return self.rational_part.is_zero()

    def is_single_valued(self):
        return all(l == 0 for l in self.exponents)

    def as_rational_section(self):
        assert self.is_single_valued(), "section is genuinely multi-valued"
        return self.rational_part

    def __eq__(self, other):
        if not isinstance(other, RadicalSection):
            return NotImplemented
        return (
            self.ring is other.ring
            and self.rational_part == other.rational_part
            and self.exponents == other.exponents
        )

    def __hash__(self):
        return hash((id(self.ring), self.rational_part, self.exponents))

    def __neg__(self):
        return RadicalSection(self.ring, -self.rational_part, self.exponents)

    def __add__(self, other):
        other = self._coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.exponents != other.exponents:
            raise SectionError("sum of sections with different radical parts")
        return RadicalSection(
            self.ring, self.rational_part + other.rational_part, self.exponents
        )

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        return RadicalSection(
            self.ring,
            self.rational_part * other.rational_part,
            tuple(a + b for a, b in zip(self.exponents, other.exponents)),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise SectionError("division by zero section")
        inv_rat = other.rational_part.inverse()
        for j, (g, r) in enumerate(self.ring.distinguished):
            if other.exponents[j]:
                inv_rat = inv_rat / RationalSection(g)
        inv_exps = tuple(
            (r - l) % r for (g, r), l in zip(self.ring.distinguished, other.exponents)
        )
        return self * RadicalSection(self.ring, inv_rat, inv_exps)

    def __pow__(self, n):
        assert isinstance(n, int)
        if n < 0:
            return self.ring.embed(1) / self**-n
        out = self.ring.embed(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def _coerce(self, other):
        if isinstance(other, RadicalSection):
            assert other.ring is self.ring, "sections from different map rings"
            return other
        return self.ring.embed(other)

    def degree_of(self, grading=None):
        if grading is None:
            grading = self.ring.base_variety.grading
        d = self.rational_part.degree_of(grading)
        if d is None:
            return None
        for (g, r), l in zip(self.ring.distinguished, self.exponents):
            if l == 0:
                continue
            dg = poly_degree_of(g, grading)
            if dg is None:
                return None
            d = d + dg.scale(Fraction(l, r))
        return d

    def order_along(self, q):
        """Vanishing order along a prime divisor candidate, a rational number."""
        v = Fraction(order_along(q, self.rational_part))
        for (g, r), l in zip(self.ring.distinguished, self.exponents):
            if l:
                v += Fraction(l * order_along(q, g), r)
        return v

    def __repr__(self):
        return "RadicalSection(%s)" % radical_to_str(self)


def radical_to_str(a, names=None):
    if names is None:
        names = a.ring.base_variety.names
    parts = []
    rat = a.rational_part
    if not (rat.is_constant() and rat.constant_value() == 1) or a.is_single_valued():
        s = section_to_str(rat, names)
        if " + " in s or " - " in s:
            s = "(%s)" % s
        parts.append(s)
    for (g, r), l in zip(a.ring.distinguished, a.exponents):
        if l == 0:
            continue
        root = "root(%s,%d)" % (poly_to_str(g, names), r)
        parts.append(root if l == 1 else "%s^%d" % (root, l))
    return "*".join(parts) if parts else "1"


# -- construction -----------------------------------------------------------------


def build_map_ring(X, sections, extra_denominators=()):
    """Build the common map ring for radicands (f_i, r_i) over the variety X.

    Returns (ring, canonical) where canonical[i] is f_i^(1/r_i) rewritten on the
    distinguished radicals. Radicands are refined to a square-free pairwise
    coprime basis, each basis factor getting the smallest root order that
    expresses every input. extra_denominators are further polynomials to invert
    (denominators of rational parts that carry no radical).
    """
    nvars = X.nvars
    prepared = []
    for f, r in sections:
        if isinstance(f, Polynomial):
            f = RationalSection(f)
        elif isinstance(f, (int, Fraction)):
            f = RationalSection.from_constant(nvars, f)
        assert isinstance(f, RationalSection) and f.nvars == nvars
        if f.is_zero():
            raise SectionError("zero radicand")
        if not isinstance(r, int) or r < 1:
            raise SectionError("root index must be a positive integer")
        prepared.append((f, r))

    pool = []
    for f, _ in prepared:
        pool.append(f.num)
        pool.append(f.den)
    basis, rows = coprime_refinement(pool) if pool else ([], [])

    # exact exponent of each basis factor in every radicand, plus the constant
    exps = []
    consts = []
    for i, (f, r) in enumerate(prepared):
        num_row = rows[2 * i]
        den_row = rows[2 * i + 1]
        exps.append([a - b for a, b in zip(num_row, den_row)])
        cnum, cden = f.num, f.den
        for b, a in zip(basis, num_row):
            for _ in range(a):
                cnum = cnum.exact_div(b)
        for b, a in zip(basis, den_row):
            for _ in range(a):
                cden = cden.exact_div(b)
        assert cnum.is_constant() and cden.is_constant()
        consts.append(cnum.constant_value() / cden.constant_value())

    orders = []
    for j in range(len(basis)):
        m = 1
        for (f, r), row in zip(prepared, exps):
            m = m * (d := Fraction(row[j], r).denominator) // int_gcd(m, d)
        orders.append(m)

    distinguished = [(b, m) for b, m in zip(basis, orders) if m >= 2]
    den = Polynomial.constant(nvars, 1)
    for f, _ in prepared:
        if not f.den.is_constant():
            den = den * f.den
    for g in extra_denominators:
        assert isinstance(g, Polynomial) and not g.is_zero()
        if not g.is_constant():
            den = den * g
    ring = MapRing(X, den, distinguished)

    canonical = []
    for (f, r), row, c in zip(prepared, exps, consts):
        w = rational_root(c, r)
        if w is None:
            raise SectionError("irrational constant root")
        rat = RationalSection.from_constant(nvars, w)
        ring_exps = [0] * len(distinguished)
        pos = {id(b): k for k, (b, _) in enumerate(distinguished)}
        for b, e in zip(basis, row):
            q = Fraction(e, r)
            whole = q.numerator // q.denominator
            frac = q - whole
            rat = rat * RationalSection(b) ** whole
            if frac:
                k = pos[id(b)]
                ring_exps[k] = int(frac * distinguished[k][1])
        canonical.append(RadicalSection(ring, rat, ring_exps))
    return ring, canonical


# -- the named operations ---------------------------------------------------------


def multiply(a, b):
    return a * b


def divide(a, b):
    return a / b


def power(a, n):
    return a**n


def floor(a):
    """Largest single-valued divisor: just the rational part."""
    return a.rational_part


def ceiling(a):
    """Smallest single-valued multiple: rational part times each active radicand."""
    out = a.rational_part
    for (g, r), l in zip(a.ring.distinguished, a.exponents):
        if l > 0:
            out = out * RationalSection(g)
    return out


def is_single_valued(a):
    return a.is_single_valued()


def eliminate_to_base(generators):
    """Contract an ideal of radical sections to the base ring: take ceilings.

    In the localized base ring denominators are units, so the contracted ideal
    is generated by the ceiling numerators; no elimination order is needed.
    """
    assert generators, "need at least one generator"
    ring = generators[0].ring
    gens = []
    for a in generators:
        assert a.ring is ring, "generators from different map rings"
        if a.is_zero():
            continue
        gens.append(ceiling(a).num)
    return Ideal(ring.nvars, gens)


# -- evaluation -------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolicValue:
    """Exact value c * zeta^e * prod root(v_j, r_j)^(m_j) of one branch.

    zeta is the primitive root of unity of order `zeta_order`; tokens are
    (index, exponent, root order, radicand value) for radicals whose value at
    the point has no exact rational root. The form is canonical: zeta_order is
    minimal (never 2, a sign folds into the coefficient) and token exponents
    sit strictly between 0 and the root order.
    """

    coeff: Fraction
    zeta_order: int
    zeta_exp: int
    tokens: tuple

    @staticmethod
    def make(coeff, order, exp, tokens=()):
        coeff = Fraction(coeff)
        folded = []
        for j, m, r, v in sorted(tokens):
            k, m = divmod(m, r)
            if k:
                coeff *= v**k
            if m:
                folded.append((j, m, r, v))
        if coeff == 0:
            return SymbolicValue(Fraction(0), 1, 0, ())
        exp %= order
        g = int_gcd(exp, order)
        order, exp = order // g, exp // g
        if order == 2:
            coeff, order, exp = -coeff, 1, 0
        return SymbolicValue(coeff, order, exp, tuple(folded))

    def is_rational(self):
        return self.zeta_order == 1 and not self.tokens

    def as_fraction(self):
        return self.coeff if self.is_rational() else None

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SymbolicValue.make(
                self.coeff * other, self.zeta_order, self.zeta_exp, self.tokens
            )
        order = self.zeta_order * other.zeta_order // int_gcd(self.zeta_order, other.zeta_order)
        exp = self.zeta_exp * (order // self.zeta_order) + other.zeta_exp * (
            order // other.zeta_order
        )
        merged = {}
        for j, m, r, v in self.tokens + other.tokens:
            key = (j, r, v)
            merged[key] = merged.get(key, 0) + m
        tokens = [(j, m, r, v) for (j, r, v), m in merged.items()]
        return SymbolicValue.make(self.coeff * other.coeff, order, exp, tokens)

    __rmul__ = __mul__

    def inverse(self):
        assert self.coeff != 0, "inverse of zero value"
        coeff = 1 / self.coeff
        tokens = []
        for j, m, r, v in self.tokens:
            coeff /= v
            tokens.append((j, r - m, r, v))
        return SymbolicValue.make(coeff, self.zeta_order, -self.zeta_exp, tokens)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n):
        assert isinstance(n, int)
        if n < 0:
            return self.inverse() ** -n
        out = SymbolicValue.make(1, 1, 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __str__(self):
        if self.coeff == 0:
            return "0"
        parts = []
        if self.coeff != 1 or (self.zeta_order == 1 and not self.tokens):
            parts.append(
                str(self.coeff.numerator)
                if self.coeff.denominator == 1
                else "%d/%d" % (self.coeff.numerator, self.coeff.denominator)
            )
        if self.zeta_order > 1:
            z = "zeta%d" % self.zeta_order
            parts.append(z if self.zeta_exp == 1 else "%s^%d" % (z, self.zeta_exp))
        for _, m, r, v in self.tokens:
            t = "root(%s,%d)" % (v, r)
            parts.append(t if m == 1 else "%s^%d" % (t, m))
        return "*".join(parts)

    def complex_value(self):
        """Principal-branch numeric value, for display only."""
        import cmath

        z = complex(self.coeff) * cmath.exp(2j * cmath.pi * self.zeta_exp / self.zeta_order)
        for _, m, r, v in self.tokens:
            z *= complex(v) ** (Fraction(m, r))
        return z


def evaluate(sections, point):
    """All branch values of the given sections at a rational point.

    One root is chosen per distinguished radical and every branch rescales that
    same choice by a root of unity, so occurrences of a radical across the
    sections always agree. Returns the deduplicated list of value tuples, in
    branch-enumeration order.
    """
    assert sections, "need at least one section"
    ring = sections[0].ring
    for a in sections:
        assert a.ring is ring, "sections from different map rings"
    point = tuple(Fraction(c) for c in point)
    assert len(point) == ring.nvars, "point arity mismatch"
    if ring.inverted_denominator.evaluate(point) == 0:
        raise SectionError("point in the non-regular locus")
    for a in sections:
        if a.rational_part.den.evaluate(point) == 0:
            raise SectionError("section undefined at the point")

    values = []
    half = []
    for g, r in ring.distinguished:
        v = g.evaluate(point)
        if v == 0:
            values.append((Fraction(0), False))
            half.append(False)
            continue
        w = rational_root(v, r)
        if w is not None:
            values.append((w, True))
            half.append(False)
            continue
        if r % 2 == 0:
            w = rational_root(-v, r)
            if w is not None:
                values.append((w, True))
                half.append(True)
                continue
        values.append((v, False))
        half.append(False)

    R = 1
    for (g, r), h in zip(ring.distinguished, half):
        need = 2 * r if h else r
        R = R * need // int_gcd(R, need)

    branches = [()]
    for g, r in ring.distinguished:
        branches = [b + (k,) for b in branches for k in range(r)]

    seen = set()
    out = []
    for branch in branches:
        row = []
        for a in sections:
            coeff = a.rational_part.evaluate(point)
            exp = 0
            tokens = []
            for j, ((g, r), l) in enumerate(zip(ring.distinguished, a.exponents)):
                if l == 0:
                    continue
                w, exact = values[j]
                if w == 0:
                    coeff = Fraction(0)
                    break
                exp += l * branch[j] * (R // r)
                if exact:
                    coeff *= w**l
                    if half[j]:
                        exp += l * (R // (2 * r))
                else:
                    tokens.append((j, l, r, w))
            if coeff == 0:
                row.append(SymbolicValue.make(0, 1, 0))
            else:
                row.append(SymbolicValue.make(coeff, R, exp, tokens))
        row = tuple(row)
        if row not in seen:
            seen.add(row)
            out.append(row)
    return out


# -- formal products of radicals, for parsed input ----------------------------------


class FormalSection:
    """Sum of formal terms q * prod root(f_i, r_i)^(e_i), before any map ring exists.

    This is the shape parsed map components take; conversion to canonical
    radical sections happens once the common map ring is built.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms):
        combined = {}
        for coeff, radicals in terms:
            if coeff.is_zero():
                continue
            merged = {}
            for f, r, e in radicals:
                merged[(f, r)] = merged.get((f, r), 0) + e
            rads = tuple(
                sorted(
                    ((f, r, e) for (f, r), e in merged.items() if e != 0),
                    key=_radical_key,
                )
            )
            if rads in combined:
                combined[rads] = combined[rads] + coeff
            else:
                combined[rads] = coeff
        self.nvars = nvars
        self.terms = tuple(
            (coeff, rads) for rads, coeff in combined.items() if not coeff.is_zero()
        )

    @staticmethod
    def from_section(s):
        return FormalSection(s.nvars, [(s, ())])

    def is_zero(self):
        return not self.terms

    def as_rational_section(self):
        """The underlying rational section, or None if a radical survives."""
        if self.is_zero():
            return RationalSection.from_constant(self.nvars, 0)
        total = None
        for coeff, rads in self.terms:
            if any(e % r for _, r, e in rads):
                return None
            value = coeff
            for f, r, e in rads:
                value = value * f ** (e // r)
            total = value if total is None else total + value
        return total

    def __neg__(self):
        return FormalSection(self.nvars, [(-c, rads) for c, rads in self.terms])

    def __add__(self, other):
        assert self.nvars == other.nvars
        return FormalSection(self.nvars, list(self.terms) + list(other.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = []
        for c1, r1 in self.terms:
            for c2, r2 in other.terms:
                out.append((c1 * c2, r1 + r2))
        return FormalSection(self.nvars, out)

    def __truediv__(self, other):
        if other.is_zero():
            raise SectionError("division by zero")
        if len(other.terms) != 1:
            raise SectionError("cannot divide by a sum of radicals")
        coeff, rads = other.terms[0]
        inv = (coeff.inverse(), tuple((f, r, -e) for f, r, e in rads))
        return self * FormalSection(self.nvars, [inv])

    def __pow__(self, n):
        assert isinstance(n, int)
        if n < 0:
            one = FormalSection.from_section(
                RationalSection.from_constant(self.nvars, 1)
            )
            return one / self**-n
        out = FormalSection.from_section(RationalSection.from_constant(self.nvars, 1))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def root(self, r):
        """Formal r-th root; the term must be a single radical monomial."""
        assert isinstance(r, int) and r >= 1
        if self.is_zero():
            return self
        if len(self.terms) != 1:
            raise SectionError("radicand must be a single term")
        coeff, rads = self.terms[0]
        if coeff.is_zero():
            return self
        # collapse the term to one radicand before re-rooting
        R = 1
        for _, rr, _ in rads:
            R = R * rr // int_gcd(R, rr)
        radicand = coeff**R
        for f, rr, e in rads:
            radicand = radicand * f ** (e * (R // rr))
        one = RationalSection.from_constant(self.nvars, 1)
        return FormalSection(self.nvars, [(one, ((radicand, R * r, 1),))])

    def radical_inputs(self):
        """Distinct (radicand, root) pairs appearing in any term, in a stable order."""
        seen = {}
        for _, rads in self.terms:
            for f, r, _ in rads:
                seen.setdefault((f, r), None)
        return sorted(seen, key=lambda fr: (_section_key(fr[0]), fr[1]))

    def to_radical_section(self, ring, canonical):
        """Rewrite on the ring's distinguished radicals.

        canonical maps (radicand, root) to the canonical RadicalSection of its
        formal root, as produced by build_map_ring.
        """
        total = ring.embed(0)
        for coeff, rads in self.terms:
            term = ring.embed(coeff)
            for f, r, e in rads:
                term = term * canonical[(f, r)] ** e
            total = total + term
        return total


def _radical_key(entry):
    f, r, _ = entry
    return (_section_key(f), r)


def _section_key(s):
    return (
        sorted(s.num.terms.items()),
        sorted(s.den.terms.items()),
    )


def ast_to_formal(node, names):
    """Evaluate a parsed expression allowing root(f, r) calls."""
    from .poly import ast_to_section

    nvars = len(names)

    def walk(n):
        op = n[0]
        if op == "call":
            name, args, pos = n[1], n[2], n[3]
            if name != "root":
                raise ExprError("unknown function %r" % name, pos)
            if len(args) != 2:
                raise ExprError("root takes a radicand and a root index", pos)
            idx = args[1]
            if idx[0] != "num" or idx[1].denominator != 1 or idx[1] <= 0:
                raise ExprError("root index must be a positive integer", pos)
            return walk(args[0]).root(int(idx[1]))
        if op == "neg":
            return -walk(n[1])
        if op == "add":
            return walk(n[1]) + walk(n[2])
        if op == "sub":
            return walk(n[1]) - walk(n[2])
        if op == "mul":
            return walk(n[1]) * walk(n[2])
        if op == "div":
            try:
                return walk(n[1]) / walk(n[2])
            except SectionError as e:
                raise ExprError(str(e), 0)
        if op == "pow":
            return walk(n[1]) ** n[2]
        # leaves never contain radicals; reuse the plain evaluator
        return FormalSection.from_section(ast_to_section(n, names))

    return walk(node)


def parse_formal(text, names):
    return ast_to_formal(parse_expression(text), names)
