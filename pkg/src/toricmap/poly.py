"""Sparse multivariate polynomials and rational sections over Q.

Everything here is exact: coefficients are fractions.Fraction, monomials are
integer exponent tuples.  No floating point anywhere.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

Monomial = tuple  # tuple[int, ...]


def _monomial_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _monomial_div(a, b):
    """Divide monomial a by b, or return None if not divisible."""
    out = tuple(x - y for x, y in zip(a, b))
    if any(e < 0 for e in out):
        return None
    return out


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("nvars", "terms", "_key")

    def __init__(self, nvars, terms):
        assert nvars >= 0, "variable count must be nonnegative"
        clean = {}
        for mono, coef in terms.items():
            assert len(mono) == nvars, "monomial arity mismatch"
            if not isinstance(coef, Fraction):
                coef = Fraction(coef)
            if coef != 0:
                clean[tuple(mono)] = coef
        self.nvars = nvars
        self.terms = clean
        self._key = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars):
        return Polynomial(nvars, {})

    @staticmethod
    def constant(nvars, c):
        return Polynomial(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def variable(nvars, i):
        assert 0 <= i < nvars, "variable index out of range"
        mono = tuple(1 if j == i else 0 for j in range(nvars))
        return Polynomial(nvars, {mono: Fraction(1)})

    @staticmethod
    def monomial(nvars, expo, coef=1):
        return Polynomial(nvars, {tuple(expo): Fraction(coef)})

    # -- basic structure ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(all(e == 0 for e in m) for m in self.terms)

    def constant_value(self):
        assert self.is_constant(), "not a constant"
        if not self.terms:
            return Fraction(0)
        return next(iter(self.terms.values()))

    def variables(self):
        """Return the sorted indices of variables actually present."""
        seen = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    seen.add(i)
        return sorted(seen)

    def degree_in(self, i):
        if not self.terms:
            return -1
        return max(m[i] for m in self.terms)

    def total_degree(self):
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def _frozen(self):
        if self._key is None:
            self._key = tuple(sorted(self.terms.items()))
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self._frozen()))

    def __repr__(self):
        return "Polynomial(%r)" % (poly_to_str(self),)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Polynomial(self.nvars, out)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return Polynomial(self.nvars, {m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Polynomial(self.nvars, {m: c * v for m, v in self.terms.items()})
        assert isinstance(other, Polynomial) and other.nvars == self.nvars
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _monomial_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        assert isinstance(n, int) and n >= 0, "polynomial powers are nonnegative ints"
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.nvars, other)
        assert isinstance(other, Polynomial) and other.nvars == self.nvars
        return other

    def derivative(self, i):
        out = {}
        for m, c in self.terms.items():
            if m[i] == 0:
                continue
            mm = list(m)
            mm[i] -= 1
            mm = tuple(mm)
            out[mm] = out.get(mm, Fraction(0)) + c * m[i]
        return Polynomial(self.nvars, out)

    def evaluate(self, point):
        """Evaluate at a point; scalars may be Fractions or any exact ring."""
        assert len(point) == self.nvars, "point arity mismatch"
        acc = Fraction(0)
        for m, c in self.terms.items():
            term = c
            for i, e in enumerate(m):
                if e:
                    term = term * point[i] ** e
            acc = acc + term
        return acc

    # -- leading terms and exact division -----------------------------------

    def lex_leading(self):
        """Return (monomial, coefficient) largest in lex order."""
        assert self.terms, "zero polynomial has no leading term"
        m = max(self.terms)
        return m, self.terms[m]

    def exact_div(self, g):
        """Return self / g, raising ArithmeticError if not exactly divisible."""
        g = self._coerce(g)
        assert not g.is_zero(), "division by zero polynomial"
        if self.is_zero():
            return self
        if g.is_constant():
            return self * (Fraction(1) / g.constant_value())
        rem = dict(self.terms)
        gm, gc = g.lex_leading()
        quo = {}
        while rem:
            m = max(rem)
            c = rem[m]
            qm = _monomial_div(m, gm)
            if qm is None:
                raise ArithmeticError("not divisible")
            qc = c / gc
            quo[qm] = quo.get(qm, Fraction(0)) + qc
            for m2, c2 in g.terms.items():
                mm = _monomial_mul(qm, m2)
                nc = rem.get(mm, Fraction(0)) - qc * c2
                if nc == 0:
                    rem.pop(mm, None)
                else:
                    rem[mm] = nc
        return Polynomial(self.nvars, quo)

    def divides(self, f):
        """Return True if self divides f exactly."""
        try:
            f.exact_div(self)
            return True
        except ArithmeticError:
            return False

    # -- normalization -------------------------------------------------------

    def normalized_with_unit(self):
        """Return (u, p) with p = u*self, integer coprime coefficients and the
        lex-largest term positive."""
        assert not self.is_zero(), "cannot normalize zero"
        den_lcm = 1
        num_gcd = 0
        for c in self.terms.values():
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
            num_gcd = math.gcd(num_gcd, c.numerator)
        u = Fraction(den_lcm, num_gcd)
        if self.terms[max(self.terms)] < 0:
            u = -u
        return u, self * u

    def normalized(self):
        return self.normalized_with_unit()[1]


# -- univariate-in-one-variable views ---------------------------------------


def _coeffs_in(p, k):
    """Return dict degree -> coefficient Polynomial (x_k removed from monomials)."""
    out = {}
    for m, c in p.terms.items():
        d = m[k]
        mm = list(m)
        mm[k] = 0
        mm = tuple(mm)
        bucket = out.setdefault(d, {})
        bucket[mm] = bucket.get(mm, Fraction(0)) + c
    return {d: Polynomial(p.nvars, t) for d, t in out.items() if any(v != 0 for v in t.values())}


def _from_coeffs(nvars, k, coeffs):
    out = {}
    for d, poly in coeffs.items():
        for m, c in poly.terms.items():
            mm = list(m)
            mm[k] += d
            out[tuple(mm)] = c
    return Polynomial(nvars, out)


def _lead_coeff_in(p, k):
    d = p.degree_in(k)
    return _coeffs_in(p, k).get(d, Polynomial.zero(p.nvars)), d


def _pseudo_rem(a, b, k):
    """Pseudo-remainder of a by b in variable k: lc(b)^(da-db+1) * a mod b."""
    lb, db = _lead_coeff_in(b, k)
    da = a.degree_in(k)
    assert db >= 0 and da >= db, "pseudo-remainder needs deg a >= deg b"
    steps = 0
    r = a
    while not r.is_zero() and r.degree_in(k) >= db:
        dr = r.degree_in(k)
        lr = _coeffs_in(r, k)[dr]
        shift = Polynomial.monomial(a.nvars, tuple(dr - db if i == k else 0 for i in range(a.nvars)))
        r = r * lb - lr * shift * b
        steps += 1
    for _ in range(da - db + 1 - steps):
        r = r * lb
    return r


def _content_in(p, k):
    """Content of p viewed in variable k: gcd of the coefficient polynomials."""
    c = Polynomial.zero(p.nvars)
    for coeff in _coeffs_in(p, k).values():
        c = gcd(c, coeff)
        if c.is_constant() and not c.is_zero():
            break
    return c


def gcd(f, g):
    """GCD over Q via primitive subresultant remainder sequences.

    Result is normalized (integer coprime coefficients, positive leading term);
    the gcd of nonzero constants is 1.
    """
    assert isinstance(f, Polynomial) and isinstance(g, Polynomial)
    assert f.nvars == g.nvars, "mixed ambient rings"
    if f.is_zero():
        return g if g.is_zero() else g.normalized()
    if g.is_zero():
        return f.normalized()
    if f.is_constant() or g.is_constant():
        return Polynomial.constant(f.nvars, 1)
    # main variable: lowest index with positive degree in both
    common = sorted(set(f.variables()) & set(g.variables()))
    if not common:
        return Polynomial.constant(f.nvars, 1)
    k = common[0]
    cf = _content_in(f, k)
    cg = _content_in(g, k)
    a = f.exact_div(cf)
    b = g.exact_div(cg)
    cont = gcd(cf, cg)
    if a.degree_in(k) < b.degree_in(k):
        a, b = b, a
    one = Polynomial.constant(f.nvars, 1)
    gg, h = one, one
    while True:
        delta = a.degree_in(k) - b.degree_in(k)
        r = _pseudo_rem(a, b, k)
        if r.is_zero():
            break
        if b.degree_in(k) == 0:
            # remainder sequence bottomed out in the coefficient ring
            b = one
            break
        denom = gg
        for _ in range(delta):
            denom = denom * h
        a, b = b, r.exact_div(denom)
        gg, _ = _lead_coeff_in(a, k)
        if delta >= 1:
            hd = gg**delta
            for _ in range(delta - 1):
                hd = hd.exact_div(h)
            h = hd
    if b.degree_in(k) == 0:
        return cont if not cont.is_constant() else Polynomial.constant(f.nvars, 1)
    pp = b.exact_div(_content_in(b, k))
    return (cont * pp).normalized()


def lcm(f, g):
    if f.is_zero() or g.is_zero():
        return Polynomial.zero(f.nvars)
    return f.exact_div(gcd(f, g)) * g


def squarefree_part(f):
    """Square-free part f / gcd(f, df/dx_i) iterated over the variables."""
    assert not f.is_zero(), "square-free part of zero"
    if f.is_constant():
        return Polynomial.constant(f.nvars, 1)
    d = f
    for i in f.variables():
        d = gcd(d, f.derivative(i))
        if d.is_constant():
            break
    return f.exact_div(d).normalized()


def order_along(f, q):
    """Vanishing order of the section q along the divisor of f.

    f must be a nonconstant polynomial with no repeated factor shared with
    itself; q is a Polynomial or RationalSection.
    """
    assert isinstance(f, Polynomial) and not f.is_constant(), "order along a constant"
    if isinstance(q, RationalSection):
        return order_along(f, q.num) - order_along(f, q.den)
    assert isinstance(q, Polynomial)
    assert not q.is_zero(), "zero section has no finite order"
    n = 0
    t = q
    while True:
        try:
            t = t.exact_div(f)
        except ArithmeticError:
            return n
        n += 1


def coprime_refinement(fs):
    """Refine polynomials into a square-free pairwise-coprime basis.

    Returns (basis, exponents): basis is a sorted list of normalized nonconstant
    square-free pairwise coprime polynomials, exponents[i][j] is the
    multiplicity of basis[j] in fs[i], and each input factors as a constant
    times the product of basis powers.
    """
    pieces = []
    for f in fs:
        assert isinstance(f, Polynomial) and not f.is_zero(), "refinement needs nonzero inputs"
        # peel square-free layers so factors of unequal multiplicity still split
        t = f
        while not t.is_constant():
            s = squarefree_part(t)
            for part in _strip_monomial(s):
                pieces.append(part)
            t = t.exact_div(s)
    basis = []
    queue = list(pieces)
    while queue:
        p = queue.pop()
        if p.is_constant():
            continue
        i = 0
        while i < len(basis) and not p.is_constant():
            b = basis[i]
            g = gcd(p, b)
            if g.is_constant():
                i += 1
                continue
            # split b into g and the complementary factor, keep reducing p
            basis.pop(i)
            rest = b.exact_div(g)
            queue.append(g)
            if not rest.is_constant():
                queue.append(rest.normalized())
            p = p.exact_div(g)
        if not p.is_constant():
            basis.append(p.normalized())
    refined = []
    for b in basis:
        refined.extend(_split_rational_roots(b))
    refined = sorted(set(refined), key=_poly_sort_key)
    exps = []
    for f in fs:
        row = []
        t = f
        for b in refined:
            e = 0
            while True:
                try:
                    t = t.exact_div(b)
                except ArithmeticError:
                    break
                e += 1
            row.append(e)
        assert t.is_constant(), "refinement failed to exhaust an input"
        exps.append(row)
    return refined, exps


def _strip_monomial(f):
    """Split f into variable factors and the monomial-free remainder."""
    parts = []
    t = f
    for i in f.variables():
        x = Polynomial.variable(f.nvars, i)
        present = True
        while present:
            try:
                t2 = t.exact_div(x)
            except ArithmeticError:
                present = False
                continue
            if x not in parts:
                parts.append(x)
            t = t2
    if not t.is_constant():
        parts.append(t.normalized())
    return parts


def _split_rational_roots(b):
    """Split a square-free univariate basis entry by its rational roots."""
    vs = b.variables()
    if len(vs) != 1 or b.total_degree() <= 1:
        return [b]
    k = vs[0]
    coeffs = _coeffs_in(b, k)
    c0 = coeffs.get(0)
    if c0 is None:
        return [b]  # monomial factor already stripped
    lead = coeffs[b.degree_in(k)]
    out = []
    t = b
    for p in _divisors(abs(c0.constant_value().numerator * c0.constant_value().denominator)):
        for q in _divisors(abs(lead.constant_value().numerator * lead.constant_value().denominator)):
            for sign in (1, -1):
                root = Fraction(sign * p, q)
                lin = Polynomial.variable(b.nvars, k) - Polynomial.constant(b.nvars, root)
                if t.degree_in(k) >= 1 and lin.divides(t):
                    out.append(lin.normalized())
                    t = t.exact_div(lin)
    if not t.is_constant():
        out.append(t.normalized())
    return out if out else [b]


def _divisors(n):
    if n == 0:
        return [1]
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _poly_sort_key(p):
    monos = [tuple(-e for e in m) for m in sorted(p.terms, reverse=True)]
    return (p.total_degree(), monos, poly_to_str(p))


# -- gradings ----------------------------------------------------------------


@dataclass(frozen=True)
class Grading:
    """Degree data: integer free rows plus torsion rows with their orders."""

    nvars: int
    free_rows: tuple
    torsion: tuple  # tuple of (order, row)

    def __post_init__(self):
        object.__setattr__(
            self, "free_rows", tuple(tuple(int(a) for a in row) for row in self.free_rows)
        )
        object.__setattr__(
            self,
            "torsion",
            tuple((int(o), tuple(int(a) for a in row)) for o, row in self.torsion),
        )
        for row in self.free_rows:
            assert len(row) == self.nvars, "free grading row arity mismatch"
        for order, row in self.torsion:
            assert order >= 2 and len(row) == self.nvars, "bad torsion row"

    @staticmethod
    def trivial(nvars):
        return Grading(nvars, (), ())

    def torsion_orders(self):
        return tuple(order for order, _ in self.torsion)

    def monomial_degree(self, mono):
        free = tuple(Fraction(sum(w * e for w, e in zip(row, mono))) for row in self.free_rows)
        tors = tuple(
            Fraction(sum(w * e for w, e in zip(row, mono))) % order for order, row in self.torsion
        )
        return DegreeVector(free, tors, self.torsion_orders())

    def zero_degree(self):
        return DegreeVector(
            tuple(Fraction(0) for _ in self.free_rows),
            tuple(Fraction(0) for _ in self.torsion),
            self.torsion_orders(),
        )


@dataclass(frozen=True)
class DegreeVector:
    """A multidegree: rational free part plus residues modulo torsion orders."""

    free: tuple
    torsion: tuple
    torsion_orders: tuple

    def __add__(self, other):
        assert self.torsion_orders == other.torsion_orders, "mixed gradings"
        return DegreeVector(
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple((a + b) % m for a, b, m in zip(self.torsion, other.torsion, self.torsion_orders)),
            self.torsion_orders,
        )

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return DegreeVector(
            tuple(a * c for a in self.free),
            tuple((a * c) % m for a, m in zip(self.torsion, self.torsion_orders)),
            self.torsion_orders,
        )

    def is_zero(self):
        return all(a == 0 for a in self.free) and all(a == 0 for a in self.torsion)

    def sort_key(self):
        return (self.free, self.torsion)


def degree_of(f, grading):
    """Degree of f, or None if f is inhomogeneous; zero polynomial has every
    degree and reports the zero vector."""
    assert isinstance(f, Polynomial) and f.nvars == grading.nvars
    deg = None
    for mono in f.terms:
        d = grading.monomial_degree(mono)
        if deg is None:
            deg = d
        elif deg != d:
            return None
    return deg if deg is not None else grading.zero_degree()


def homogeneous_components(f, grading):
    """Split f into its homogeneous pieces, sorted by degree."""
    buckets = {}
    for mono, coef in f.terms.items():
        d = grading.monomial_degree(mono)
        buckets.setdefault(d, {})[mono] = coef
    out = [(d, Polynomial(f.nvars, t)) for d, t in buckets.items()]
    out.sort(key=lambda pair: pair[0].sort_key())
    return out


# -- rational sections --------------------------------------------------------


class RationalSection:
    """A reduced fraction of polynomials with a canonical denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = Polynomial.constant(num.nvars, 1)
        assert isinstance(num, Polynomial) and isinstance(den, Polynomial)
        assert num.nvars == den.nvars, "mixed ambient rings"
        assert not den.is_zero(), "zero denominator"
        if num.is_zero():
            den = Polynomial.constant(num.nvars, 1)
        else:
            g = gcd(num, den)
            if not g.is_constant():
                num = num.exact_div(g)
                den = den.exact_div(g)
            u, den = den.normalized_with_unit()
            num = num * u
        self.num = num
        self.den = den

    @staticmethod
    def from_constant(nvars, c):
        return RationalSection(Polynomial.constant(nvars, c))

    @staticmethod
    def from_polynomial(p):
        return RationalSection(p)

    @property
    def nvars(self):
        return self.num.nvars

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant()

    def as_polynomial(self):
        assert self.is_polynomial(), "section has a nontrivial denominator"
        return self.num * (Fraction(1) / self.den.constant_value())

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        return self.num.constant_value() / self.den.constant_value()

    def __eq__(self, other):
        if not isinstance(other, RationalSection):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return "RationalSection(%r)" % (section_to_str(self),)

    def __add__(self, other):
        other = self._coerce(other)
        return RationalSection(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return RationalSection(-self.num, self.den)

    def __mul__(self, other):
        other = self._coerce(other)
        return RationalSection(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        assert not other.is_zero(), "division by the zero section"
        return RationalSection(self.num * other.den, self.den * other.num)

    def __pow__(self, n):
        assert isinstance(n, int)
        if n >= 0:
            return RationalSection(self.num**n, self.den**n)
        assert not self.is_zero(), "negative power of zero"
        return RationalSection(self.den ** (-n), self.num ** (-n))

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return RationalSection(other)
        if isinstance(other, (int, Fraction)):
            return RationalSection.from_constant(self.nvars, other)
        assert isinstance(other, RationalSection) and other.nvars == self.nvars
        return other

    def inverse(self):
        return self**-1

    def degree_of(self, grading):
        dn = degree_of(self.num, grading)
        dd = degree_of(self.den, grading)
        if dn is None or dd is None:
            return None
        return dn - dd

    def evaluate(self, point):
        d = self.den.evaluate(point)
        assert d != 0, "denominator vanishes at the point"
        return self.num.evaluate(point) / d


# -- printing ------------------------------------------------------------------


def default_names(nvars, stem="x"):
    return ["%s%d" % (stem, i + 1) for i in range(nvars)]


def poly_to_str(p, names=None):
    """Render a polynomial; terms in graded-lex descending order."""
    if names is None:
        names = default_names(p.nvars)
    if p.is_zero():
        return "0"
    items = sorted(p.terms.items(), key=lambda mc: (sum(mc[0]), mc[0]), reverse=True)
    chunks = []
    for i, (mono, coef) in enumerate(items):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        factors = []
        for j, e in enumerate(mono):
            if e == 1:
                factors.append(names[j])
            elif e > 1:
                factors.append("%s^%d" % (names[j], e))
        if not factors:
            body = _fraction_str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_fraction_str(mag)] + factors)
        if i == 0:
            chunks.append(body if sign == "+" else "-" + body)
        else:
            chunks.append(" %s %s" % (sign, body))
    return "".join(chunks)


def _fraction_str(q):
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def section_to_str(s, names=None):
    num = poly_to_str(s.num, names)
    if s.den.is_constant() and s.den.constant_value() == 1:
        return num
    den = poly_to_str(s.den, names)
    if len(s.num.terms) > 1:
        num = "(%s)" % num
    if len(s.den.terms) > 1:
        den = "(%s)" % den
    return "%s/%s" % (num, den)


# -- expression parsing ---------------------------------------------------------


class ExprError(ValueError):
    """Parse error with a character offset into the source."""

    def __init__(self, message, pos):
        super().__init__(message)
        self.message = message
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^(),\[\]{};=:<>]))"
)


def tokenize(text):
    """Tokenize into (kind, value, pos) triples; kinds: num, name, op, end."""
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ExprError("unexpected character %r" % stripped[0], len(text) - len(stripped))
        if m.lastgroup == "num":
            out.append(("num", int(m.group("num")), m.start("num")))
        elif m.lastgroup == "name":
            out.append(("name", m.group("name"), m.start("name")))
        else:
            op = m.group("op")
            out.append(("op", "^" if op == "**" else op, m.start("op")))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _ExprParser:
    """Recursive-descent parser for +, -, *, /, ^, parentheses, calls."""

    def __init__(self, tokens, start=0):
        self.tokens = tokens
        self.i = start

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise ExprError("expected %r" % op, pos)

    def parse_expr(self):
        node = self.parse_term()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                rhs = self.parse_term()
                node = (("add" if val == "+" else "sub"), node, rhs)
            else:
                return node

    def parse_term(self):
        node = self.parse_power()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                rhs = self.parse_power()
                node = (("mul" if val == "*" else "div"), node, rhs)
            else:
                return node

    def parse_power(self):
        node = self.parse_atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.next()
            kind2, val2, pos2 = self.peek()
            neg = False
            if kind2 == "op" and val2 == "-":
                self.next()
                neg = True
                kind2, val2, pos2 = self.peek()
            if kind2 != "num":
                raise ExprError("exponent must be an integer", pos2)
            self.next()
            return ("pow", node, -val2 if neg else val2)
        return node

    def parse_atom(self):
        kind, val, pos = self.next()
        if kind == "num":
            return ("num", Fraction(val))
        if kind == "op" and val == "-":
            return ("neg", self.parse_power())
        if kind == "op" and val == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        if kind == "name":
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "(":
                self.next()
                args = [self.parse_expr()]
                while True:
                    k3, v3, p3 = self.next()
                    if k3 == "op" and v3 == ",":
                        args.append(self.parse_expr())
                    elif k3 == "op" and v3 == ")":
                        break
                    else:
                        raise ExprError("expected ',' or ')'", p3)
                return ("call", val, args, pos)
            return ("var", val, pos)
        raise ExprError("unexpected token", pos)


def parse_expression(text):
    """Parse an expression string into an AST."""
    parser = _ExprParser(tokenize(text))
    node = parser.parse_expr()
    kind, _, pos = parser.peek()
    if kind != "end":
        raise ExprError("trailing input", pos)
    return node


def parse_embedded_expression(tokens, start):
    """Parse one expression out of a larger token stream.

    Returns (ast, stop) where stop indexes the first token after the
    expression; token positions flow into the AST unchanged."""
    parser = _ExprParser(tokens, start)
    node = parser.parse_expr()
    return node, parser.i


def ast_to_section(node, names):
    """Evaluate an AST to a RationalSection; root() calls are rejected."""
    index = {n: i for i, n in enumerate(names)}
    nvars = len(names)

    def walk(n):
        op = n[0]
        if op == "num":
            return RationalSection.from_constant(nvars, n[1])
        if op == "var":
            if n[1] not in index:
                raise ExprError("unknown variable %r" % n[1], n[2])
            return RationalSection(Polynomial.variable(nvars, index[n[1]]))
        if op == "neg":
            return -walk(n[1])
        if op == "add":
            return walk(n[1]) + walk(n[2])
        if op == "sub":
            return walk(n[1]) - walk(n[2])
        if op == "mul":
            return walk(n[1]) * walk(n[2])
        if op == "div":
            d = walk(n[2])
            if d.is_zero():
                raise ExprError("division by zero", 0)
            return walk(n[1]) / d
        if op == "pow":
            return walk(n[1]) ** n[2]
        if op == "call":
            raise ExprError("function %r not allowed here" % n[1], n[3])
        raise AssertionError("unknown AST node %r" % (op,))

    return walk(node)


def parse_section(text, names):
    return ast_to_section(parse_expression(text), names)


def parse_polynomial(text, names=None):
    """Parse a polynomial in the printed syntax; round-trips poly_to_str."""
    if names is None:
        m = 0
        for kind, val, _ in tokenize(text):
            if kind == "name" and re.fullmatch(r"x\d+", val):
                m = max(m, int(val[1:]))
        names = default_names(m)
    s = parse_section(text, names)
    if not s.is_polynomial():
        raise ExprError("expression is not polynomial", 0)
    return s.as_polynomial()
