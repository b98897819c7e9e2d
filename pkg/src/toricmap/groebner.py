"""Buchberger engine over Q: reduced bases, elimination, saturation,
ideal intersection, membership, and largest homogeneous subideals.

Monomial orders are small value objects with a key() method; larger key
means larger monomial. Everything is exact (Fraction coefficients) and
deterministic: the reduced basis is the order-canonical one, monic and
sorted by leading monomial.
"""

from __future__ import annotations

import contextvars
import time
from dataclasses import dataclass
from fractions import Fraction

from .poly import Polynomial, degree_of

_deadline = contextvars.ContextVar("toricmap_deadline", default=None)


class DeadlineExceeded(RuntimeError):
    pass


def set_deadline(seconds_from_now):
    """Install a cooperative wall-clock deadline; None clears it."""
    if seconds_from_now is None:
        _deadline.set(None)
    else:
        _deadline.set(time.monotonic() + seconds_from_now)


def _check_deadline():
    limit = _deadline.get()
    if limit is not None and time.monotonic() > limit:
        raise DeadlineExceeded("computation exceeded the configured deadline")


# -- monomial orders -------------------------------------------------------------


def _drl_key(exps):
    return (sum(exps), tuple(-e for e in reversed(exps)))


@dataclass(frozen=True)
class MonomialOrder:
    kind: str
    data: tuple = ()

    @staticmethod
    def lex():
        return MonomialOrder("lex")

    @staticmethod
    def degrevlex():
        return MonomialOrder("degrevlex")

    @staticmethod
    def elimination(eliminated):
        # eliminated variables are compared first, so they cannot hide in
        # trailing positions of a basis element free of them
        return MonomialOrder("elimination-block", tuple(sorted(eliminated)))

    @staticmethod
    def weighted(weights):
        return MonomialOrder("weighted", tuple(weights))

    def key(self, mono):
        if self.kind == "lex":
            return mono
        if self.kind == "degrevlex":
            return _drl_key(mono)
        if self.kind == "elimination-block":
            block = set(self.data)
            first = tuple(e for i, e in enumerate(mono) if i in block)
            rest = tuple(e for i, e in enumerate(mono) if i not in block)
            return (_drl_key(first), _drl_key(rest))
        if self.kind == "weighted":
            w = sum(a * e for a, e in zip(self.data, mono))
            return (w, _drl_key(mono))
        raise ValueError("unknown order kind %r" % self.kind)


def leading_term(f, order):
    mono = max(f.terms, key=order.key)
    return mono, f.terms[mono]


def _mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _mono_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _mono_deg(a):
    return sum(a)


# -- division and Buchberger ------------------------------------------------------


def normal_form(f, basis, order):
    """Full remainder of f on division by the basis."""
    if f.is_zero():
        return f
    lms = [leading_term(g, order) for g in basis]
    remainder = {}
    p = dict(f.terms)
    while p:
        mono = max(p, key=order.key)
        coeff = p[mono]
        for g, (lm, lc) in zip(basis, lms):
            if _mono_divides(lm, mono):
                shift = _mono_sub(mono, lm)
                factor = coeff / lc
                for gm, gc in g.terms.items():
                    key = tuple(a + b for a, b in zip(gm, shift))
                    val = p.get(key, Fraction(0)) - factor * gc
                    if val:
                        p[key] = val
                    else:
                        p.pop(key, None)
                break
        else:
            remainder[mono] = coeff
            del p[mono]
    return Polynomial(f.nvars, remainder)


def _spoly(f, g, order):
    lmf, lcf = leading_term(f, order)
    lmg, lcg = leading_term(g, order)
    l = _mono_lcm(lmf, lmg)
    a = Polynomial.monomial(f.nvars, _mono_sub(l, lmf), 1 / lcf)
    b = Polynomial.monomial(g.nvars, _mono_sub(l, lmg), 1 / lcg)
    return a * f - b * g


def _update_pairs(G, lms, sugars, pairs, t, order):
    """Gebauer-Moeller pair update after appending generator index t."""
    lmt = lms[t]
    lcms = [_mono_lcm(lms[i], lmt) for i in range(t)]
    fresh = []
    for i in range(t):
        coprime = lcms[i] == tuple(a + b for a, b in zip(lms[i], lmt))
        dominated = any(
            j != i and _mono_divides(lcms[j], lcms[i]) and lcms[j] != lcms[i]
            for j in range(t)
        )
        if dominated and not coprime:
            continue
        if coprime:
            continue  # product criterion
        sugar = max(
            sugars[i] + _mono_deg(_mono_sub(lcms[i], lms[i])),
            sugars[t] + _mono_deg(_mono_sub(lcms[i], lmt)),
        )
        fresh.append((sugar, order.key(lcms[i]), i, t))
    survivors = []
    for (sugar, key, i, j) in pairs:
        lcm_ij = _mono_lcm(lms[i], lms[j])
        if (
            _mono_divides(lmt, lcm_ij)
            and _mono_lcm(lms[i], lmt) != lcm_ij
            and _mono_lcm(lms[j], lmt) != lcm_ij
        ):
            continue  # chain criterion
        survivors.append((sugar, key, i, j))
    survivors.extend(fresh)
    return survivors


def _sugared_normal_form(f, sugar, G, lms, sugars, order):
    if f.is_zero():
        return f, sugar
    remainder = {}
    p = dict(f.terms)
    while p:
        _check_deadline()
        mono = max(p, key=order.key)
        coeff = p[mono]
        hit = None
        for idx, lm in enumerate(lms):
            if _mono_divides(lm[0], mono):
                hit = idx
                break
        if hit is None:
            remainder[mono] = coeff
            del p[mono]
            continue
        lm, lc = lms[hit]
        shift = _mono_sub(mono, lm)
        sugar = max(sugar, sugars[hit] + _mono_deg(shift))
        factor = coeff / lc
        for gm, gc in G[hit].terms.items():
            key = tuple(a + b for a, b in zip(gm, shift))
            val = p.get(key, Fraction(0)) - factor * gc
            if val:
                p[key] = val
            else:
                p.pop(key, None)
    return Polynomial(f.nvars, remainder), sugar


def _buchberger(gens, order):
    G, lms, sugars = [], [], []
    pairs = []
    for f in gens:
        if f.is_zero():
            continue
        G.append(f)
        lms.append(leading_term(f, order))
        sugars.append(f.total_degree())
        pairs = _update_pairs(G, [lm for lm, _ in lms], sugars, pairs, len(G) - 1, order)
    while pairs:
        _check_deadline()
        pairs.sort(key=lambda rec: (rec[0], rec[1], rec[2], rec[3]))
        sugar, _, i, j = pairs.pop(0)
        s = _spoly(G[i], G[j], order)
        h, hsugar = _sugared_normal_form(s, sugar, G, lms, sugars, order)
        if h.is_zero():
            continue
        G.append(h)
        lms.append(leading_term(h, order))
        sugars.append(hsugar)
        pairs = _update_pairs(G, [lm for lm, _ in lms], sugars, pairs, len(G) - 1, order)
    return G


def _reduce_basis(G, order):
    if not G:
        return ()
    lms = [leading_term(g, order)[0] for g in G]
    keep = []
    for i, lm in enumerate(lms):
        if any(
            _mono_divides(lms[j], lm) and (lms[j] != lm or j < i)
            for j in range(len(G))
            if j != i
        ):
            continue
        keep.append(i)
    minimal = [G[i] for i in keep]
    reduced = []
    for i, g in enumerate(minimal):
        others = [h for j, h in enumerate(minimal) if j != i]
        r = normal_form(g, others, order) if others else g
        _, lc = leading_term(r, order)
        reduced.append(r * (1 / lc))
    reduced.sort(key=lambda g: order.key(leading_term(g, order)[0]))
    return tuple(reduced)


# -- ideals ------------------------------------------------------------------------


class Ideal:
    """An ideal of Q[x_1..x_n], by generators, with cached reduced bases.

    Equality is mathematical (same ideal), decided through canonical
    degrevlex bases.
    """

    __slots__ = ("nvars", "generators", "_bases")

    def __init__(self, nvars, generators):
        self.nvars = int(nvars)
        gens = []
        for g in generators:
            assert isinstance(g, Polynomial), "ideal generators must be polynomials"
            assert g.nvars == self.nvars, "generator lives in the wrong ring"
            if not g.is_zero():
                gens.append(g)
        self.generators = tuple(gens)
        self._bases = {}

    @staticmethod
    def zero(nvars):
        return Ideal(nvars, [])

    @staticmethod
    def whole_ring(nvars):
        return Ideal(nvars, [Polynomial.constant(nvars, 1)])

    def groebner(self, order=None):
        order = order or MonomialOrder.degrevlex()
        cached = self._bases.get(order)
        if cached is None:
            cached = _reduce_basis(_buchberger(list(self.generators), order), order)
            fresh = dict(self._bases)
            fresh[order] = cached
            self._bases = fresh
        return cached

    def is_zero(self):
        return not self.generators

    def is_whole_ring(self):
        if any(g.is_constant() for g in self.generators):
            return True
        basis = self.groebner()
        return len(basis) == 1 and basis[0].is_constant()

    def contains(self, f):
        assert f.nvars == self.nvars
        return normal_form(f, list(self.groebner()), MonomialOrder.degrevlex()).is_zero()

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if self.generators == other.generators:
            return True
        return self.groebner() == other.groebner()

    __hash__ = None

    def __repr__(self):
        return "Ideal(%d, %d gens)" % (self.nvars, len(self.generators))


def groebner_basis(I, order=None):
    return I.groebner(order)


def ideal_membership(f, I):
    return I.contains(f)


def _extend(f, extra):
    terms = {mono + (0,) * extra: c for mono, c in f.terms.items()}
    return Polynomial(f.nvars + extra, terms)


def _restrict(f, nvars):
    terms = {}
    for mono, c in f.terms.items():
        assert all(e == 0 for e in mono[nvars:]), "polynomial not in subring"
        terms[mono[:nvars]] = c
    return Polynomial(nvars, terms)


def eliminate(I, keep_vars):
    """I intersected with Q[kept variables], in the same ambient ring."""
    keep = set(keep_vars)
    elim = [i for i in range(I.nvars) if i not in keep]
    if not elim:
        return Ideal(I.nvars, I.generators)
    order = MonomialOrder.elimination(elim)
    basis = I.groebner(order)
    kept = [g for g in basis if all(i in keep for i in g.variables())]
    return Ideal(I.nvars, kept)


def saturate_at_poly(I, f):
    """(I : f^infinity) through the Rabinowitsch-style auxiliary variable."""
    if f.is_zero():
        return Ideal(I.nvars, I.generators)
    if f.is_constant():
        return Ideal(I.nvars, I.generators)
    n = I.nvars
    t = Polynomial.variable(n + 1, n)
    gens = [_extend(g, 1) for g in I.generators]
    gens.append(Polynomial.constant(n + 1, 1) - t * _extend(f, 1))
    J = eliminate(Ideal(n + 1, gens), range(n))
    return Ideal(n, [_restrict(g, n) for g in J.generators])


def saturate(I, J):
    """(I : J^infinity), as the intersection of the single-poly saturations."""
    assert not J.is_zero(), "cannot saturate at the zero ideal"
    out = None
    for f in J.generators:
        S = saturate_at_poly(I, f)
        out = S if out is None else intersect(out, S)
    return out if out is not None else Ideal(I.nvars, I.generators)


def intersect(I, J):
    assert I.nvars == J.nvars
    if I.is_zero() or J.is_zero():
        return Ideal.zero(I.nvars)
    n = I.nvars
    t = Polynomial.variable(n + 1, n)
    one = Polynomial.constant(n + 1, 1)
    gens = [t * _extend(g, 1) for g in I.generators]
    gens += [(one - t) * _extend(g, 1) for g in J.generators]
    K = eliminate(Ideal(n + 1, gens), range(n))
    return Ideal(n, [_restrict(g, n) for g in K.generators])


# -- largest homogeneous subideal ---------------------------------------------------


def homogeneous_part(I, grading):
    """The largest ideal inside I generated by grading-homogeneous elements.

    One scaling variable per free grading row (twist, clear, saturate at the
    product), one variable of finite order per torsion row (twist and impose
    u^m = 1); eliminating the auxiliary variables intersects the twists of I
    over the entire group.
    """
    assert grading.nvars == I.nvars
    if I.is_zero():
        return Ideal(I.nvars, ())
    if all(degree_of(g, grading) is not None for g in I.generators):
        return Ideal(I.nvars, I.generators)
    n = I.nvars
    free = [tuple(row) for row in grading.free_rows]
    torsion = [(m, tuple(row)) for m, row in grading.torsion]
    aux = len(free) + len(torsion)
    ext = n + aux

    def twist(g):
        rows = {}
        shifts = [None] * len(free)
        for mono in g.terms:
            for r, w in enumerate(free):
                a = sum(e * wi for e, wi in zip(mono, w))
                if shifts[r] is None or a < shifts[r]:
                    shifts[r] = a
        for mono, c in g.terms.items():
            exps = []
            for r, w in enumerate(free):
                exps.append(sum(e * wi for e, wi in zip(mono, w)) - shifts[r])
            for m, w in torsion:
                exps.append(sum(e * (wi % m) for e, wi in zip(mono, w)) % m)
            rows[mono + tuple(exps)] = c
        return Polynomial(ext, rows)

    gens = [twist(g) for g in I.generators]
    for k, (m, _) in enumerate(torsion):
        u = Polynomial.variable(ext, n + len(free) + k)
        gens.append(u**m - Polynomial.constant(ext, 1))
    J = Ideal(ext, gens)
    if free:
        s_product = Polynomial.constant(ext, 1)
        for r in range(len(free)):
            s_product = s_product * Polynomial.variable(ext, n + r)
        J = saturate_at_poly(J, s_product)
    K = eliminate(J, range(n))
    out = [_restrict(g, n) for g in K.generators]
    for g in out:
        assert degree_of(g, grading) is not None, "inhomogeneous output"
    return Ideal(n, out)
