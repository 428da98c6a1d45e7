"""Mechanical replay of the inductive proofs behind the registered identities.

Each certificate packages one proof's machinery: the summand F_{n,k}, a
parameter shift sigma, the k-independent recurrence coefficients, and (for
the transformation proofs, whose right side is itself a sum of closed forms
G_{n,k}) an anti-difference H_{n,k} whose telescoping collapses the right
side's recurrence.  Three operations expose the machinery as zero-residual
checks; ``inductive_replay`` then re-derives each identity from its base
case by propagating the recurrence over the shift orbit and comparing every
node against direct evaluation of both sides.

Single-index recurrences come in two shapes:

    order 1:  F_{n,k} = c_keep(n) F_{n-1,k} + c_move(n) F_{n-1,k-ks}(sigma p)
    order 2:  F_{n,k} = alpha(n) F_{n-1,k} - beta(n) F_{n-2,k}
                        + gamma(n) F_{n-2,k-2}(sigma p)

The multi-index certificate (the C_r sum) replaces the single shifted term
with a 2^r-fold split over s in {0,1}^r with per-s coefficients beta_s and
per-axis shifts x_i -> x_i q^{s_i}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

from .qcore import ParamPoint, PoleError, qbinom, qpoch, qpoch_multi
from . import identities as _ident

TermFn = Callable[[ParamPoint, int, int], Fraction]
CoeffFn = Callable[[ParamPoint, int], Fraction]
ValueFn = Callable[[ParamPoint, int], Fraction]


@dataclass(frozen=True)
class ProofCertificate:
    id: str
    symbols: Tuple[str, ...]
    order: int                      # recurrence depth in n (1 or 2; 0 = multi)
    k_shift: int
    term: TermFn
    shift: Callable[[ParamPoint], ParamPoint]
    rhs_value: ValueFn
    coeffs: Tuple[CoeffFn, ...]
    rhs_term: Optional[TermFn] = None
    anti_diff: Optional[TermFn] = None
    multi: bool = False

    def lhs_value(self, point: ParamPoint, n: int) -> Fraction:
        if self.multi:
            return _schlosser_lhs_value(point, n)
        total = Fraction(0)
        for k in range(n + 1):
            total += self.term(point, n, k)
        return total


def _sym(point: ParamPoint, names: str):
    return tuple(point.sym(s) for s in names)


def _zero_div(num: Fraction, den: Fraction) -> Fraction:
    if den == 0:
        raise PoleError("certificate denominator vanished")
    return num / den


# ---------------------------------------------------------------------------
# balanced very-well-poised summation (four free parameters)
# ---------------------------------------------------------------------------

def jackson_term(p: ParamPoint, n: int, k: int) -> Fraction:
    if k < 0 or k > n:
        return Fraction(0)
    a, b, c, d, q = _sym(p, "abcdq")
    e = a*a*q**(n+1) / (b*c*d)
    num = (1 - a*q**(2*k)) * qpoch_multi([a, b, c, d, e, q**(-n)], q, k) * q**k
    den = (1 - a) * qpoch_multi(
        [q, a*q/b, a*q/c, a*q/d, b*c*d*q**(-n)/a, a*q**(n+1)], q, k)
    return _zero_div(num, den)


def jackson_gamma(p: ParamPoint, n: int) -> Fraction:
    a, b, c, d, q = _sym(p, "abcdq")
    num = ((a*a*q**n/(b*c*d) - q**(-n)) * (1 - b*c*d/a) * (1 - a*q)
           * (1 - a*q*q) * (1 - b) * (1 - c) * (1 - d) * q)
    den = ((1 - b*c*d*q**(-n)/a) * (1 - a*q**n) * (1 - a*q/b) * (1 - a*q/c)
           * (1 - a*q/d) * (1 - b*c*d*q**(1-n)/a) * (1 - a*q**(n+1)))
    return _zero_div(num, den)


def _jackson_rhs_value(p: ParamPoint, n: int) -> Fraction:
    a, b, c, d, q = _sym(p, "abcdq")
    return _zero_div(qpoch_multi([a*q, a*q/(b*c), a*q/(b*d), a*q/(c*d)], q, n),
                     qpoch_multi([a*q/b, a*q/c, a*q/d, a*q/(b*c*d)], q, n))


# ---------------------------------------------------------------------------
# q-Whipple transformation (five free parameters)
# ---------------------------------------------------------------------------

def watson_term(p: ParamPoint, n: int, k: int) -> Fraction:
    if k < 0 or k > n:
        return Fraction(0)
    a, b, c, d, e, q = _sym(p, "abcdeq")
    z = a*a*q**(n+2) / (b*c*d*e)
    num = (1 - a*q**(2*k)) * qpoch_multi([a, b, c, d, e, q**(-n)], q, k) * z**k
    den = (1 - a) * qpoch_multi(
        [q, a*q/b, a*q/c, a*q/d, a*q/e, a*q**(n+1)], q, k)
    return _zero_div(num, den)


def watson_beta(p: ParamPoint, n: int) -> Fraction:
    a, b, c, d, e, q = _sym(p, "abcdeq")
    num = -(1 - a*q) * (1 - a*q*q) * (1 - b) * (1 - c) * (1 - d) * (1 - e) \
        * a*a*q**(n+1)
    den = ((1 - a*q/b) * (1 - a*q/c) * (1 - a*q/d) * (1 - a*q/e)
           * (1 - a*q**n) * (1 - a*q**(n+1)) * b*c*d*e)
    return _zero_div(num, den)


def watson_rhs_term(p: ParamPoint, n: int, k: int) -> Fraction:
    if k < 0 or k > n:
        return Fraction(0)
    a, b, c, d, e, q = _sym(p, "abcdeq")
    pre = _zero_div(qpoch_multi([a*q, a*q/(d*e)], q, n),
                    qpoch_multi([a*q/d, a*q/e], q, n))
    num = qpoch_multi([a*q/(b*c), d, e, q**(-n)], q, k) * q**k
    den = qpoch_multi([q, a*q/b, a*q/c, d*e*q**(-n)/a], q, k)
    return pre * _zero_div(num, den)


def watson_anti_diff(p: ParamPoint, n: int, k: int) -> Fraction:
    if k < 0:
        return Fraction(0)
    a, b, c, d, e, q = _sym(p, "abcdeq")
    pre = _zero_div(qpoch(a*q, q, n - 1) * qpoch(a*q/(d*e), q, n),
                    qpoch_multi([a*q/d, a*q/e], q, n))
    num = (qpoch_multi([a*q/(b*c), q**(1-n)], q, k)
           * qpoch_multi([d, e], q, k + 1))
    den = (qpoch_multi([q, a*q/b, a*q/c], q, k)
           * qpoch(d*e*q**(-n)/a, q, k + 1))
    return pre * _zero_div(num, den)


def _watson_rhs_value(p: ParamPoint, n: int) -> Fraction:
    total = Fraction(0)
    for k in range(n + 1):
        total += watson_rhs_term(p, n, k)
    return total


# ---------------------------------------------------------------------------
# two-level very-well-poised transformation (six free parameters)
# ---------------------------------------------------------------------------

def bailey_term(p: ParamPoint, n: int, k: int) -> Fraction:
    if k < 0 or k > n:
        return Fraction(0)
    a, b, c, d, e, f, q = _sym(p, "abcdefq")
    lam = a*a*q / (b*c*d)
    g = lam*a*q**(n+1) / (e*f)
    num = (1 - a*q**(2*k)) \
        * qpoch_multi([a, b, c, d, e, f, g, q**(-n)], q, k) * q**k
    den = (1 - a) * qpoch_multi(
        [q, a*q/b, a*q/c, a*q/d, a*q/e, a*q/f, e*f*q**(-n)/lam, a*q**(n+1)],
        q, k)
    return _zero_div(num, den)


def bailey_alpha(p: ParamPoint, n: int) -> Fraction:
    a, b, c, d, e, f, q = _sym(p, "abcdefq")
    lam = a*a*q / (b*c*d)
    num = (-(1 - b) * (1 - c) * (1 - d) * (1 - e) * (1 - f)
           * (1 - a*q) * (1 - a*q*q) * (1 - e*f/lam) * (1 - lam*a*q**(2*n)/(e*f)))
    den = ((1 - a*q/b) * (1 - a*q/c) * (1 - a*q/d) * (1 - a*q/e) * (1 - a*q/f)
           * (1 - a*q**n) * (1 - a*q**(n+1))
           * (1 - e*f*q**(1-n)/lam) * (1 - e*f*q**(-n)/lam) * q**(n-1))
    return _zero_div(num, den)


def bailey_rhs_term(p: ParamPoint, n: int, k: int) -> Fraction:
    if k < 0 or k > n:
        return Fraction(0)
    a, b, c, d, e, f, q = _sym(p, "abcdefq")
    lam = a*a*q / (b*c*d)
    g = lam*a*q**(n+1) / (e*f)
    pre = _zero_div(qpoch_multi([a*q, a*q/(e*f), lam*q/e, lam*q/f], q, n),
                    qpoch_multi([a*q/e, a*q/f, lam*q/(e*f), lam*q], q, n))
    num = (1 - lam*q**(2*k)) \
        * qpoch_multi([lam, lam*b/a, lam*c/a, lam*d/a, e, f, g, q**(-n)], q, k) \
        * q**k
    den = (1 - lam) * qpoch_multi(
        [q, a*q/b, a*q/c, a*q/d, lam*q/e, lam*q/f, e*f*q**(-n)/a,
         lam*q**(n+1)], q, k)
    return pre * _zero_div(num, den)


def bailey_anti_diff(p: ParamPoint, n: int, k: int) -> Fraction:
    if k < 0:
        return Fraction(0)
    a, b, c, d, e, f, q = _sym(p, "abcdefq")
    lam = a*a*q / (b*c*d)
    g = lam*a*q**(n+1) / (e*f)
    pre = _zero_div(
        (1 - a*lam*q**(2*n)/(e*f))
        * qpoch_multi([a*q, lam*q/e, lam*q/f], q, n - 1)
        * qpoch(a*q/(e*f), q, n),
        qpoch_multi([a*q/e, a*q/f, lam*q/(e*f), lam], q, n))
    num = ((1 - lam*q**k/a)
           * qpoch_multi([lam*b/a, lam*c/a, lam*d/a, g, q**(1-n)], q, k)
           * qpoch_multi([lam, e, f], q, k + 1))
    den = (qpoch_multi([q, a*q/b, a*q/c, a*q/d, lam*q/e, lam*q/f], q, k)
           * qpoch_multi([e*f*q**(-n)/a, lam*q**n], q, k + 1))
    return pre * _zero_div(num, den)


def _bailey_rhs_value(p: ParamPoint, n: int) -> Fraction:
    total = Fraction(0)
    for k in range(n + 1):
        total += bailey_rhs_term(p, n, k)
    return total


# ---------------------------------------------------------------------------
# quadratic transformation (free symbols A = a^2, B = b^2, c)
# ---------------------------------------------------------------------------

def singh_term(p: ParamPoint, n: int, k: int) -> Fraction:
    if k < 0 or k > n:
        return Fraction(0)
    A, B, c, q = _sym(p, "ABcq")
    num = qpoch_multi([A, B, c, q**(-n)], q, k) * q**k
    den = qpoch(q, q, k) * qpoch(A*B*q, q*q, k) * qpoch(-c*q**(-n), q, k)
    return _zero_div(num, den)


def singh_alpha(p: ParamPoint, n: int) -> Fraction:
    c, q = p.sym("c"), p.sym("q")
    return _zero_div((1 + q) * (1 + c*q**(1-n)), q * (1 + c*q**(-n)))


def singh_beta(p: ParamPoint, n: int) -> Fraction:
    c, q = p.sym("c"), p.sym("q")
    return _zero_div(1 + c*q**(2-n), q * (1 + c*q**(-n)))


def singh_gamma(p: ParamPoint, n: int) -> Fraction:
    A, B, c, q = _sym(p, "ABcq")
    num = ((1 - A) * (1 - B) * (1 - c*c) * (1 - A*q) * (1 - B*q)
           * (1 - c*c*q*q) * q**(3 - 2*n))
    den = ((1 - A*B*q) * (1 - A*B*q**3) * (1 + c*q**(-n)) * (1 + c*q**(1-n))
           * (1 + c*q**(2-n)) * (1 + c*q**(3-n)))
    return _zero_div(num, den)


def singh_first_order_residual(p: ParamPoint, n: int, k: int) -> Fraction:
    """Residual of the first-order relation F_{n,k} - F_{n-1,k}
    = gamma'_n F_{n-1,k-1}(Aq, Bq, cq); always 0 for n >= 1."""
    A, B, c, q = _sym(p, "ABcq")
    gamma1 = _zero_div(-(1 - A) * (1 - B) * (1 - c*c) * q**(1-n),
                       (1 - A*B*q) * (1 + c*q**(-n)) * (1 + c*q**(1-n)))
    shifted = p.scaled(A=q, B=q, c=q)
    return (singh_term(p, n, k) - singh_term(p, n - 1, k)
            - gamma1 * singh_term(shifted, n - 1, k - 1))


def singh_rhs_term(p: ParamPoint, n: int, k: int) -> Fraction:
    if k < 0 or k > n:
        return Fraction(0)
    A, B, c, q = _sym(p, "ABcq")
    q2 = q*q
    num = qpoch_multi([A, B, c*c, q**(-2*n)], q2, k) * q2**k
    den = (qpoch(q2, q2, k) * qpoch(A*B*q, q2, k)
           * qpoch(-c*q**(-n), q, 2*k))
    return _zero_div(num, den)


def singh_anti_diff(p: ParamPoint, n: int, k: int) -> Fraction:
    # At k = 0 the printed denominator carries (q^2;q^2)_{-1}, a vanishing
    # reciprocal, so the value is 0 there just as for k < 0.
    if k < 1:
        return Fraction(0)
    A, B, c, q = _sym(p, "ABcq")
    q2 = q*q
    num = (-(1 - q**(2*k-1)) * qpoch_multi([A, B], q2, k)
           * qpoch(q**(4-2*n), q2, k - 1) * qpoch(c*c, q2, k + 1)
           * q**(2 - 2*n))
    den = (qpoch(q2, q2, k - 1) * qpoch(A*B*q, q2, k)
           * qpoch(-c*q**(-n), q, 2*k + 2))
    return _zero_div(num, den)


def _singh_rhs_value(p: ParamPoint, n: int) -> Fraction:
    total = Fraction(0)
    for k in range(n + 1):
        total += singh_rhs_term(p, n, k)
    return total


# ---------------------------------------------------------------------------
# q-binomial / Pochhammer-quotient summations (one free symbol)
# ---------------------------------------------------------------------------

def lebesgue_term(p: ParamPoint, n: int, k: int) -> Fraction:
    if k < 0 or k > n:
        return Fraction(0)
    a, q = p.sym("a"), p.sym("q")
    return _zero_div(qbinom(n, k, q) * q**(k*(k+1)//2),
                     qpoch(a*q**k, q, n + 1))


def lebesgue_keep(p: ParamPoint, n: int) -> Fraction:
    a, q = p.sym("a"), p.sym("q")
    return _zero_div(Fraction(1), 1 - a*q**n)


def lebesgue_move(p: ParamPoint, n: int) -> Fraction:
    a, q = p.sym("a"), p.sym("q")
    return _zero_div(q**n, 1 - a*q**n)


def _lebesgue_rhs_value(p: ParamPoint, n: int) -> Fraction:
    a, q = p.sym("a"), p.sym("q")
    return _zero_div(qpoch(-q, q, n), qpoch(a, q*q, n + 1))


def quintuple_term(p: ParamPoint, n: int, k: int) -> Fraction:
    if k < 0 or k > n:
        return Fraction(0)
    z, q = p.sym("z"), p.sym("q")
    num = ((1 - z*z*q**(2*k+1)) * qbinom(n, k, q) * qpoch(z*q, q, n)
           * z**k * q**(k*k))
    return _zero_div(num, qpoch(z*z*q**(k+1), q, n + 1))


def quintuple_keep(p: ParamPoint, n: int) -> Fraction:
    z, q = p.sym("z"), p.sym("q")
    return _zero_div(1 - z*q**n, 1 - z*z*q**(n+1))


def quintuple_move(p: ParamPoint, n: int) -> Fraction:
    z, q = p.sym("z"), p.sym("q")
    return _zero_div((1 - z*q) * z * q**n, 1 - z*z*q**(n+1))


# ---------------------------------------------------------------------------
# C_r certificate (multi-index)
# ---------------------------------------------------------------------------

def schlosser_term(p: ParamPoint, n: int, ks) -> Fraction:
    r = p.idx("r")
    ks = (ks,) if isinstance(ks, int) else tuple(ks)
    if len(ks) != r:
        raise ValueError("need a k-vector of length r=%d" % r)
    if any(k < 0 or k > n for k in ks):
        return Fraction(0)
    a, b, c, d, q = _sym(p, "abcdq")
    xs = [p.sym("x%d" % i) for i in range(1, r + 1)]
    t = Fraction(1)
    for i in range(r):
        for j in range(i + 1, r):
            t *= (xs[i]*q**ks[i] - xs[j]*q**ks[j]) \
                * (1 - a*xs[i]*xs[j]*q**(ks[i]+ks[j]))
            t = _zero_div(t, (xs[i] - xs[j]) * (1 - a*xs[i]*xs[j]))
    for i in range(r):
        xi, ki = xs[i], ks[i]
        t *= _zero_div(1 - a*xi*xi*q**(2*ki), 1 - a*xi*xi)
        num = qpoch_multi([a*xi*xi, b*xi, c*xi, d*xi,
                           a*a*xi*q**(n-r+2)/(b*c*d), q**(-n)], q, ki) * q**ki
        den = qpoch_multi([q, a*xi*q/b, a*xi*q/c, a*xi*q/d,
                           b*c*d*xi*q**(r-n-1)/a, a*xi*xi*q**(n+1)], q, ki)
        t *= _zero_div(num, den)
    return t


def schlosser_split_coeff(p: ParamPoint, n: int, ss: Sequence[int]) -> Fraction:
    """Per-s coefficient of the 2^r-fold split (product form), at lower level n."""
    r = p.idx("r")
    a, b, c, d, q = _sym(p, "abcdq")
    xs = [p.sym("x%d" % i) for i in range(1, r + 1)]
    t = Fraction(1)
    for i in range(r):
        for j in range(i + 1, r):
            t *= (xs[i]*q**ss[i] - xs[j]*q**ss[j]) \
                * (1 - a*xs[i]*xs[j]*q**(ss[i]+ss[j]))
            t = _zero_div(t, (xs[i] - xs[j]) * (1 - a*xs[i]*xs[j]))
    for i in range(r):
        xi, si = xs[i], ss[i]
        num = (Fraction(-1)**si * qpoch(a*xi*xi*q, q, 2*si)
               * qpoch_multi([b*xi, c*xi, d*xi, b*c*d*xi*q**(r-1)/a,
                              a*a*xi*q**(2*n-r+3)/(b*c*d)], q, si))
        den = (q**(n*si)
               * qpoch_multi([a*xi*xi*q**(n+1), b*c*d*xi*q**(r-n-2)/a], q, 2*si)
               * qpoch_multi([a*xi*q/b, a*xi*q/c, a*xi*q/d], q, si))
        t *= _zero_div(num, den)
    return t


def _schlosser_shift_s(p: ParamPoint, ss: Sequence[int]) -> ParamPoint:
    q = p.sym("q")
    updates = {"x%d" % (i + 1): q**ss[i] for i in range(len(ss)) if ss[i]}
    return p.scaled(**updates) if updates else p


def _schlosser_term_residual(p: ParamPoint, n: int, ks: Sequence[int]) -> Fraction:
    if n < 1:
        raise ValueError("term recurrence needs n >= 1")
    r = p.idx("r")
    ks = tuple(ks)
    rhs = Fraction(0)
    for ss in itertools.product((0, 1), repeat=r):
        coeff = schlosser_split_coeff(p, n - 1, ss)
        shifted = _schlosser_shift_s(p, ss)
        rhs += coeff * schlosser_term(shifted, n - 1,
                                      tuple(k - s for k, s in zip(ks, ss)))
    return schlosser_term(p, n, ks) - rhs


def _with_n(point: ParamPoint, n: int) -> ParamPoint:
    return ParamPoint(dict(point.symbols), {**dict(point.indices), "n": n})


def _schlosser_lhs_value(p: ParamPoint, n: int) -> Fraction:
    return _ident.schlosser_lhs(_with_n(p, n))


def _schlosser_rhs_value(p: ParamPoint, n: int) -> Fraction:
    return _ident.schlosser_rhs(_with_n(p, n))


def schlosser_split_residual(point: ParamPoint, n: int, r: int, i: int,
                             k_i: int) -> Fraction:
    """Denominator-cleared residual of the two-term partial-fraction split
    used in the C_r induction step; always 0.

    The displayed fraction form is 0/0 at k_i = n + 1, so the residual is the
    identity multiplied through by
    (1 - q^{-n+k_i-1})(1 - a x_i^2 q^{n+k_i+1})(1 - q^{n+1})(1 - a x_i^2 q^{n+1}),
    which is defined everywhere and vanishes iff the split holds.
    """
    a, b, c, d, q = _sym(point, "abcdq")
    xi = point.sym("x%d" % i)
    lhs_num = ((1 - a*a*xi*q**(n+k_i-r+2)/(b*c*d))
               * (1 - b*c*d*xi*q**(k_i+r-n-2)/a))
    lhs_den = (1 - q**(-n+k_i-1)) * (1 - a*xi*xi*q**(n+k_i+1))
    t1_num = (-q**(n+1) * (1 - a*a*xi*q**(n-r+2)/(b*c*d))
              * (1 - b*c*d*xi*q**(r-n-2)/a))
    t2_num = ((1 - a*a*xi*q**(2*n-r+3)/(b*c*d)) * (1 - b*c*d*xi*q**(r-1)/a)
              * (1 - a*xi*xi*q**k_i) * (1 - q**k_i))
    common = (1 - q**(n+1)) * (1 - a*xi*xi*q**(n+1))
    return lhs_num * common - t1_num * lhs_den - t2_num


def _schlosser_alpha_s(point: ParamPoint, n: int, r: int,
                       ss: Sequence[int]) -> Fraction:
    a, b, c, d, q = _sym(point, "abcdq")
    xs = [point.sym("x%d" % i) for i in range(1, r + 1)]
    t = _zero_div(Fraction(1), (1 - q**(n+1)) ** r)
    for i in range(r):
        xi, si = xs[i], ss[i]
        t *= _zero_div((-q**(n+1)) ** (1 - si), 1 - a*xi*xi*q**(n+1))
        t *= (1 - a*a*xi*q**(n-r+2)/(b*c*d)) ** (1 - si)
        t *= (1 - b*c*d*xi*q**(r-n-2)/a) ** (1 - si)
        t *= (1 - a*a*xi*q**(2*n-r+3)/(b*c*d)) ** si
        t *= (1 - b*c*d*xi*q**(r-1)/a) ** si
    return t


def schlosser_coeff_residual(point: ParamPoint, n: int, r: int,
                             s_vector: Sequence[int]) -> Fraction:
    """Residual between the two displayed forms of the split coefficient
    beta_{s_1..s_r} (the alpha-based expansion vs. the product form); always 0.
    """
    ss = tuple(s_vector)
    if len(ss) != r or any(s not in (0, 1) for s in ss):
        raise ValueError("s_vector must lie in {0,1}^r")
    a, b, c, d, q = _sym(point, "abcdq")
    xs = [point.sym("x%d" % i) for i in range(1, r + 1)]
    form1 = _schlosser_alpha_s(point, n, r, ss)
    for i in range(r):
        for j in range(i + 1, r):
            form1 *= (xs[i]*q**ss[i] - xs[j]*q**ss[j]) \
                * (1 - a*xs[i]*xs[j]*q**(ss[i]+ss[j]))
            form1 = _zero_div(form1, (xs[i] - xs[j]) * (1 - a*xs[i]*xs[j]))
    for i in range(r):
        xi, si = xs[i], ss[i]
        form1 *= _zero_div(1 - a*xi*xi*q**(2*si), 1 - a*xi*xi)
        num = (qpoch(a*xi*xi, q, 2*si)
               * qpoch_multi([b*xi, c*xi, d*xi], q, si) * q**si
               * (1 - a*xi*xi*q**(n+si+1)) ** (1 - 2*si) * (1 - q**(-n-1)))
        den = (qpoch_multi([a*xi*q/b, a*xi*q/c, a*xi*q/d], q, si)
               * qpoch(b*c*d*xi*q**(r-n-2)/a, q, si + 1)
               * qpoch(a*a*xi*q**(n-r+2)/(b*c*d), q, 1 - si))
        form1 *= _zero_div(num, den)
    form2 = schlosser_split_coeff(_with_r(point, r), n, ss)
    return form1 - form2


def _with_r(point: ParamPoint, r: int) -> ParamPoint:
    if point.indices.get("r") == r:
        return point
    return ParamPoint(dict(point.symbols), {**dict(point.indices), "r": r})


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

def _scale_shift(**factors_of_q):
    powers = dict(factors_of_q)

    def shift(point: ParamPoint) -> ParamPoint:
        q = point.sym("q")
        return point.scaled(**{name: q**e for name, e in powers.items()})
    return shift


def _build_certificates() -> Dict[str, ProofCertificate]:
    certs = {}

    def add(cert: ProofCertificate) -> None:
        certs[cert.id] = cert

    add(ProofCertificate(
        id="jackson", symbols=("a", "b", "c", "d"), order=1, k_shift=1,
        term=jackson_term, shift=_scale_shift(a=2, b=1, c=1, d=1),
        rhs_value=_jackson_rhs_value,
        coeffs=(lambda p, n: Fraction(1), jackson_gamma)))

    add(ProofCertificate(
        id="watson", symbols=("a", "b", "c", "d", "e"), order=1, k_shift=1,
        term=watson_term, shift=_scale_shift(a=2, b=1, c=1, d=1, e=1),
        rhs_value=_watson_rhs_value,
        coeffs=(lambda p, n: Fraction(1), watson_beta),
        rhs_term=watson_rhs_term, anti_diff=watson_anti_diff))

    add(ProofCertificate(
        id="bailey", symbols=("a", "b", "c", "d", "e", "f"), order=1, k_shift=1,
        term=bailey_term, shift=_scale_shift(a=2, b=1, c=1, d=1, e=1, f=1),
        rhs_value=_bailey_rhs_value,
        coeffs=(lambda p, n: Fraction(1), bailey_alpha),
        rhs_term=bailey_rhs_term, anti_diff=bailey_anti_diff))

    add(ProofCertificate(
        id="singh", symbols=("A", "B", "c"), order=2, k_shift=2,
        term=singh_term, shift=_scale_shift(A=2, B=2, c=2),
        rhs_value=_singh_rhs_value,
        coeffs=(singh_alpha, singh_beta, singh_gamma),
        rhs_term=singh_rhs_term, anti_diff=singh_anti_diff))

    add(ProofCertificate(
        id="lebesgue", symbols=("a",), order=1, k_shift=1,
        term=lebesgue_term, shift=_scale_shift(a=2),
        rhs_value=_lebesgue_rhs_value,
        coeffs=(lebesgue_keep, lebesgue_move)))

    add(ProofCertificate(
        id="quintuple", symbols=("z",), order=1, k_shift=1,
        term=quintuple_term, shift=_scale_shift(z=1),
        rhs_value=lambda p, n: Fraction(1),
        coeffs=(quintuple_keep, quintuple_move)))

    add(ProofCertificate(
        id="schlosser", symbols=("a", "b", "c", "d"), order=0, k_shift=1,
        term=schlosser_term, shift=lambda p: p,
        rhs_value=_schlosser_rhs_value,
        coeffs=(), multi=True))

    return certs


_CERTS = _build_certificates()


def list_certificates() -> Tuple[ProofCertificate, ...]:
    return tuple(_CERTS.values())


def certificate_ids() -> Tuple[str, ...]:
    return tuple(_CERTS.keys())


def get_certificate(proof_id: str) -> ProofCertificate:
    try:
        return _CERTS[proof_id]
    except KeyError:
        raise KeyError("unknown proof certificate %r (known: %s)"
                       % (proof_id, ", ".join(_CERTS))) from None


CertOrId = Union[ProofCertificate, str]


def _resolve(cert: CertOrId) -> ProofCertificate:
    return cert if isinstance(cert, ProofCertificate) else get_certificate(cert)


# ---------------------------------------------------------------------------
# residual operations
# ---------------------------------------------------------------------------

def term_recurrence_residual(cert: CertOrId, point: ParamPoint, n: int,
                             k) -> Fraction:
    """F_{n,k} minus its recurrence right side; always exactly 0.

    ``k`` is an int for the single-index certificates and a k-vector (tuple)
    for the multi-index one (an int is accepted there when r = 1).
    """
    cert = _resolve(cert)
    if cert.multi:
        if isinstance(k, int):
            k = (k,)
        return _schlosser_term_residual(point, n, k)
    if cert.order == 2:
        if n < 2:
            raise ValueError("three-term recurrence needs n >= 2")
        alpha, beta, gamma = cert.coeffs
        shifted = cert.shift(point)
        return (cert.term(point, n, k)
                - alpha(point, n) * cert.term(point, n - 1, k)
                + beta(point, n) * cert.term(point, n - 2, k)
                - gamma(point, n) * cert.term(shifted, n - 2, k - cert.k_shift))
    if n < 1:
        raise ValueError("term recurrence needs n >= 1")
    keep, move = cert.coeffs
    shifted = cert.shift(point)
    return (cert.term(point, n, k)
            - keep(point, n) * cert.term(point, n - 1, k)
            - move(point, n) * cert.term(shifted, n - 1, k - cert.k_shift))


def _rhs_combination(cert: ProofCertificate, point: ParamPoint, n: int,
                     k: int) -> Fraction:
    """The telescoped combination of right-side terms at (n, k)."""
    shifted = cert.shift(point)
    if cert.order == 2:
        alpha, beta, gamma = cert.coeffs
        return (cert.rhs_term(point, n, k)
                - alpha(point, n) * cert.rhs_term(point, n - 1, k)
                + beta(point, n) * cert.rhs_term(point, n - 2, k)
                - gamma(point, n) * cert.rhs_term(shifted, n - 2, k - cert.k_shift))
    keep, move = cert.coeffs
    return (cert.rhs_term(point, n, k)
            - keep(point, n) * cert.rhs_term(point, n - 1, k)
            - move(point, n) * cert.rhs_term(shifted, n - 1, k - cert.k_shift))


def telescoping_residual(cert: CertOrId, point: ParamPoint, n: int,
                         k: int) -> Fraction:
    """Telescoped right-side combination minus (H_{n,k} - H_{n,k-1}); always 0."""
    cert = _resolve(cert)
    if cert.rhs_term is None or cert.anti_diff is None:
        raise ValueError("certificate %s has no anti-difference" % cert.id)
    if n < cert.order:
        raise ValueError("telescoping needs n >= %d" % cert.order)
    return (_rhs_combination(cert, point, n, k)
            - (cert.anti_diff(point, n, k) - cert.anti_diff(point, n, k - 1)))


def boundary_check(cert: CertOrId, point: ParamPoint, n: int) -> bool:
    """True iff the summed telescoping collapses exactly:
    sum_{k=0}^{n} of the telescoped right-side combination is 0."""
    cert = _resolve(cert)
    if cert.rhs_term is None:
        raise ValueError("certificate %s has no right-side terms" % cert.id)
    if n < cert.order:
        raise ValueError("boundary check needs n >= %d" % cert.order)
    total = Fraction(0)
    for k in range(n + 1):
        total += _rhs_combination(cert, point, n, k)
    return total == 0


# ---------------------------------------------------------------------------
# inductive replay
# ---------------------------------------------------------------------------

def inductive_replay(proof: CertOrId, point: ParamPoint, n_max: int) -> bool:
    """Re-derive the identity from its base case at the given point.

    The level-n recurrence references level n-1 at the shifted point, so the
    replay propagates values over the triangle V[m][j] = level m at the j-fold
    shifted point, starting from directly evaluated bases, and checks every
    node against direct evaluation of both sides.  Returns True iff all
    checks hold exactly.
    """
    cert = _resolve(proof)
    if cert.multi:
        return _schlosser_replay(point, n_max)
    pts = [point]
    for _ in range(n_max):
        pts.append(cert.shift(pts[-1]))

    values: Dict[Tuple[int, int], Fraction] = {}
    for j in range(n_max + 1):
        base = cert.lhs_value(pts[j], 0)
        if base != cert.rhs_value(pts[j], 0):
            return False
        values[(0, j)] = base
    if cert.order == 2:
        for j in range(n_max + 1):
            one = cert.lhs_value(pts[j], 1)
            if one != cert.rhs_value(pts[j], 1):
                return False
            values[(1, j)] = one

    for m in range(cert.order, n_max + 1):
        for j in range(n_max + 1 - m):
            p = pts[j]
            if cert.order == 2:
                alpha, beta, gamma = cert.coeffs
                propagated = (alpha(p, m) * values[(m - 1, j)]
                              - beta(p, m) * values[(m - 2, j)]
                              + gamma(p, m) * values[(m - 2, j + 1)])
            else:
                keep, move = cert.coeffs
                propagated = (keep(p, m) * values[(m - 1, j)]
                              + move(p, m) * values[(m - 1, j + 1)])
            if propagated != cert.lhs_value(p, m):
                return False
            if propagated != cert.rhs_value(p, m):
                return False
            values[(m, j)] = propagated
    return True


def sample_certificate_point(cert: CertOrId, rng, size_bound: int = 1000,
                             r_range: Tuple[int, int] = (1, 3)) -> ParamPoint:
    """Random rational point carrying the certificate's symbols (plus q, and
    the x-vector with index r for the multi-index certificate)."""
    cert = _resolve(cert)
    symbols = {s: _ident.random_rational(rng, size_bound) for s in cert.symbols}
    symbols["q"] = _ident.random_q(rng, size_bound)
    indices: Dict[str, int] = {}
    if cert.multi:
        r = rng.randint(*r_range)
        indices["r"] = r
        seen = set(symbols.values())
        for i in range(1, r + 1):
            while True:
                v = _ident.random_rational(rng, size_bound)
                if v not in seen:
                    seen.add(v)
                    symbols["x%d" % i] = v
                    break
    return ParamPoint(symbols, indices)


SCHLOSSER_REPLAY_MAX_R = 3
SCHLOSSER_REPLAY_MAX_N = 3


def _schlosser_replay(point: ParamPoint, n_max: int) -> bool:
    """Replay the C_r induction: at each level, the n=1 lemma re-based at
    a -> a q^{level-1}, the split residuals, the coefficient residuals, and a
    direct two-sided evaluation must all hold."""
    r = point.idx("r")
    n_max = min(n_max, SCHLOSSER_REPLAY_MAX_N)
    if r > SCHLOSSER_REPLAY_MAX_R:
        raise ValueError("replay cost guard: r <= %d" % SCHLOSSER_REPLAY_MAX_R)
    a = point.sym("a")
    q = point.sym("q")
    if _schlosser_lhs_value(point, 0) != _schlosser_rhs_value(point, 0):
        return False
    for level in range(1, n_max + 1):
        lemma_point = point.with_symbols(a=a * q**(level - 1))
        if (_ident.schlosser_lemma_lhs(lemma_point)
                != _ident.schlosser_lemma_rhs(lemma_point)):
            return False
        for i in range(1, r + 1):
            for k_i in range(level + 1):
                if schlosser_split_residual(point, level - 1, r, i, k_i) != 0:
                    return False
        for ss in itertools.product((0, 1), repeat=r):
            if schlosser_coeff_residual(point, level - 1, r, ss) != 0:
                return False
        if _schlosser_lhs_value(point, level) != _schlosser_rhs_value(point, level):
            return False
    return True
