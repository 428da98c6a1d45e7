"""Terminating basic hypergeometric sums and the well-poised contiguous relations.

The two contiguous relations implemented here connect the k-th term of a
well-poised series whose last two parameters differ by a factor of q (first
relation) or whose argument differs by a factor of q (second relation) to the
(k-1)-th term at a uniformly q-shifted parameter list.  Both hold exactly for
rational parameters and are exposed as zero-residual checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from .qcore import PoleError, qpoch, qpoch_multi


@dataclass(frozen=True)
class PhiSpec:
    """A terminating r+1_phi_r series: sum over the first term_count terms."""

    numerator_params: Tuple[Fraction, ...]
    denominator_params: Tuple[Fraction, ...]
    q: Fraction
    z: Fraction
    term_count: int

    def __post_init__(self):
        object.__setattr__(self, "numerator_params",
                           tuple(Fraction(a) for a in self.numerator_params))
        object.__setattr__(self, "denominator_params",
                           tuple(Fraction(b) for b in self.denominator_params))
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "z", Fraction(self.z))
        if self.term_count < 0:
            raise ValueError("term_count must be >= 0")


def poch_ratio_sum(nums: Sequence, dens: Sequence, q, z, terms: int) -> Fraction:
    """Exact sum_{k=0}^{terms-1} (nums;q)_k z^k / (dens;q)_k, incrementally.

    ``dens`` must already include q itself when the usual (q;q)_k factor is
    wanted.  Each term is the previous one times a ratio of linear factors,
    so no Pochhammer is ever recomputed from scratch.
    """
    q = Fraction(q)
    z = Fraction(z)
    nums = [Fraction(a) for a in nums]
    dens = [Fraction(b) for b in dens]
    if terms <= 0:
        return Fraction(0)
    total = Fraction(1)
    term = Fraction(1)
    npow = list(nums)
    dpow = list(dens)
    for k in range(terms - 1):
        ratio = z
        for i in range(len(npow)):
            ratio *= 1 - npow[i]
            npow[i] *= q
        for i in range(len(dpow)):
            factor = 1 - dpow[i]
            if factor == 0:
                raise PoleError(
                    "denominator factor 1 - (%s) q^%d vanished at k=%d"
                    % (dens[i], k, k + 1))
            ratio /= factor
            dpow[i] *= q
        term *= ratio
        total += term
    return total


def phi_sum(spec: PhiSpec) -> Fraction:
    """Exact value of the terminating basic hypergeometric series."""
    return poch_ratio_sum(spec.numerator_params,
                          (spec.q,) + spec.denominator_params,
                          spec.q, spec.z, spec.term_count)


@dataclass(frozen=True)
class WellPoisedTerm:
    """Inputs for the k-th term of a well-poised series.

    The denominator parameters are implied: (q, a_1 q/a_2, ..., a_1 q/a_{r+1}).
    """

    a_list: Tuple[Fraction, ...]
    q: Fraction
    z: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a_list", tuple(Fraction(a) for a in self.a_list))
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "z", Fraction(self.z))
        if len(self.a_list) < 2:
            raise ValueError("well-poised term needs at least two parameters")


def _wp_value(a_list: Sequence[Fraction], q: Fraction, z: Fraction, k: int) -> Fraction:
    if k < 0:
        return Fraction(0)
    a1 = a_list[0]
    num = qpoch_multi(a_list, q, k) * z ** k
    den = qpoch(q, q, k)
    for a in a_list[1:]:
        if a == 0:
            raise PoleError("well-poised parameter must be nonzero")
        den *= qpoch(a1 * q / a, q, k)
    if den == 0:
        raise PoleError("well-poised denominator vanished at k=%d" % k)
    return num / den


def wp_term(t: WellPoisedTerm, k: int) -> Fraction:
    """Exact k-th well-poised term; 0 for k < 0, 1 at k = 0."""
    return _wp_value(t.a_list, t.q, t.z, k)


def contiguous_alpha(a_list: Sequence, q, z) -> Fraction:
    """Coefficient of the first contiguous relation.

    Defined for r >= 2 (a parameter list of length >= 3); for r = 1 the
    factor 1 - a_1/a_r vanishes identically and PoleError is raised.
    """
    a = [Fraction(x) for x in a_list]
    q = Fraction(q)
    z = Fraction(z)
    r = len(a) - 1
    a1, ar, ar1 = a[0], a[r - 1], a[r]
    num = (ar - ar1) * (1 - a1 / (ar * ar1)) * (1 - a1) * (1 - a1 * q) * z
    for ai in a[1:r - 1]:
        num *= 1 - ai
    den = (1 - a1 / ar) * (1 - a1 / ar1)
    for ai in a[1:]:
        den *= 1 - a1 * q / ai
    if den == 0:
        detail = " (r=1 is identically singular)" if r == 1 else ""
        raise PoleError("contiguous_alpha denominator vanished" + detail)
    return num / den


def contiguous_beta(a_list: Sequence, q, z) -> Fraction:
    """Coefficient of the second contiguous relation (any r >= 1)."""
    a = [Fraction(x) for x in a_list]
    q = Fraction(q)
    z = Fraction(z)
    r = len(a) - 1
    a1, ar1 = a[0], a[r]
    num = -(1 - a1) * (1 - a1 * q) * z
    for ai in a[1:r]:
        num *= 1 - ai
    den = 1 - a1 / ar1
    for ai in a[1:]:
        den *= 1 - a1 * q / ai
    if den == 0:
        raise PoleError("contiguous_beta denominator vanished")
    return num / den


def _shifted(a_list: Sequence[Fraction], q: Fraction) -> list:
    return [a_list[0] * q * q] + [a * q for a in a_list[1:]]


def contiguous_residual_1(t: WellPoisedTerm, k: int) -> Fraction:
    """Residual of the first contiguous relation at term index k; always 0.

    F_k(..., a_r q, a_{r+1}) - F_k(..., a_r, a_{r+1} q)
        - alpha * F_{k-1}(a_1 q^2, a_2 q, ..., a_{r+1} q).
    """
    a = list(t.a_list)
    q, z = t.q, t.z
    bumped_r = a[:-2] + [a[-2] * q, a[-1]]
    bumped_r1 = a[:-1] + [a[-1] * q]
    first = _wp_value(bumped_r, q, z, k)
    second = _wp_value(bumped_r1, q, z, k)
    alpha = contiguous_alpha(a, q, z)
    return first - second - alpha * _wp_value(_shifted(a, q), q, z, k - 1)


def contiguous_residual_2(t: WellPoisedTerm, k: int) -> Fraction:
    """Residual of the second contiguous relation at term index k; always 0.

    F_k(..., a_{r+1}; q, qz) - F_k(..., a_{r+1} q; q, z)
        - beta * F_{k-1}(a_1 q^2, a_2 q, ..., a_{r+1} q; q, z).
    """
    a = list(t.a_list)
    q, z = t.q, t.z
    bumped_r1 = a[:-1] + [a[-1] * q]
    first = _wp_value(a, q, q * z, k)
    second = _wp_value(bumped_r1, q, z, k)
    beta = contiguous_beta(a, q, z)
    return first - second - beta * _wp_value(_shifted(a, q), q, z, k - 1)


def trivial_identity_residuals(a, b, c, x) -> Tuple[Fraction, Fraction]:
    """Residuals of the two rational-function identities behind the
    contiguous relations; both are always exactly 0.
    """
    a, b, c, x = Fraction(a), Fraction(b), Fraction(c), Fraction(x)
    if b in (0, 1) or c in (0, 1):
        raise PoleError("b and c must avoid {0, 1}")
    if a == b or a == c:
        raise PoleError("a/b and a/c must differ from 1")
    lhs1 = ((1 - b * x) * (1 - a * x / b) / ((1 - b) * (1 - a / b))
            - (1 - c * x) * (1 - a * x / c) / ((1 - c) * (1 - a / c)))
    rhs1 = ((b - c) * (1 - a / (b * c)) * (1 - x) * (1 - a * x)
            / ((1 - b) * (1 - c) * (1 - a / b) * (1 - a / c)))
    res1 = lhs1 - rhs1
    lhs2 = x - (1 - c * x) * (1 - a * x / c) / ((1 - c) * (1 - a / c))
    rhs2 = -(1 - x) * (1 - a * x) / ((1 - c) * (1 - a / c))
    res2 = lhs2 - rhs2
    return res1, res2
