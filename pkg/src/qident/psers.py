"""Truncated formal power series in q with exact rational coefficients.

A QSeries holds coefficients c_0..c_N of a series modulo q^{N+1}.  Addition,
multiplication, and inversion of units are exact and closed at order N;
truncating after an operation equals operating on truncated inputs.  These
series verify the limiting product identities (triple product, quintuple
product, and allied sums) to a prescribed order: the non-q symbols are
specialized to random nonzero rationals, so every q-coefficient comparison
is a rational-function identity check in its own right.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Tuple, Union

from .qcore import ParamPoint, PoleError, QIdentityError


class NonTerminatingExponent(QIdentityError):
    """A factor rule failed to push its exponent past the truncation order."""


@dataclass(frozen=True)
class QSeries:
    """Series sum_j c_j q^j + O(q^{N+1}) with exact rational coefficients."""

    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs",
                           tuple(Fraction(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("a QSeries needs at least the constant coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls((Fraction(0),) * (order + 1))

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls((Fraction(1),) + (Fraction(0),) * order)

    @classmethod
    def monomial(cls, coeff, exponent: int, order: int) -> "QSeries":
        if exponent < 0:
            raise ValueError("negative q-exponent; specialize symbols instead")
        c = [Fraction(0)] * (order + 1)
        if exponent <= order:
            c[exponent] = Fraction(coeff)
        return cls(tuple(c))

    def _check_order(self, other: "QSeries") -> None:
        if self.order != other.order:
            raise ValueError("order mismatch: %d vs %d"
                             % (self.order, other.order))

    def __add__(self, other: "QSeries") -> "QSeries":
        self._check_order(other)
        return QSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "QSeries") -> "QSeries":
        self._check_order(other)
        return QSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "QSeries":
        return QSeries(tuple(-a for a in self.coeffs))

    def __mul__(self, other: Union["QSeries", Fraction, int]) -> "QSeries":
        if not isinstance(other, QSeries):
            s = Fraction(other)
            return QSeries(tuple(a * s for a in self.coeffs))
        self._check_order(other)
        n = self.order
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] += a * b
        return QSeries(tuple(out))

    __rmul__ = __mul__

    def shift(self, exponent: int) -> "QSeries":
        """Multiply by q^exponent (exponent >= 0), truncating at the order."""
        if exponent < 0:
            raise ValueError("negative shift not supported")
        n = self.order
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1 - exponent):
            out[i + exponent] = self.coeffs[i]
        return QSeries(tuple(out))

    def invert(self) -> "QSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        c0 = self.coeffs[0]
        if c0 == 0:
            raise PoleError("cannot invert a series with zero constant term")
        n = self.order
        out = [Fraction(0)] * (n + 1)
        out[0] = 1 / c0
        for m in range(1, n + 1):
            acc = Fraction(0)
            for j in range(1, m + 1):
                if self.coeffs[j] != 0:
                    acc += self.coeffs[j] * out[m - j]
            out[m] = -acc / c0
        return QSeries(tuple(out))

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.coeffs[:order + 1])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


FactorRule = Iterable[Tuple[Fraction, int]]

_FACTOR_CAP_SLACK = 64


def series_product(factors: FactorRule, order: int) -> QSeries:
    """Exact truncated product of factors (1 - c_k q^{e_k}).

    The exponents must be strictly increasing and unbounded; iteration stops
    at the first exponent beyond the order (the remaining factors are 1 mod
    q^{order+1}).  NonTerminatingExponent is raised if the exponents fail to
    pass the order within an iteration cap.
    """
    result = QSeries.one(order)
    cap = 4 * (order + 2) + _FACTOR_CAP_SLACK
    count = 0
    for coeff, exponent in factors:
        if exponent > order:
            return result
        count += 1
        if count > cap:
            raise NonTerminatingExponent(
                "factor exponents failed to exceed order %d within %d factors"
                % (order, cap))
        factor = QSeries.one(order) - QSeries.monomial(coeff, exponent, order)
        result = result * factor
    return result


def poch_inf(coeff, start: int, step: int, order: int) -> QSeries:
    """(c q^{start}; q^{step})_infinity truncated: prod_j (1 - c q^{start + j step})."""
    if step <= 0:
        raise ValueError("step must be positive")
    coeff = Fraction(coeff)
    return series_product(((coeff, start + j * step) for j in itertools.count()),
                          order)


def geometric_inverse(coeff, exponent: int, order: int) -> QSeries:
    """Inverse of (1 - c q^e) as the geometric series, for e >= 1."""
    if exponent < 1:
        raise ValueError("geometric_inverse needs exponent >= 1")
    coeff = Fraction(coeff)
    out = [Fraction(0)] * (order + 1)
    power = Fraction(1)
    for e in range(0, order + 1, exponent):
        out[e] = power
        power *= coeff
    return QSeries(tuple(out))


SERIES_IDENTITIES = ("jacobi_triple", "quintuple", "lebesgue_inf",
                     "ab11", "ab00", "q_kummer")


def _params_of(params: Union[ParamPoint, Mapping]) -> Mapping[str, Fraction]:
    if isinstance(params, ParamPoint):
        return params.symbols
    return {k: Fraction(v) for k, v in params.items()}


def _need(symbols: Mapping[str, Fraction], name: str) -> Fraction:
    if name not in symbols:
        raise PoleError("series identity needs symbol %r" % name)
    return symbols[name]


def _jacobi_triple_residual(z: Fraction, order: int) -> QSeries:
    lhs = QSeries.zero(order)
    k = 0
    while k * k <= order:
        lhs += QSeries.monomial(z ** k, k * k, order)
        if k > 0:
            lhs += QSeries.monomial(z ** (-k), k * k, order)
        k += 1
    rhs = poch_inf(1, 2, 2, order)              # (q^2;q^2)_inf
    rhs *= poch_inf(-1 / z, 1, 2, order)        # (-q/z;q^2)_inf
    rhs *= poch_inf(-z, 1, 2, order)            # (-qz;q^2)_inf
    return lhs - rhs


def _quintuple_exponents(k: int) -> Tuple[int, int]:
    # orders of the two monomials of the k-th bilateral term
    base = k * (3 * k + 1) // 2
    return base + 2 * k + 1, base


def _quintuple_residual(z: Fraction, order: int) -> QSeries:
    lhs = QSeries.zero(order)
    for k in itertools.count():
        e_hi, e_lo = _quintuple_exponents(k)
        if min(e_hi, e_lo) > order:
            break
        lhs += QSeries.monomial(z ** (3*k + 3), e_hi, order)
        lhs -= QSeries.monomial(z ** (3*k + 1), e_lo, order)
    for k in itertools.count(1):
        e_hi, e_lo = _quintuple_exponents(-k)
        if min(e_hi, e_lo) > order:
            break
        lhs += QSeries.monomial(z ** (-3*k + 3), e_hi, order)
        lhs -= QSeries.monomial(z ** (-3*k + 1), e_lo, order)
    rhs = poch_inf(1, 1, 1, order)              # (q;q)_inf
    rhs *= poch_inf(z, 0, 1, order)             # (z;q)_inf
    rhs *= poch_inf(1 / z, 1, 1, order)         # (q/z;q)_inf
    rhs *= poch_inf(z * z, 1, 2, order)         # (qz^2;q^2)_inf
    rhs *= poch_inf(1 / (z * z), 1, 2, order)   # (q/z^2;q^2)_inf
    return lhs - rhs


def _lebesgue_inf_residual(a: Fraction, order: int) -> QSeries:
    lhs = QSeries.zero(order)
    term = QSeries.one(order)
    k = 0
    while k * (k + 1) // 2 <= order:
        lhs += term.shift(k * (k + 1) // 2)
        k += 1
        # ratio to the next term besides the q^k order shift:
        # (1 - a q^{k-1}) / (1 - q^k)
        factor = QSeries.one(order) - QSeries.monomial(a, k - 1, order)
        term = term * factor * geometric_inverse(1, k, order)
    rhs = poch_inf(a, 1, 2, order) * poch_inf(-1, 1, 1, order)
    return lhs - rhs


def _ab11_residual(z: Fraction, order: int) -> QSeries:
    lhs = QSeries.one(order)
    poch = QSeries.one(order)       # (z^2 q^2;q^2)_{k-1}
    inv = QSeries.one(order)        # 1 / (q^2;q^2)_k
    for k in itertools.count(1):
        if 2 * k * k - k > order:
            break
        inv = inv * geometric_inverse(1, 2 * k, order)
        if k > 1:
            poch = poch * (QSeries.one(order)
                           - QSeries.monomial(z * z, 2 * (k - 1), order))
        tail = (QSeries.one(order)
                - QSeries.monomial(z * z, 4 * k, order))
        lhs += (poch * inv * tail * z**k).shift(2 * k * k - k)
    rhs = poch_inf(-z, 1, 2, order) * poch_inf(z * z, 4, 4, order)
    return lhs - rhs


def _ab00_residual(z: Fraction, order: int) -> QSeries:
    lhs = QSeries.zero(order)
    poch = QSeries.one(order)       # (z^2 q^2;q^2)_k
    inv = QSeries.one(order)        # 1 / (q^2;q^2)_k
    for k in itertools.count():
        if 2 * k * k + k > order:
            break
        if k > 0:
            inv = inv * geometric_inverse(1, 2 * k, order)
            poch = poch * (QSeries.one(order)
                           - QSeries.monomial(z * z, 2 * k, order))
        tail = (QSeries.one(order)
                + QSeries.monomial(z, 2 * k + 1, order))
        lhs += (poch * inv * tail * z**k).shift(2 * k * k + k)
    rhs = poch_inf(-z, 1, 2, order) * poch_inf(z * z, 4, 4, order)
    return lhs - rhs


def _q_kummer_residual(a: Fraction, b: Fraction, order: int) -> QSeries:
    if b == 0:
        raise PoleError("q-Kummer requires b != 0")
    lhs = QSeries.zero(order)
    term = QSeries.one(order)
    for k in range(order + 1):
        lhs += term.shift(k)
        # ratio besides the q-order shift:
        # (1 - a q^k)(1 - b q^k)(-1/b) / ((1 - q^{k+1})(1 - (a/b) q^{k+1}))
        num = ((QSeries.one(order) - QSeries.monomial(a, k, order))
               * (QSeries.one(order) - QSeries.monomial(b, k, order)))
        term = (term * num * geometric_inverse(1, k + 1, order)
                * geometric_inverse(a / b, k + 1, order) * (Fraction(-1) / b))
    rhs = poch_inf(a, 1, 2, order)                      # (aq;q^2)_inf
    rhs *= poch_inf(a / (b * b), 2, 2, order)           # (aq^2/b^2;q^2)_inf
    rhs *= poch_inf(-1, 1, 1, order)                    # (-q;q)_inf
    rhs *= poch_inf(a / b, 1, 1, order).invert()        # 1/(aq/b;q)_inf
    rhs *= poch_inf(-1 / b, 1, 1, order).invert()       # 1/(-q/b;q)_inf
    return lhs - rhs


def infinite_identity_residual(identity_id: str,
                               params: Union[ParamPoint, Mapping],
                               order: int) -> QSeries:
    """LHS-series minus RHS-series of a limiting identity; the zero series."""
    symbols = _params_of(params)
    if identity_id in ("jacobi_triple", "quintuple", "ab11", "ab00"):
        z = _need(symbols, "z")
        if z == 0:
            raise PoleError("z must be nonzero")
    if identity_id == "jacobi_triple":
        return _jacobi_triple_residual(symbols["z"], order)
    if identity_id == "quintuple":
        return _quintuple_residual(symbols["z"], order)
    if identity_id == "lebesgue_inf":
        return _lebesgue_inf_residual(_need(symbols, "a"), order)
    if identity_id == "ab11":
        return _ab11_residual(symbols["z"], order)
    if identity_id == "ab00":
        return _ab00_residual(symbols["z"], order)
    if identity_id == "q_kummer":
        return _q_kummer_residual(_need(symbols, "a"), _need(symbols, "b"), order)
    raise KeyError("unknown series identity %r (known: %s)"
                   % (identity_id, ", ".join(SERIES_IDENTITIES)))


def jacobi_product_relation_residual(z, order: int) -> QSeries:
    """Cross-multiplied residual of the base-q to base-q^2 product reshuffle
    feeding the triple-product limit; the zero series."""
    z = Fraction(z)
    if z == 0:
        raise PoleError("z must be nonzero")
    lhs = (poch_inf(-1, 1, 1, order) * poch_inf(1, 1, 1, order)
           * poch_inf(-1 / z, 1, 1, order) * poch_inf(-z, 0, 1, order))
    rhs = (poch_inf(1, 2, 2, order) * poch_inf(-1 / z, 1, 2, order)
           * poch_inf(-z, 1, 2, order)
           * poch_inf(-1 / z, 2, 2, order) * poch_inf(-z, 0, 2, order))
    return lhs - rhs


def quintuple_product_relation_residual(z, order: int) -> QSeries:
    """Cross-multiplied residual of the product reshuffle feeding the
    quintuple-product limit; the zero series.  Requires z not in {0, 1, -1}.

    The (q/z^2; .)_infinity factor lives in base q^2, matching the base of
    the quintuple product it feeds.
    """
    z = Fraction(z)
    if z in (0, 1, -1):
        raise PoleError("z must avoid {0, 1, -1}")
    lhs = (poch_inf(-z, 0, 1, order) * poch_inf(-1 / z, 1, 1, order)
           * poch_inf(z * z, 1, 2, order) * poch_inf(z, 0, 1, order)
           * poch_inf(1 / (z * z), 1, 2, order) * poch_inf(1 / z, 1, 1, order))
    rhs = (QSeries.one(order) * (-z * z)
           * poch_inf(z * z, 1, 1, order) * poch_inf(1 / (z * z), 0, 1, order))
    return lhs - rhs
