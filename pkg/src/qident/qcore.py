"""Exact rational scalars, parameter points, and q-Pochhammer primitives.

Every scalar in this package is a ``fractions.Fraction`` and every operation
is exact; nothing here touches floating point.  The q-shifted factorial
``qpoch`` is defined for any integer index, with negative indices handled by
the reciprocal identity (a;q)_{-m} = 1 / (a q^{-m};q)_m so that evaluation
stays finite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

QRational = Fraction


class QIdentityError(Exception):
    """Base class for errors raised by this package."""


class PoleError(QIdentityError):
    """A denominator factor vanished during exact evaluation."""


class DegenerateQ(QIdentityError):
    """q is 0 or 1, where q-binomials and Pochhammer ratios degenerate."""


class MissingSymbol(QIdentityError):
    """A ParamPoint lacks a symbol or index required by an evaluator."""


def qrat(num, den=None) -> Fraction:
    """Exact rational from ints, strings, or fractions.

    Division by zero raises PoleError rather than propagating a bare
    ZeroDivisionError.
    """
    try:
        if den is None:
            return Fraction(num)
        return Fraction(num) / Fraction(den)
    except ZeroDivisionError:
        raise PoleError("division by zero in qrat(%r, %r)" % (num, den)) from None


@dataclass(frozen=True)
class ParamPoint:
    """An exact parameter assignment: symbol values plus integer indices.

    Immutable after construction.  If the symbol ``q`` is present it must not
    be 0 or 1.
    """

    symbols: Mapping[str, Fraction]
    indices: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        syms = {name: Fraction(v) for name, v in self.symbols.items()}
        idxs = {name: int(v) for name, v in self.indices.items()}
        object.__setattr__(self, "symbols", syms)
        object.__setattr__(self, "indices", idxs)
        q = syms.get("q")
        if q is not None and q in (0, 1):
            raise DegenerateQ("q must not be 0 or 1, got q=%s" % q)

    def sym(self, name: str) -> Fraction:
        try:
            return self.symbols[name]
        except KeyError:
            raise MissingSymbol("symbol %r not present (have %s)"
                                % (name, sorted(self.symbols))) from None

    def idx(self, name: str) -> int:
        try:
            return self.indices[name]
        except KeyError:
            raise MissingSymbol("index %r not present (have %s)"
                                % (name, sorted(self.indices))) from None

    def with_symbols(self, **updates) -> "ParamPoint":
        """New point with some symbols replaced or added."""
        syms = dict(self.symbols)
        syms.update({k: Fraction(v) for k, v in updates.items()})
        return ParamPoint(syms, dict(self.indices))

    def scaled(self, **factors) -> "ParamPoint":
        """New point with named symbols multiplied by the given factors.

        This is the shape every proof-certificate parameter shift takes,
        e.g. ``point.scaled(a=q**2, b=q, c=q, d=q)``.
        """
        syms = dict(self.symbols)
        for name, factor in factors.items():
            syms[name] = self.sym(name) * Fraction(factor)
        return ParamPoint(syms, dict(self.indices))


def qpoch(a, q, n: int) -> Fraction:
    """q-shifted factorial (a;q)_n, exact, for any integer n.

    For n >= 0 this is the finite product prod_{k=0}^{n-1} (1 - a q^k); for
    n < 0 it is 1 / (a q^n;q)_{-n}, which raises PoleError when a factor of
    that product vanishes.
    """
    a = Fraction(a)
    q = Fraction(q)
    if n >= 0:
        result = Fraction(1)
        p = a
        for _ in range(n):
            result *= 1 - p
            p *= q
        return result
    m = -n
    result = Fraction(1)
    p = a / q
    for j in range(1, m + 1):
        factor = 1 - p
        if factor == 0:
            raise PoleError("(a;q)_{%d} hit a vanishing factor 1 - a q^{-%d} "
                            "at a=%s, q=%s" % (n, j, a, q))
        result *= factor
        p /= q
    return 1 / result


def qpoch_multi(avals: Sequence, q, n: int) -> Fraction:
    """Product (a_1, ..., a_m;q)_n = prod_i (a_i;q)_n."""
    result = Fraction(1)
    for i, a in enumerate(avals):
        try:
            result *= qpoch(a, q, n)
        except PoleError as exc:
            raise PoleError("factor %d of %d in qpoch_multi: %s"
                            % (i + 1, len(avals), exc)) from None
    return result


def qbinom(n: int, k: int, q) -> Fraction:
    """Gaussian binomial coefficient, via the factored k-term product.

    Returns 0 for k outside [0, n].  Raises DegenerateQ for q in {0, 1} and
    PoleError if q is a root of unity that annihilates a denominator factor
    (e.g. q = -1 with k >= 2).
    """
    q = Fraction(q)
    if q == 0 or q == 1:
        raise DegenerateQ("qbinom is undefined at q=%s" % q)
    if k < 0 or k > n:
        return Fraction(0)
    k = min(k, n - k)
    result = Fraction(1)
    for i in range(1, k + 1):
        den = 1 - q ** i
        if den == 0:
            raise PoleError("qbinom denominator factor 1 - q^%d vanished at q=%s"
                            % (i, q))
        result *= (1 - q ** (n - k + i)) / den
    return result
