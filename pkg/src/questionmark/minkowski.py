r"""Minkowski's question mark function, its inverse, and continued fractions.

For :math:`x = [0; a_1, a_2, \ldots]`

.. math::
    ?(x) = 2 \sum_{i \ge 1} (-1)^{i+1} 2^{-(a_1 + \cdots + a_i)},

so rationals map to dyadic rationals and are evaluated exactly here with
Python integers.  Real (float) arguments are enclosed between two rationals
and the monotonicity of ``?`` turns that enclosure into a certified bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from typing import Iterable, Sequence, Union

from .certified import CertifiedValue

__all__ = [
    "HOLDER_EXPONENT",
    "HOLDER_CONSTANT",
    "ContinuedFraction",
    "DyadicRational",
    "PeriodicContinuedFraction",
    "GOLDEN",
    "SQRT2_MINUS_1",
    "cf_encode",
    "cf_encode_real",
    "question_mark",
    "question_mark_exact",
    "question_mark_real",
    "question_mark_extended",
    "box_inverse",
    "holder_bound",
]

HOLDER_EXPONENT = math.log(2.0) / (2.0 * math.log((math.sqrt(5.0) + 1.0) / 2.0))
HOLDER_CONSTANT = 6.0

# Convergent denominators beyond this carry no information about a double.
_FLOAT_DENOMINATOR_CAP = 2**53

Rational = Union[int, Fraction]


# ---------------------------------------------------------------------------
# exact types


@dataclass(frozen=True, order=False)
class DyadicRational:
    """``numerator / 2**exponent`` kept in lowest terms."""

    numerator: int
    exponent: int = 0

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("exponent must be non-negative")
        n, k = self.numerator, self.exponent
        if n == 0:
            k = 0
        elif k:
            tz = min((n & -n).bit_length() - 1, k)
            n >>= tz
            k -= tz
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "exponent", k)

    @classmethod
    def from_fraction(cls, fr: Rational) -> "DyadicRational":
        fr = Fraction(fr)
        d = fr.denominator
        if d & (d - 1):
            raise ValueError(f"{fr} is not a dyadic rational")
        return cls(fr.numerator, d.bit_length() - 1)

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __float__(self) -> float:
        return float(self.as_fraction())

    def _aligned(self, other):
        if isinstance(other, int):
            other = DyadicRational(other)
        if not isinstance(other, DyadicRational):
            return NotImplemented
        k = max(self.exponent, other.exponent)
        return (self.numerator << (k - self.exponent), other.numerator << (k - other.exponent), k)

    def __add__(self, other):
        al = self._aligned(other)
        if al is NotImplemented:
            return al
        a, b, k = al
        return DyadicRational(a + b, k)

    __radd__ = __add__

    def __neg__(self):
        return DyadicRational(-self.numerator, self.exponent)

    def __sub__(self, other):
        al = self._aligned(other)
        if al is NotImplemented:
            return al
        a, b, k = al
        return DyadicRational(a - b, k)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return DyadicRational(self.numerator * other, self.exponent)
        if isinstance(other, DyadicRational):
            return DyadicRational(self.numerator * other.numerator, self.exponent + other.exponent)
        return NotImplemented

    __rmul__ = __mul__

    def half(self) -> "DyadicRational":
        return DyadicRational(self.numerator, self.exponent + 1)

    def __eq__(self, other):
        if isinstance(other, DyadicRational):
            return self.numerator == other.numerator and self.exponent == other.exponent
        if isinstance(other, (int, Fraction)):
            return self.as_fraction() == other
        return NotImplemented

    def __hash__(self):
        return hash(self.as_fraction())

    def _cmp(self, other):
        al = self._aligned(other if not isinstance(other, Fraction) else other)
        if al is NotImplemented:
            if isinstance(other, Fraction):
                a, b = self.as_fraction(), other
                return (a > b) - (a < b)
            raise TypeError(f"cannot compare DyadicRational with {type(other).__name__}")
        a, b, _ = al
        return (a > b) - (a < b)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __str__(self):
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/{1 << self.exponent}" if self.exponent < 64 else f"{self.numerator}/2^{self.exponent}"


@dataclass(frozen=True)
class ContinuedFraction:
    """Digits ``a_1..a_n`` of ``[0; a_1, ..., a_n]``.

    The empty sequence is 0 and ``(1,)`` is 1.  ``is_truncated`` marks a
    prefix of an infinite (or too long) expansion.
    """

    digits: tuple = ()
    is_truncated: bool = False

    def __post_init__(self):
        digits = tuple(int(a) for a in self.digits)
        if any(a < 1 for a in digits):
            raise ValueError(f"continued fraction digits must be >= 1: {digits}")
        object.__setattr__(self, "digits", digits)

    @property
    def is_canonical(self) -> bool:
        d = self.digits
        return len(d) < 2 or d[-1] >= 2

    def canonical(self) -> "ContinuedFraction":
        """Fold a trailing 1 into its predecessor: ``[..., a, 1] -> [..., a+1]``."""
        d = list(self.digits)
        if not self.is_truncated and len(d) >= 2 and d[-1] == 1:
            d.pop()
            d[-1] += 1
        return ContinuedFraction(tuple(d), self.is_truncated)

    def convergents(self) -> Iterable[tuple]:
        p0, q0, p1, q1 = 1, 0, 0, 1
        for a in self.digits:
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
            yield p1, q1

    def value(self) -> Fraction:
        p, q = 0, 1
        for p, q in self.convergents():
            pass
        return Fraction(p, q)

    def __len__(self):
        return len(self.digits)


@dataclass(frozen=True)
class PeriodicContinuedFraction:
    """A quadratic irrational ``[0; preperiod, (period)^inf]`` in (0, 1)."""

    preperiod: tuple
    period: tuple
    name: str = ""

    def __post_init__(self):
        if not self.period or any(int(a) < 1 for a in self.preperiod + self.period):
            raise ValueError("period must be non-empty and digits >= 1")

    def __float__(self) -> float:
        # float of a long prefix: ample for display
        digits = self.preperiod + self.period * (64 // len(self.period) + 1)
        return float(ContinuedFraction(digits).value())


GOLDEN = PeriodicContinuedFraction((), (1,), "golden")  # (sqrt(5) - 1) / 2
SQRT2_MINUS_1 = PeriodicContinuedFraction((), (2,), "sqrt2-1")


# ---------------------------------------------------------------------------
# encoding


def cf_encode(x: Rational) -> ContinuedFraction:
    """Canonical continued fraction of an exact rational in [0, 1]."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise ValueError(f"cf_encode expects 0 <= x <= 1, got {x}")
    p, q = x.numerator, x.denominator
    digits = []
    while p:
        a, r = divmod(q, p)
        digits.append(a)
        q, p = p, r
    # Euclid always ends on a digit >= 2 except for x = 1 -> (1,)
    return ContinuedFraction(tuple(digits))


def cf_encode_real(x: float, denominator_cap: int = _FLOAT_DENOMINATOR_CAP) -> ContinuedFraction:
    """Digits of a double, stopping once a convergent denominator would exceed the cap."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"cf_encode_real expects 0 <= x <= 1, got {x}")
    fr = Fraction(x)
    digits = []
    q0, q1 = 0, 1
    truncated = False
    for a in cf_encode(fr).digits:
        q_next = a * q1 + q0
        if q_next > denominator_cap:
            truncated = True
            break
        digits.append(a)
        q0, q1 = q1, q_next
    return ContinuedFraction(tuple(digits), truncated)


# ---------------------------------------------------------------------------
# evaluation


def _qm_digits(digits: Sequence[int]) -> DyadicRational:
    # V_i = 2^{a_i} V_{i-1} + 2 (-1)^{i+1};  ?(x) = V_n / 2^{s_n}
    acc = 0
    s = 0
    sign = 2
    for a in digits:
        acc = (acc << a) + sign
        sign = -sign
        s += a
    return DyadicRational(acc, s)


def question_mark(x: Union[ContinuedFraction, Rational]) -> DyadicRational:
    """Exact ``?(x)`` for a rational in [0, 1] (or its continued fraction)."""
    if isinstance(x, ContinuedFraction):
        if x.is_truncated:
            raise ValueError("question_mark needs a complete expansion; use question_mark_real")
        return _qm_digits(x.digits)
    return _qm_digits(cf_encode(x).digits)


def question_mark_exact(x) -> Fraction:
    """Exact value on [0, inf]: rationals give dyadics, quadratic irrationals rationals."""
    if isinstance(x, PeriodicContinuedFraction):
        return _qm_periodic(x)
    if isinstance(x, float) and math.isinf(x):
        return Fraction(2)
    x = Fraction(x)
    if x < 0:
        raise ValueError("? is defined on [0, inf]")
    if x > 1:
        return 2 - question_mark(1 / x).as_fraction()
    return question_mark(x).as_fraction()


def _qm_periodic(x: PeriodicContinuedFraction) -> Fraction:
    # prefix terms, then a geometric series over whole periods
    total = Fraction(0)
    s = 0
    sign = 1
    for a in x.preperiod:
        s += a
        total += sign * Fraction(2, 1 << s)
        sign = -sign
    block = Fraction(0)
    s_block = 0
    sign_block = 1
    for a in x.period:
        s_block += a
        block += sign_block * Fraction(2, 1 << s_block)
        sign_block = -sign_block
    ratio = Fraction(sign_block, 1 << s_block)
    return total + sign * Fraction(1, 1 << s) * block / (1 - ratio)


def _enclose(fr: Fraction, sum_cap: int, denominator_cap=None):
    """Rationals ``lo <= ?(fr) <= hi`` with digit sums limited by ``sum_cap``."""
    digits = cf_encode(fr).digits
    kept = []
    s = 0
    q0, q1 = 0, 1
    for i, a in enumerate(digits):
        q_next = a * q1 + q0
        if denominator_cap is not None and q_next > denominator_cap:
            # fr lies in the cylinder of the kept prefix
            if not kept:
                return Fraction(0), Fraction(1), ContinuedFraction((), True)
            e1 = _qm_digits(kept).as_fraction()
            alt = kept[:-1] + [kept[-1] + 1]
            e2 = _qm_digits(alt).as_fraction()
            return min(e1, e2), max(e1, e2), ContinuedFraction(tuple(kept), True)
        if s + a > sum_cap:
            # next digit >= a_cut: between [prefix] and [prefix, a_cut]
            a_cut = max(1, sum_cap - s)
            e1 = _qm_digits(kept).as_fraction()
            e2 = _qm_digits(kept + [a_cut]).as_fraction()
            return min(e1, e2), max(e1, e2), ContinuedFraction(tuple(kept), True)
        kept.append(a)
        s += a
        q0, q1 = q1, q_next
    v = _qm_digits(kept).as_fraction()
    return v, v, ContinuedFraction(tuple(kept))


def _sum_cap(tol: float) -> int:
    return max(8, int(math.ceil(-math.log2(tol))) + 8)


def _certify(lo: Fraction, hi: Fraction) -> CertifiedValue:
    mid = (lo + hi) / 2
    value = float(mid)
    err = (hi - lo) / 2 + abs(Fraction(value) - mid)
    bound = float(err)
    if Fraction(bound) < err:
        bound = math.nextafter(bound, math.inf)
    return CertifiedValue(value, bound, True, mid if lo == hi else None)


def question_mark_real(x, tol: float = 1e-15) -> CertifiedValue:
    """Certified ``?(x)`` for real ``x`` in [0, 1].

    Floats are taken at their exact binary value; digit extraction stops when
    the convergent denominator passes 2**53 or when the digit sum makes the
    remaining terms smaller than ``tol``, and the enclosing cylinder supplies
    the bound.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if isinstance(x, PeriodicContinuedFraction):
        return _certify(_qm_periodic(x), _qm_periodic(x))
    if isinstance(x, float):
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"question_mark_real expects 0 <= x <= 1, got {x}")
        lo, hi, _ = _enclose(Fraction(x), _sum_cap(tol), _FLOAT_DENOMINATOR_CAP)
        cv = _certify(lo, hi)
        # a huge digit beyond the cap leaves a whole cylinder: honest but wide
        return CertifiedValue(cv.value, cv.bound, cv.bound <= tol, cv.exact)
    fr = Fraction(x)
    if not 0 <= fr <= 1:
        raise ValueError(f"question_mark_real expects 0 <= x <= 1, got {fr}")
    lo, hi, _ = _enclose(fr, _sum_cap(tol))
    return _certify(lo, hi)


def question_mark_extended(x, tol: float = 1e-15) -> CertifiedValue:
    """``?`` on [0, inf] via ``?(x) = 2 - ?(1/x)`` for x > 1; ``?(inf) = 2``."""
    if isinstance(x, PeriodicContinuedFraction):
        return question_mark_real(x, tol)
    if isinstance(x, float):
        if math.isinf(x) and x > 0:
            return CertifiedValue(2.0, 0.0, True, Fraction(2))
        if math.isnan(x) or x < 0:
            raise ValueError(f"? is defined on [0, inf], got {x}")
        fr = Fraction(x)
    else:
        fr = Fraction(x)
        if fr < 0:
            raise ValueError(f"? is defined on [0, inf], got {fr}")
    if fr <= 1:
        lo, hi, _ = _enclose(fr, _sum_cap(tol))
        return _certify(lo, hi)
    lo, hi, _ = _enclose(1 / fr, _sum_cap(tol))
    return _certify(2 - hi, 2 - lo)


# ---------------------------------------------------------------------------
# inverse (Conway box function)


def _box_dyadic(y: Fraction) -> Fraction:
    if y == 0:
        return Fraction(0)
    if y == 1:
        return Fraction(1)
    num, den = y.numerator, y.denominator
    k = den.bit_length() - 1
    bits = bin(num)[2:].zfill(k)
    runs = [len(list(g)) for _, g in groupby(bits)]
    # bits = 0^{a1-1} 1^{a2} 0^{a3} 1^{a4} ... ending on a run of ones
    if bits[0] == "1":
        runs = [0] + runs
    digits = [runs[0] + 1] + runs[1:]
    return ContinuedFraction(tuple(digits)).canonical().value()


def box_inverse(y, tol: float = 1e-15) -> CertifiedValue:
    """``x`` with ``?(x) = y`` for ``y`` in [0, 1].

    Dyadic ``y`` (every float is one) are inverted exactly by reading binary
    run-lengths as continued-fraction digits; other rationals are bracketed
    between dyadics until the enclosure is narrower than ``tol``.
    """
    if isinstance(y, DyadicRational):
        y = y.as_fraction()
    y = Fraction(y)
    if not 0 <= y <= 1:
        raise ValueError(f"box_inverse expects 0 <= y <= 1, got {y}")
    d = y.denominator
    if d & (d - 1) == 0:
        x = _box_dyadic(y)
        return _certify(x, x)
    bits = max(64, _sum_cap(tol))
    while True:
        scale = 1 << bits
        lo = Fraction(math.floor(y * scale), scale)
        hi = Fraction(math.ceil(y * scale), scale)
        x_lo, x_hi = _box_dyadic(lo), _box_dyadic(hi)
        if (x_hi - x_lo) / 2 <= tol or bits > 1 << 16:
            cv = _certify(x_lo, x_hi)
            return CertifiedValue(cv.value, cv.bound, (x_hi - x_lo) / 2 <= tol)
        bits *= 2


def holder_bound(x: float, y: float, constant: float = HOLDER_CONSTANT) -> float:
    """``C |x - y|**alpha`` with the golden-ratio Hölder exponent."""
    return constant * abs(float(x) - float(y)) ** HOLDER_EXPONENT
