import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from questionmark.minkowski import (
    GOLDEN,
    HOLDER_CONSTANT,
    HOLDER_EXPONENT,
    SQRT2_MINUS_1,
    ContinuedFraction,
    DyadicRational,
    box_inverse,
    cf_encode,
    cf_encode_real,
    holder_bound,
    question_mark,
    question_mark_exact,
    question_mark_extended,
    question_mark_real,
)

unit_rationals = st.builds(
    lambda q, p: Fraction(p % (q + 1), q),
    st.integers(1, 10**6),
    st.integers(0, 10**6),
)


def brute_qm(x: Fraction, depth: int = 60) -> Fraction:
    """?(x) by walking the Stern-Brocot tree: left/right moves are binary digits."""
    lo_p, lo_q, hi_p, hi_q = 0, 1, 1, 1
    lo_v, hi_v = Fraction(0), Fraction(1)
    for _ in range(depth):
        mp, mq = lo_p + hi_p, lo_q + hi_q
        mv = (lo_v + hi_v) / 2
        m = Fraction(mp, mq)
        if x == m:
            return mv
        if x < m:
            hi_p, hi_q, hi_v = mp, mq, mv
        else:
            lo_p, lo_q, lo_v = mp, mq, mv
    if x == Fraction(lo_p, lo_q):
        return lo_v
    if x == Fraction(hi_p, hi_q):
        return hi_v
    raise AssertionError("depth too small")


def test_cf_encode_examples():
    assert cf_encode(Fraction(1, 2)).digits == (2,)
    assert cf_encode(Fraction(2, 7)).digits == (3, 2)
    assert cf_encode(0).digits == ()
    assert cf_encode(1).digits == (1,)


def test_cf_encode_rejects_out_of_range():
    with pytest.raises(ValueError):
        cf_encode(Fraction(3, 2))
    with pytest.raises(ValueError):
        cf_encode(Fraction(-1, 5))
    with pytest.raises(ValueError):
        ContinuedFraction((2, 0))


def test_key_values():
    assert question_mark(Fraction(1, 2)).as_fraction() == Fraction(1, 2)
    assert question_mark(ContinuedFraction((3, 2))).as_fraction() == Fraction(3, 16)
    assert question_mark(Fraction(1, 3)).as_fraction() == Fraction(1, 4)
    assert question_mark(0).as_fraction() == 0
    assert question_mark(1).as_fraction() == 1
    assert question_mark_exact(SQRT2_MINUS_1) == Fraction(2, 5)
    assert question_mark_exact(GOLDEN) == Fraction(2, 3)


def test_dyadic_normalized():
    d = question_mark(Fraction(2, 7))
    assert d.numerator % 2 == 1
    assert d.as_fraction().denominator == 1 << d.exponent
    assert isinstance(d, DyadicRational)


@given(unit_rationals)
@settings(max_examples=300, deadline=None)
def test_against_stern_brocot_walk(x):
    if x.denominator > 40:
        x = Fraction(x.numerator % 41, 41)
    assert question_mark_exact(x) == brute_qm(x)


@given(st.lists(st.integers(1, 30), min_size=1, max_size=12))
def test_representation_invariance(digits):
    if len(digits) >= 1 and digits[-1] >= 2:
        alt = digits[:-1] + [digits[-1] - 1, 1]
        assert question_mark(ContinuedFraction(tuple(digits))) == question_mark(ContinuedFraction(tuple(alt)))
    assert ContinuedFraction((2,)).value() == ContinuedFraction((1, 1)).value()
    assert question_mark(ContinuedFraction((2,))) == question_mark(ContinuedFraction((1, 1)))


@given(unit_rationals)
@settings(max_examples=500, deadline=None)
def test_functional_equations(x):
    qm = question_mark_exact
    assert qm(x) == 1 - qm(1 - x)
    assert qm(x / (x + 1)) == qm(x) / 2
    if x > 0:
        assert qm(x) + qm(1 / x) == 2


@given(unit_rationals, unit_rationals)
@settings(max_examples=300, deadline=None)
def test_monotone(x, y):
    if x == y:
        return
    lo, hi = min(x, y), max(x, y)
    assert question_mark_exact(lo) < question_mark_exact(hi)


@given(unit_rationals)
@settings(max_examples=200, deadline=None)
def test_box_inverse_round_trip(x):
    y = question_mark(x).as_fraction()
    r = box_inverse(y)
    assert r.exact == x


def test_box_inverse_examples():
    assert box_inverse(Fraction(1, 2)).exact == Fraction(1, 2)
    assert box_inverse(Fraction(1, 4)).exact == Fraction(1, 3)
    g = box_inverse(Fraction(2, 3), tol=1e-14)
    assert abs(g.value - (math.sqrt(5) - 1) / 2) <= g.bound + 1e-15
    assert g.converged


def test_extended():
    assert question_mark_extended(Fraction(2)).exact == Fraction(3, 2)
    assert question_mark_extended(math.inf).value == 2.0
    assert question_mark_extended(1).exact == 1
    with pytest.raises(ValueError):
        question_mark_extended(-0.5)


def test_real_enclosures():
    r = question_mark_real(math.sqrt(2) - 1, 1e-12)
    assert r.contains(0.4, slack=1e-12)
    g = question_mark_real(GOLDEN, 1e-12)
    assert g.value == 2 / 3 and g.bound <= 1e-16
    assert question_mark_real(1.0).value == 1.0


def test_real_truncation_reported():
    # 0.1 as a double is [0; 9, 1, 3002399751580330, ...]: the cap cuts the
    # huge digit and the whole cylinder remains
    cf = cf_encode_real(0.1)
    assert cf.is_truncated and cf.digits == (9, 1)
    r = question_mark_real(0.1)
    assert not r.converged
    # the exact value has a 2^(3e15) denominator; the digit-sum cut is tight
    exact = question_mark_extended(Fraction(0.1), 1e-15)
    assert exact.bound <= 1e-15
    assert r.agrees_with(exact)


def test_real_agrees_with_extended():
    rng = random.Random(3)
    for _ in range(200):
        x = rng.random()
        a = question_mark_real(x, 1e-13)
        b = question_mark_extended(x, 1e-13)
        assert a.agrees_with(b)


def test_decay_at_zero():
    for k in range(1, 200):
        assert question_mark_exact(Fraction(1, k)) <= Fraction(2, 2**k)


def test_holder():
    assert holder_bound(0.3, 0.3) == 0
    assert holder_bound(0, 1) == HOLDER_CONSTANT
    assert HOLDER_EXPONENT == pytest.approx(0.7202100452, abs=1e-9)
    rng = random.Random(1)
    worst = 0.0
    for _ in range(100_000):
        x, y = rng.random(), rng.random()
        if x == y:
            continue
        qx = question_mark_extended(x, 1e-12).value
        qy = question_mark_extended(y, 1e-12).value
        worst = max(worst, abs(qx - qy) / abs(x - y) ** HOLDER_EXPONENT)
    assert worst <= HOLDER_CONSTANT
