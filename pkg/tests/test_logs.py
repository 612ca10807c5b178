from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from slopelab.logs import Enclosure, LogExpr, LogRational, harmonic_tail, render

mpmath.mp.dps = 60

positive = st.fractions(min_value=Fraction(1, 50), max_value=50, max_denominator=50).filter(lambda q: q > 0)
logs = st.builds(LogRational, positive, st.integers(1, 6))
consts = st.fractions(min_value=-3, max_value=3, max_denominator=12)


def mp(x):
    if isinstance(x, LogRational):
        return mpmath.log(mpmath.mpf(x.q.numerator) / x.q.denominator) / (2 * x.d)
    return mp(x.log) + mpmath.mpf(x.c.numerator) / x.c.denominator


def test_canonical_form():
    assert LogRational.half_log(4) == LogRational.log(2)
    assert LogRational(Fraction(9), 4) == LogRational(Fraction(3), 2)
    assert LogRational(Fraction(1), 7).d == 1
    with pytest.raises(ValueError):
        LogRational(Fraction(0))


@given(logs, logs)
def test_sum_and_difference(a, b):
    assert abs(mp(a + b) - (mp(a) + mp(b))) < mpmath.mpf(10) ** -40
    assert (a - b) + b == a


@given(logs, st.fractions(min_value=-4, max_value=4, max_denominator=7))
def test_scale(a, r):
    assert abs(mp(a.scale(r)) - mp(a) * mpmath.mpf(r.numerator) / r.denominator) < mpmath.mpf(10) ** -40


@given(logs, logs)
def test_order_matches_high_precision(a, b):
    x, y = mp(a), mp(b)
    if x == y:
        assert a == b
    else:
        assert (a < b) == (x < y)


@given(logs, consts)
def test_logexpr_sign(a, c):
    e = LogExpr(a, c)
    v = mp(e)
    if a.is_zero() and c == 0:
        assert e.sign() == 0
    else:
        # log q is transcendental for q != 1, so the sum is never zero then
        assert e.sign() == (1 if v > 0 else -1)


def test_logexpr_orders_against_rationals():
    assert LogRational.log(3) < Fraction(11, 10)
    assert LogRational.log(3) > Fraction(109, 100)
    assert LogExpr.of(Fraction(1, 2)) == Fraction(1, 2)


def test_render():
    assert render(LogRational.half_log(Fraction(1, 3))) == "-1/2*log(3)"
    assert render(LogRational.log(Fraction(1, 3)).scale(Fraction(1, 4))) == "-1/4*log(3)"
    assert render(LogRational.log(4)) == "2*log(2)"
    assert render(LogRational.zero()) == "0"
    assert render(LogRational.log(2) + Fraction(1, 2)) == "log(2) + 1/2"


def test_harmonic_tail():
    assert harmonic_tail(1) == 0
    assert harmonic_tail(3) == Fraction(5, 6)


def test_enclosure():
    e = Enclosure(LogRational.log(2), LogRational.log(3))
    assert not e.is_exact
    assert Enclosure.exact(Fraction(1)).is_exact
    d = e - Enclosure.exact(LogRational.log(2))
    assert d.lo == 0 and d.hi == LogRational.log(Fraction(3, 2))
