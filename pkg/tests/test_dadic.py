from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from clonelab.dadic import BaseMismatch, DadicFraction, dadic_arith
from oracles import dadic_value

bases = st.sampled_from([2, 3, 5])


@st.composite
def pairs(draw):
    d = draw(bases)
    mk = lambda: DadicFraction(d, draw(st.integers(-10**6, 10**6)), draw(st.integers(0, 12)))
    return mk(), mk()


def test_half_plus_half():
    s = dadic_arith("add", DadicFraction(2, 1, 1), DadicFraction(2, 1, 1))
    assert (s.num, s.exp) == (1, 0)


def test_normalization_strips_base():
    p = dadic_arith("mul", DadicFraction(3, 5, 1), DadicFraction(3, 6, 0))
    assert (p.num, p.exp) == (10, 0)


def test_leq_example():
    assert dadic_arith("leq", DadicFraction.parse("7/2^2"), DadicFraction(2, 2))
    assert not dadic_arith("leq", DadicFraction(2, 9, 2), DadicFraction(2, 2))


def test_normal_form():
    assert DadicFraction(2, 0, 7) == DadicFraction(2, 0, 0)
    x = DadicFraction(2, 12, 3)
    assert (x.num, x.exp) == (3, 1)
    assert DadicFraction(3, 2, -2) == DadicFraction(3, 18)


def test_is_positive_is_numerator_sign():
    assert DadicFraction(5, 0).is_positive()
    assert dadic_arith("is_positive", DadicFraction(5, 3, 4))
    assert not dadic_arith("is_positive", DadicFraction(5, -3, 4))


def test_base_mismatch():
    with pytest.raises(BaseMismatch):
        dadic_arith("add", DadicFraction(2, 1), DadicFraction(3, 1))
    with pytest.raises(BaseMismatch):
        DadicFraction(2, 1) <= DadicFraction(3, 1)
    with pytest.raises(BaseMismatch):
        DadicFraction.parse("1/3^1", 2)


def test_parse_and_format():
    assert str(DadicFraction.parse("7/2^2")) == "7/2^2"
    assert str(DadicFraction.parse("8/2^2")) == "2"
    assert DadicFraction.parse("-4", 3) == DadicFraction(3, -4)
    with pytest.raises(ValueError):
        DadicFraction.parse("4")
    with pytest.raises(ValueError):
        DadicFraction.parse("1/2")


def test_unknown_op():
    with pytest.raises(ValueError):
        dadic_arith("div", DadicFraction(2, 1), DadicFraction(2, 1))
    with pytest.raises(ValueError):
        dadic_arith("add", DadicFraction(2, 1))


@settings(max_examples=10_000, deadline=None)
@given(pairs())
def test_agrees_with_rationals(ab):
    a, b = ab
    fa, fb = dadic_value(a), dadic_value(b)
    assert dadic_value(a + b) == fa + fb
    assert dadic_value(a - b) == fa - fb
    assert dadic_value(a * b) == fa * fb
    assert dadic_value(-a) == -fa
    assert (a <= b) == (fa <= fb)
    assert a.is_positive() == (fa >= 0)
    assert a.to_fraction() == fa
    # normal form is unique, so equality is structural
    assert (a == b) == (fa == fb)


def test_to_fraction():
    assert DadicFraction(3, 5, 1).to_fraction() == Fraction(5, 3)
