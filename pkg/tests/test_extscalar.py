import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from seriesroot.errors import ExponentSaturationError
from seriesroot.extscalar import EXP_MAX, ExtScalar, ONE, ZERO

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)
exps = st.integers(min_value=-(10**12), max_value=10**12)
ext = st.builds(ExtScalar, cplx, exps)


def test_normalized_mantissa():
    x = ExtScalar(12.0, 3)
    assert x.mantissa == 1.5 and x.exponent == 6
    assert x.to_complex() == 96.0


def test_zero_is_canonical():
    assert ExtScalar(0, 50) == ZERO
    assert (ONE - ONE).is_zero()


@given(ext)
def test_mantissa_in_unit_octave(x):
    assert x.is_zero() or 1 <= abs(x.mantissa) < 2


@given(cplx, cplx)
def test_agrees_with_double_arithmetic_in_range(a, b):
    xa, xb = ExtScalar.coerce(a), ExtScalar.coerce(b)
    assert abs((xa * xb).to_complex() - a * b) <= 4e-16 * abs(a * b) + 1e-300
    if b != 0:
        assert abs((xa / xb).to_complex() - a / b) <= 4e-16 * abs(a / b) + 1e-300
    scale = max(abs(a), abs(b))
    assert abs((xa + xb).to_complex() - (a + b)) <= 2.3e-16 * scale


def test_beyond_double_range():
    big = ExtScalar(1.0, 10**9)
    assert (big * big).exponent == 2 * 10**9
    assert ((big * big) / big).exponent == 10**9
    assert (big + ONE) == big
    with pytest.raises(OverflowError):
        (big * big).to_complex()


def test_saturation_is_reported():
    x = ExtScalar(1.0, EXP_MAX - 1)
    with pytest.raises(ExponentSaturationError):
        x * x


def test_power_and_log2():
    x = ExtScalar(10.0)
    assert math.isclose((x**20).log2abs(), 20 * math.log2(10), rel_tol=1e-15)
    assert ExtScalar.from_log2(5000.5, 1.0).log2abs() == pytest.approx(5000.5)


def test_matches_high_precision_reference_on_wide_exponents():
    with mpmath.workprec(200):
        a = ExtScalar(1.25 - 0.5j, 700_000)
        b = ExtScalar(-1.75 + 0.25j, -300_000)
        ref = (mpmath.mpc(1.25, -0.5) * mpmath.ldexp(1, 700_000)) * (mpmath.mpc(-1.75, 0.25) * mpmath.ldexp(1, -300_000))
        got = a * b
        val = mpmath.mpc(got.mantissa.real, got.mantissa.imag) * mpmath.ldexp(1, got.exponent)
        assert abs(val / ref - 1) < 4 * 2.0**-52


def test_worked_examples():
    assert ExtScalar(1.0, 10) + ExtScalar(1.0, 10) == ExtScalar(1.0, 11)
    assert (ExtScalar(1.5, 4) + ExtScalar(-1.5, 4)) == ZERO and ZERO.exponent == 0
    assert ExtScalar(1.0, 100) + ExtScalar(1.0, 0) == ExtScalar(1.0, 100)
    p = ExtScalar(1.5, 2) * ExtScalar(1.5, 3)
    assert (p.mantissa, p.exponent) == (1.125, 6)
    assert (ExtScalar(1.3, 7) * ZERO).is_zero()
    assert ExtScalar(1.0, 60) * ExtScalar(1.0, 60) == ExtScalar(1.0, 120)
