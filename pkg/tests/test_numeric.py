import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpc, mpf

from laguerre_asym.numeric import (
    DEFAULT_BITS_ENV, DomainError, PrecisionContext, ScaledComplex, clog_lower, clog_upper,
    default_bits, log_gamma, scaled_exp, sum_scaled,
)

finite = st.floats(min_value=-1e300, max_value=1e300, allow_nan=False, allow_infinity=False)


@given(finite, finite)
def test_normalize_round_trips_exactly(re, im):
    v = mpc(re, im)
    s = ScaledComplex.normalize(v)
    assert s.to_mpc() == v
    if v != 0:
        assert 1 <= abs(s.mantissa) < 2


@given(st.floats(min_value=-1e7, max_value=1e7), st.floats(min_value=-50, max_value=50))
def test_scaled_exp_log_inverse(x, y):
    w = mpc(x, y)
    s = scaled_exp(w)
    back = s.log()
    assert abs(back.real - w.real) <= mpf(2) ** (-mp.prec + 40) * max(1, abs(w.real))
    # imaginary part agrees modulo 2 pi
    k = mpmath.nint((back.imag - w.imag) / (2 * mp.pi))
    assert abs(back.imag - w.imag - 2 * mp.pi * k) < mpf(10) ** -60


def test_scaled_exp_beyond_any_float():
    s = scaled_exp(mpf(10) ** 6)
    assert s.exponent > 1_000_000
    assert mpmath.almosteq(s.abs_log2(), mpf(10) ** 6 / mpmath.ln2, rel_eps=mpf(10) ** -60)


def test_add_reports_cancellation():
    a = ScaledComplex.normalize(mpf(1) + mpf(2) ** -100)
    b = ScaledComplex.normalize(mpf(-1))
    total, lost = a.add(b)
    assert total.to_mpc() == mpf(2) ** -100
    assert lost == 100


def test_add_aligns_distant_exponents():
    a = ScaledComplex(mpc(1), 5000)
    b = ScaledComplex(mpc(1), 4990)
    total, lost = a.add(b)
    assert total.to_mpc() == mpf(2) ** 5000 + mpf(2) ** 4990
    assert lost == 0


def test_sum_scaled_matches_plain_sum():
    vals = [mpc(3, 1), mpc(-2, 5), mpc(mpf(2) ** 70, 0)]
    total, _ = sum_scaled([ScaledComplex.normalize(v) for v in vals])
    assert total.to_mpc() == sum(vals)


def test_extreme_exponent_gap_does_not_blow_up():
    s = ScaledComplex.normalize(mpc(mpf(2) ** 10 ** 7, mpf(2) ** -10 ** 7))
    assert 1 <= abs(s.mantissa) < 2


def test_branch_logs_on_negative_axis():
    assert clog_upper(-2).imag == mp.pi
    assert clog_lower(-2).imag == -mp.pi
    assert clog_upper(mpc(-2, "-1e-70")).imag > 3
    assert clog_lower(mpc(-2, "1e-70")).imag < -3


def test_log_gamma_domain():
    assert mpmath.almosteq(log_gamma(5), mpmath.log(24))
    with pytest.raises(DomainError):
        log_gamma(0)


def test_precision_context():
    ctx = PrecisionContext(128)
    with ctx.activate():
        assert mp.prec == 160
    assert ctx.doubled().mantissa_bits == 256
    with pytest.raises(ValueError):
        PrecisionContext(32)


def test_default_bits_env(monkeypatch):
    monkeypatch.delenv(DEFAULT_BITS_ENV, raising=False)
    assert default_bits() == 256
    monkeypatch.setenv(DEFAULT_BITS_ENV, "384")
    assert default_bits() == 384
    monkeypatch.setenv(DEFAULT_BITS_ENV, "16")
    with pytest.raises(ValueError):
        default_bits()


def test_decimal_form():
    m10, e10 = ScaledComplex.normalize(mpc("1234.5", "-2")).to_decimal()
    assert e10 == 3 and 1 <= abs(m10) < 10
    assert "e3" in ScaledComplex.normalize(mpc("1234.5")).format(8)
