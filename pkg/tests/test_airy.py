import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpc, mpf

from laguerre_asym.airy import ai, airy, aip, switch_radius

REF_POINTS = [mpc(0), mpc("0.5", "0.25"), mpc(-3, 1), mpc(12, -5), mpc(-30, 0), mpc(4, 45),
              mpc(-60, "1e-3"), mpc(200, 150)]


def close(x, y, bits=20):
    return abs(x - y) <= mpf(2) ** (-mp.prec + bits) * max(abs(y), mpf(2) ** -mp.prec)


@pytest.mark.parametrize("w", REF_POINTS)
def test_matches_mpmath(w):
    # mpmath.airyai is used only as an independent reference here
    assert close(ai(w), mpmath.airyai(w), 40)
    assert close(aip(w), mpmath.airyai(w, derivative=1), 40)


@given(st.floats(-80, 80), st.floats(-80, 80))
def test_three_term_connection(x, y):
    w = mpc(x, y)
    om = mpmath.expjpi(mpf(2) / 3)
    a0, a1, am = (airy(w, j).ai.to_mpc() for j in (0, 1, -1))
    scale = max(abs(a0), abs(a1), abs(am))
    assert abs(a0 + mpmath.conj(om) * a1 + om * am) <= mpf(2) ** (-mp.prec + 32) * scale


@given(st.floats(-40, 40), st.floats(-40, 40))
def test_wronskian(x, y):
    # W{Ai, Ai_1} = e^(pi i/6) / (2 pi), derivatives with respect to w
    w = mpc(x, y)
    v0, v1 = airy(w, 0), airy(w, 1)
    W = v0.ai.to_mpc() * v1.aip.to_mpc() - v0.aip.to_mpc() * v1.ai.to_mpc()
    want = mpmath.expjpi(mpf(1) / 6) / (2 * mp.pi)
    scale = abs(v0.ai.to_mpc() * v1.aip.to_mpc()) + abs(v0.aip.to_mpc() * v1.ai.to_mpc())
    assert abs(W - want) <= mpf(2) ** (-mp.prec + 32) * max(scale, 1)


def test_rotation_includes_chain_factor():
    w = mpc(2, 1)
    rot = mpmath.expjpi(-mpf(2) / 3)
    assert close(aip(w, 1), rot * mpmath.airyai(w * rot, derivative=1), 40)


def test_scaled_form_survives_huge_arguments():
    w = mpc(10) ** 6
    v = airy(w, want_scaled=True)
    # Ai(w) exp((2/3) w^(3/2)) ~ 1 / (2 sqrt(pi) w^(1/4))
    lead = 1 / (2 * mpmath.sqrt(mp.pi) * w ** mpf(0.25))
    assert abs(v.ai.to_mpc() / lead - 1) < 1e-8
    # |Ai(10^6)| ~ 2^(-(2/3) 10^9 / ln 2), far outside double range
    assert airy(w).ai.exponent < -9 * 10 ** 8


def test_bad_rotation():
    with pytest.raises(ValueError):
        airy(1, 2)


def test_switch_radius_grows_with_precision():
    assert switch_radius(512) > switch_radius(128)
