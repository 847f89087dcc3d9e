from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpc, mpf

from laguerre_asym.liouville import (
    AT_Z1, AT_Z2, CASE1A, CASE1B, CASE2, BranchAmbiguityError, CoalescingRegimeError, PoleError,
    big_S, frame, make_params, phi_of_z, region_check, xi_case1, xi_case2, zeta_from_xi,
)

PARAMS = [(100, 100), (100, Fraction(-61, 2)), (10, 0), (20, Fraction(-11, 2))]


def test_classification():
    assert make_params(100, 100).case_tag == CASE1A
    assert make_params(100, Fraction(-61, 2)).case_tag == CASE1B
    assert make_params(10, 0).case_tag == CASE2
    with pytest.raises(CoalescingRegimeError):
        make_params(10, Fraction(-21, 2) * Fraction(99, 100))
    with pytest.raises(ValueError):
        make_params(0, 1)


def test_turning_points_and_rm():
    p = make_params(100, 100)
    tp = p.turning_points()
    assert mpmath.almosteq(tp.z1 * tp.z2, (p.A - 1) ** 2)
    assert mpmath.almosteq(tp.z1 + tp.z2, 2 * (p.A + 1))
    assert p.r_m == min(tp.z1, tp.z2 - tp.z1)


def test_S_sign_conventions():
    p = make_params(100, 100)
    tp = p.turning_points()
    assert big_S(tp.z1 / 2, p).real > 0
    assert big_S(tp.z2 + 1, p).real < 0
    mid = (tp.z1 + tp.z2) / 2
    assert big_S(mid, p, "above") == mpmath.conj(big_S(mid, p, "below"))


@pytest.mark.parametrize("n,al", PARAMS)
def test_xi_landmarks(n, al):
    p = make_params(n, al)
    tp = p.turning_points()
    if tp.z1 > 0:
        assert xi_case1(tp.z1, p) == 0
        x = xi_case1(tp.z1 / 2, p)
        assert x.imag == 0 and x.real > 0
    top = xi_case1(tp.z2, p, "above")
    assert mpmath.almosteq(top, min(p.A, 1) * mp.pi * 1j, abs_eps=mpf(10) ** -60)
    assert xi_case2(tp.z2 + 1, p).real > 0


@pytest.mark.parametrize("n,al", PARAMS)
@given(x=st.floats(-4, 14), y=st.floats(1e-6, 4))
def test_xi_tilde_shift(n, al, x, y):
    p = make_params(n, al)
    z = mpc(x, y)
    d = xi_case1(z, p) - xi_case2(z, p) - min(p.A, 1) * mp.pi * 1j
    # a wrong branch would be off by a multiple of pi i; near z = 0 rounding grows like 1/|z|
    assert abs(d) < mpf(2) ** (-mp.prec // 2)


@pytest.mark.parametrize("n,al", PARAMS[:2])
@given(x=st.floats(-3, 10), y=st.floats(0.05, 3))
def test_xi_derivative(n, al, x, y):
    # d xi / dz = -f^(1/2) = -S / (2z)
    p = make_params(n, al)
    z = mpc(x, y)
    h = mpf(10) ** -25
    fd = (xi_case1(z + h, p) - xi_case1(z - h, p)) / (2 * h)
    assert abs(fd + big_S(z, p) / (2 * z)) < mpf(10) ** -40


def test_zeta_is_real_between_zero_and_z2():
    p = make_params(100, 100)
    tp = p.turning_points()
    for z in (tp.z1 / 3, (tp.z1 + tp.z2) / 2):
        fr = frame(z, p, AT_Z1)
        assert fr.zeta.imag == 0
    assert frame(tp.z1 / 3, p, AT_Z1).zeta.real > 0
    assert frame((tp.z1 + tp.z2) / 2, p, AT_Z1).zeta.real < 0
    # (2/3) zeta^(3/2) = xi
    fr = frame(mpc(0.3, 0.4), p, AT_Z1)
    assert abs(zeta_from_xi(fr.xi, AT_Z1) - fr.zeta) < mpf(10) ** -60


def test_frame_local_series_matches_closed_form():
    p = make_params(100, 100)
    tp = p.turning_points()
    from laguerre_asym.liouville import local_radius
    r = local_radius(p, AT_Z1)
    for k in (0.99, 1.01):
        z = tp.z1 + r * k * mpmath.expj(1)
        fr = frame(z, p, AT_Z1)
        assert abs(fr.xi - xi_case1(z, p)) < mpf(10) ** -60 or k < 1


def test_errors():
    p = make_params(100, 100)
    tp = p.turning_points()
    with pytest.raises(BranchAmbiguityError):
        xi_case1((tp.z1 + tp.z2) / 2, p, side=None)
    with pytest.raises(PoleError):
        xi_case1(0, p)
    with pytest.raises(PoleError):
        phi_of_z(tp.z1, p)


def test_region_predicates():
    p = make_params(100, 100)
    tp = p.turning_points()
    assert not region_check((tp.z1 + tp.z2) / 2, p, "D2").ok
    assert region_check(tp.z1 / 2, p, "D2").ok
    assert region_check(tp.z1, p, "Dbold").ok
    assert not region_check(tp.z2, p, "Dbold").ok
    assert region_check(tp.z2 * 2, p, "D2tilde").ok
    assert not region_check(tp.z1, p, "Dtilde").ok
    with pytest.raises(ValueError):
        region_check(1, p, "nowhere")
