from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpc, mpf

from laguerre_asym.checks import ehat1_numerator_closed, lambda_closed, mu_closed, params_for_a
from laguerre_asym.coefficients import (
    CoefficientTable, airy_aux_constants, eval_ehat, eval_fhat_ratio, gen_ehat, gen_fhat, lambda_mu,
)
from laguerre_asym.liouville import make_params

A_VALUES = [Fraction(1, 2), Fraction(6, 5), Fraction(2), Fraction(5)]


def rel(x, y):
    return abs(x - y) / abs(y)


@pytest.mark.parametrize("a", A_VALUES)
def test_lambda_mu_closed_forms(a):
    lam, mu = lambda_mu(5, params_for_a(a))
    am = mpf(a.numerator) / a.denominator
    for s, v in lambda_closed(am).items():
        assert rel(lam[s - 1], v) < 1e-30
    for s, v in mu_closed(am).items():
        assert rel(mu[s - 1], v) < 1e-30


@pytest.mark.parametrize("a", A_VALUES)
def test_even_constants_vanish(a):
    lam, mu = lambda_mu(10, params_for_a(a))
    for seq in (lam, mu):
        scale = max(abs(v) for v in seq)
        assert all(abs(seq[s - 1]) < scale * mpf(2) ** (-mp.prec + 32) for s in range(2, 11, 2))


@pytest.mark.parametrize("a", A_VALUES[1:])
def test_first_numerator(a):
    num = gen_ehat(1, params_for_a(a))[0].numerator
    ref = ehat1_numerator_closed(mpf(a.numerator) / a.denominator)
    scale = max(abs(c) for c in ref)
    assert len([c for c in num if abs(c) > scale * 1e-40]) == 4
    for k in range(4):
        assert abs(num[k] - ref[k]) <= 1e-30 * scale


def test_shapes():
    p = make_params(100, 100)
    eh = gen_ehat(6, p)
    fh = gen_fhat(6, p)
    assert [e.S_power for e in eh] == [3 * s for s in range(1, 7)]
    assert [f.S_power for f in fh] == [3 * s + 2 for s in range(1, 7)]
    assert [e.parity for e in eh[:2]] == ["odd", "even"]


@pytest.mark.parametrize("n,al", [(100, 100), (100, 0), (20, Fraction(-11, 2))])
@given(x=st.floats(-3, 12), y=st.floats(0.05, 3))
def test_derivative_identity(n, al, x, y):
    p = make_params(n, al)
    eh, fh = gen_ehat(5, p), gen_fhat(5, p)
    z = mpc(x, y)
    h = mpf(10) ** -22
    up, dn = eval_ehat(eh, z + h, p), eval_ehat(eh, z - h, p)
    want = eval_fhat_ratio(fh, z, p)
    for s in range(5):
        assert abs((up[s] - dn[s]) / (2 * h) - want[s]) <= 1e-25 * (abs(want[s]) + abs(up[s]))


def test_limits_define_lambda_and_mu():
    p = make_params(100, 100)
    tab = CoefficientTable.build(p, 5)
    # S ~ -z at infinity, so it is E_s = (-1)^s ehat_s that tends to lambda_s
    big = mpc(10) ** 30
    far = tab.e_from_S(big, _S(p, big))
    near = tab.ehat_from_S(mpc("1e-30"), _S(p, mpc("1e-30")))
    for s in range(5):
        assert abs(far[s] - tab.lam[s]) < 1e-25
        assert abs(near[s] - tab.mu[s]) < 1e-25
    # E_s = (-1)^s ehat_s
    z = mpc(0.3, 0.2)
    S = _S(p, z)
    assert all(e == (-1) ** (s + 1) * h
               for s, (e, h) in enumerate(zip(tab.e_from_S(z, S), tab.ehat_from_S(z, S))))


def _S(p, z):
    from laguerre_asym.liouville import big_S
    return big_S(z, p)


def test_airy_aux_constants():
    a, at = airy_aux_constants(6)
    assert a[:2] == (Fraction(5, 72), Fraction(5, 72))
    assert at[:2] == (Fraction(-7, 72), Fraction(-7, 72))
    # b_3 = (3/2) b_2 + (1/2) b_1^2
    assert a[2] == Fraction(3, 2) * a[1] + a[0] ** 2 / 2
    with pytest.raises(ValueError):
        airy_aux_constants(1)
