"""Self-checks run by ``laguerre-asym check``.

Each check returns a CheckOutcome whose margin is observed / tolerance, so a
margin below 1 passes.  Closed forms below are written out independently of
the generator in coefficients.py.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import mp, mpc, mpf

from . import oracle
from .airy import airy
from .coefficients import CoefficientTable, eval_ehat, eval_fhat_ratio, gen_ehat, gen_fhat
from .expansions import (
    AIRY_CAUCHY, CauchyContour, EvalOptions, TruncationOrders, airy_coeff_cauchy, evaluate,
    evaluate_u,
)
from .liouville import AT_Z1, AT_Z2, ShapeParams, make_params, xi_case1, xi_case2


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    margin: float
    detail: str = ""


def params_for_a(a: Fraction, n: int = 10) -> ShapeParams:
    """(n, alpha) with the given a, so that a^2 = 1 + alpha/u exactly."""
    u = Fraction(2 * n + 1, 2)
    return make_params(n, (a * a - 1) * u)


def lambda_closed(a: mpf) -> dict[int, mpf]:
    a2 = a * a
    return {1: -(1 + a2) / (48 * a2),
            3: 7 * (1 + a2 ** 3) / (5760 * a2 ** 3),
            5: -31 * (1 + a2 ** 5) / (80640 * a2 ** 5)}


def mu_closed(a: mpf) -> dict[int, mpf]:
    a2 = a * a
    c = abs(a2 - 1)
    return {1: (a2 ** 2 - 6 * a2 + 1) / (48 * a2 * c),
            3: -(7 * a2 ** 6 - 21 * a2 ** 5 + 21 * a2 ** 4 - 30 * a2 ** 3 + 21 * a2 ** 2
                 - 21 * a2 + 7) / (5760 * a2 ** 3 * c ** 3)}


def ehat1_numerator_closed(a: mpf) -> list[mpf]:
    a2 = a * a
    k = 1 / (48 * a2)
    return [k * (a2 - 1) ** 2 * ((a2 - 1) ** 2 - 4 * a2), -3 * k * (a2 + 1) ** 3,
            3 * k * (a2 ** 2 + 6 * a2 + 1), -k * (a2 + 1)]


def _rel(x, y) -> mpf:
    return abs(x - y) / abs(y) if y != 0 else abs(x)


def check_constants(tol: float = 1e-30) -> CheckOutcome:
    worst = mpf(0)
    for a in (Fraction(1, 2), Fraction(6, 5), Fraction(2), Fraction(5)):
        p = params_for_a(a)
        tab = CoefficientTable.build(p, 5)
        am = mpf(a.numerator) / a.denominator
        for s, v in lambda_closed(am).items():
            worst = max(worst, _rel(tab.lam[s - 1], v))
        for s, v in mu_closed(am).items():
            worst = max(worst, _rel(tab.mu[s - 1], v))
    return CheckOutcome("lambda/mu closed forms", worst <= tol, float(worst / tol),
                        f"max rel diff {mpmath.nstr(worst, 3)}")


def check_ehat1_numerator(tol: float = 1e-30) -> CheckOutcome:
    worst = mpf(0)
    for a in (Fraction(6, 5), Fraction(2), Fraction(5)):
        p = params_for_a(a)
        num = gen_ehat(1, p)[0].numerator
        ref = ehat1_numerator_closed(mpf(a.numerator) / a.denominator)
        scale = max(abs(c) for c in ref)
        for k, c in enumerate(ref):
            got = num[k] if k < len(num) else mpf(0)
            worst = max(worst, abs(got - c) / scale)
        worst = max([worst] + [abs(c) / scale for c in num[len(ref):]])
    return CheckOutcome("first numerator coefficients", worst <= tol, float(worst / tol),
                        f"max rel diff {mpmath.nstr(worst, 3)}")


def check_derivative_identity(s_max: int = 6, tol_bits: int = 16) -> CheckOutcome:
    """d/dz ehat_s against fhat_s S/(2z), by a five-point difference."""
    worst = mpf(0)
    # truncation h^4 and rounding 2^-prec / h balance at h = 2^(-prec/5)
    h = mpf(2) ** (-mp.prec // 5)
    for n, al in ((100, 100), (100, 0), (20, Fraction(-11, 2))):
        p = make_params(n, al)
        eh = gen_ehat(s_max, p)
        fh = gen_fhat(s_max, p)
        for z in (mpc("0.3", "0.7"), mpc("7.5", "2"), mpc("-1.5", "0.25")):
            f = [eval_ehat(eh, z + k * h, p) for k in (-2, -1, 1, 2)]
            want = eval_fhat_ratio(fh, z, p)
            for s in range(s_max):
                fd = (f[0][s] - 8 * f[1][s] + 8 * f[2][s] - f[3][s]) / (12 * h)
                worst = max(worst, _rel(fd, want[s]))
    tol = mpf(2) ** (-(4 * mp.prec) // 5 + tol_bits)
    return CheckOutcome("derivative identity", worst <= tol, float(worst / tol),
                        f"max rel diff {mpmath.nstr(worst, 3)}")


def check_even_constants(s_max: int = 12, tol_bits: int = 32) -> CheckOutcome:
    worst = mpf(0)
    for a in (Fraction(1, 2), Fraction(6, 5), Fraction(3)):
        tab = CoefficientTable.build(params_for_a(a), s_max)
        for seq in (tab.lam, tab.mu):
            scale = max(abs(v) for v in seq)
            for s in range(2, s_max + 1, 2):
                worst = max(worst, abs(seq[s - 1]) / scale)
    tol = mpf(2) ** (-mp.prec + tol_bits)
    return CheckOutcome("even-order constants vanish", worst <= tol, float(worst / tol),
                        f"max |even| / max |odd| {mpmath.nstr(worst, 3)}")


def check_schwarz() -> CheckOutcome:
    bad = []
    pts = (mpc("0.2", "0.3"), mpc("3", "0.5"), mpc("12", "4"), mpc("-2", "1"))
    for n, al in ((10, 0), (100, 100), (20, Fraction(-11, 2))):
        p = make_params(n, al)
        for z in pts:
            for fn in (evaluate, evaluate_u):
                for o in (EvalOptions(method="lg"), EvalOptions(method="airy"), EvalOptions()):
                    try:
                        up = fn(z, p, TruncationOrders(8), o).value
                    except ValueError:
                        continue
                    lo = fn(mpmath.conj(z), p, TruncationOrders(8), o).value
                    if lo != up.conjugate():
                        bad.append((n, al, z, fn.__name__, o.method))
    return CheckOutcome("Schwarz conjugation", not bad, float(len(bad)), f"{len(bad)} mismatches")


def check_xi_shift(tol_bits: int = 16) -> CheckOutcome:
    worst = mpf(0)
    for n, al in ((100, 100), (100, Fraction(-61, 2)), (10, 0)):
        p = make_params(n, al)
        shift = min(p.A, 1) * mp.pi * 1j
        for z in (mpc("0.3", "0.2"), mpc("5", "1"), mpc("-1", "0.5"), mpc("0.05", "1e-3")):
            worst = max(worst, abs(xi_case1(z, p) - xi_case2(z, p) - shift))
    tol = mpf(2) ** (-mp.prec + tol_bits)
    return CheckOutcome("xi shift between the two variables", worst <= tol, float(worst / tol),
                        f"max deviation {mpmath.nstr(worst, 3)}")


def check_airy_connection(tol_bits: int = 24) -> CheckOutcome:
    """Ai(w) + e^(-2 pi i/3) Ai_1(w) + e^(2 pi i/3) Ai_(-1)(w) = 0."""
    worst = mpf(0)
    om = mpmath.expjpi(mpf(2) / 3)
    for w in (mpc("0.5", "0.25"), mpc("-6", "3"), mpc("25", "-10"), mpc("-40", "0"), mpc("3", "60")):
        a0, a1, am = (airy(w, j).ai.to_mpc() for j in (0, 1, -1))
        scale = max(abs(a0), abs(a1), abs(am))
        worst = max(worst, abs(a0 + mpmath.conj(om) * a1 + om * am) / scale)
    tol = mpf(2) ** (-mp.prec + tol_bits)
    return CheckOutcome("Airy three-term connection", worst <= tol, float(worst / tol),
                        f"max residual {mpmath.nstr(worst, 3)}")


def check_oracle_chain(tol_bits: int = 0) -> CheckOutcome:
    """L_n^(alpha) = binom(n+alpha, n) M(-n, alpha+1, x) = (-1)^n U(-n, alpha+1, x) / n!."""
    worst = mpf(0)
    bits = mp.prec
    for n, al, x in ((5, Fraction(1, 2), mpf("1.25")), (12, Fraction(7, 3), mpc("3", "-2")),
                     (20, Fraction(-11, 2), mpf("4.5"))):
        alm = mpf(al.numerator) / al.denominator
        L = oracle.laguerre_exact(n, al, x, bits).to_mpc()
        M = oracle.kummer_m(-n, alm + 1, x, bits).to_mpc() * mpmath.binomial(n + alm, n)
        U = oracle.u_exact(-n, alm + 1, x, 0, bits).to_mpc() * (-1) ** n / mpmath.factorial(n)
        worst = max(worst, _rel(M, L), _rel(U, L))
    tol = mpf(2) ** (-bits // 2 + tol_bits)
    return CheckOutcome("oracle identity chain", worst <= tol, float(worst / tol),
                        f"max rel diff {mpmath.nstr(worst, 3)}")


def check_quadrature(tol: float = 1e-30) -> CheckOutcome:
    """Doubling the contour nodes changes the Cauchy coefficients negligibly."""
    worst = mpf(0)
    for al in (0, 100):
        p = make_params(100, al)
        tp = p.turning_points()
        z = tp.z2 + (tp.z2 - tp.z1) / 10
        for m in (4, 8):
            A1, B1 = airy_coeff_cauchy(z, p, m, AT_Z2, CauchyContour(AT_Z2, None, 100))
            A2, B2 = airy_coeff_cauchy(z, p, m, AT_Z2, CauchyContour(AT_Z2, None, 200))
            worst = max(worst, _rel(A1, A2), _rel(B1, B2))
    return CheckOutcome("trapezoidal convergence 100 -> 200 nodes", worst <= tol,
                        float(worst / tol), f"max rel change {mpmath.nstr(worst, 3)}")


def check_turning_point_finite() -> CheckOutcome:
    bad = []
    for n, al in ((100, 0), (100, 100)):
        p = make_params(n, al)
        tp = p.turning_points()
        for z in ((tp.z1, tp.z2) if p.supports_case1 else (tp.z2,)):
            r = evaluate(z, p)
            v = r.to_mpc()
            if r.method != AIRY_CAUCHY or not (mpmath.isfinite(v.real) and mpmath.isfinite(v.imag)):
                bad.append((n, al, z))
    return CheckOutcome("finite values at turning points", not bad, float(len(bad)),
                        f"{len(bad)} failures")


ALL_CHECKS: tuple[Callable[[], CheckOutcome], ...] = (
    check_constants, check_ehat1_numerator, check_derivative_identity, check_even_constants,
    check_schwarz, check_xi_shift, check_airy_connection, check_oracle_chain, check_quadrature,
    check_turning_point_finite,
)


def run_all() -> list[CheckOutcome]:
    out = []
    for chk in ALL_CHECKS:
        try:
            out.append(chk())
        except Exception as exc:  # a crash is a failed check, not an aborted run
            out.append(CheckOutcome(chk.__name__, False, float("inf"), f"{type(exc).__name__}: {exc}"))
    return out
