"""Asymptotic evaluators for L_n^(alpha)(uz), U(n+alpha+1, alpha+1, uz e^(-pi i))
and Olver's N(-n, alpha+1, uz).

Every evaluator works on the closed upper half-plane and reflects its result
for lower-half-plane input, so real-symmetric functions are exactly
Schwarz-symmetric.  For U the reflected value is U on the e^(+pi i) sheet.

Two families are implemented: Liouville-Green (exponential) forms, valid
away from turning points, and Airy forms, valid through a turning point.
Near a turning point the Airy coefficient functions are evaluated by a
trapezoidal Cauchy integral over a circle, because their termwise series
suffers cancellation there.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Optional

import mpmath
from mpmath import mp, mpc, mpf

from .airy import airy
from .coefficients import CoefficientTable
from .liouville import (
    AT_Z1, AT_Z2, CASE1A, CASE1B, CASE2, LiouvilleFrame, ShapeParams, frame, region_check,
    require_case1,
)
from .numeric import Number, ScaledComplex, scaled_exp

LG, AIRY_DIRECT, AIRY_CAUCHY = "LG", "AiryDirect", "AiryCauchy"


class TurningPointProximityError(ValueError):
    """The requested series is unstable this close to a turning point."""


class InvalidRegionError(ValueError):
    pass


class ContourError(ValueError):
    pass


@dataclass(frozen=True)
class TruncationOrders:
    N: int = 16
    m: Optional[int] = None

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.m is not None and self.m < 1:
            raise ValueError("m must be >= 1")

    @property
    def m_eff(self) -> int:
        return self.m if self.m is not None else max(1, self.N // 2)

    @property
    def s_needed(self) -> int:
        return max(self.N, 2 * self.m_eff, 2)


@dataclass(frozen=True)
class CauchyContour:
    """Circle about a turning point; radius None means the default.

    Defaults: 0.7 (z2 - z1) about z2, 0.7 min(z1, z2 - z1) about z1.
    """

    center: str = AT_Z2
    radius: Optional[mpf] = None
    points_per_half: int = 100

    def resolve(self, p: ShapeParams) -> tuple[mpf, mpf]:
        tp = p.turning_points()
        if self.center == AT_Z1:
            c, limit = tp.z1, p.r_m
            r = 7 * limit / 10 if self.radius is None else mpf(self.radius)
            if r >= limit:
                raise ContourError("contour about z1 must have radius below min(z1, z2 - z1)")
        else:
            c, limit = tp.z2, tp.z2 - tp.z1
            r = 7 * limit / 10 if self.radius is None else mpf(self.radius)
            if r >= limit or r >= tp.z2:
                raise ContourError("contour about z2 must stay right of z1 and of 0")
        if r <= 0:
            raise ContourError("contour radius must be positive")
        return c, r


@dataclass(frozen=True)
class ExpansionResult:
    value: ScaledComplex
    method: str
    orders: TruncationOrders
    est_error: mpf
    region_ok: bool
    case: str = ""
    function: str = "L"
    diagnostics: dict = field(default_factory=dict, compare=False)

    def to_mpc(self) -> mpc:
        return self.value.to_mpc()


@dataclass(frozen=True)
class EvalOptions:
    method: str = "auto"          # auto | lg | airy | cauchy
    case: str = "auto"            # auto | 1a | 1b | 2
    contour_points: int = 100
    contour_radius: Optional[mpf] = None
    lg_switch: float = 1.5        # L-G only beyond this many length scales
    cauchy_switch: float = 0.5    # Cauchy within this many turning-point length scales
    side: str = "above"


# -- shared pieces -----------------------------------------------------------

@lru_cache(maxsize=32)
def _table(p: ShapeParams, s_max: int, prec: int) -> CoefficientTable:
    with mpmath.workprec(prec):
        return CoefficientTable.build(p, s_max)


def table_for(p: ShapeParams, s_max: int = 16) -> CoefficientTable:
    return _table(p, max(s_max, 2), mp.prec)


def _reflect(z: Number) -> tuple[mpc, bool]:
    z = mpc(z)
    return (mpmath.conj(z), True) if z.imag < 0 else (z, False)


def _check_order(tab: CoefficientTable, s: int) -> None:
    if s > tab.s_max:
        raise ValueError(f"order {s} exceeds the coefficient table ({tab.s_max})")


def _lg_sum(E: list, const: list, u: mpf, N: int, alternate: bool) -> tuple[mpc, mpf]:
    """Sum of the first N terms; the estimate is the larger of the last kept and first dropped."""
    acc = mpc(0)
    last = mpf(0)
    for s in range(1, N + 2):
        if s > len(E) or s > len(const):
            break
        term = (E[s - 1] - const[s - 1]) / u ** s
        if alternate and s % 2:
            term = -term
        if s <= N:
            acc += term
        if s >= N:
            last = max(last, abs(term))
    return acc, last


def _odd_sum(const: list, u: mpf, m: int) -> mpc:
    return sum((const[2 * s] / u ** (2 * s + 1) for s in range(m)), mpf(0))


def _odd_tail(const: list, u: mpf, m: int) -> mpf:
    """Size of the first odd constant left out of _odd_sum."""
    return abs(const[2 * m]) / u ** (2 * m + 1) if 2 * m < len(const) else mpf(0)


def _log_z(z: mpc) -> mpc:
    return mpmath.log(z)


def _result(logv: mpc, flip: bool, method: str, orders: TruncationOrders, est, region_ok: bool,
            case: str, function: str, **diag) -> ExpansionResult:
    val = scaled_exp(logv)
    if flip:
        val = val.conjugate()
    # the truncated sums sit in an exponent: a dropped delta costs e^|delta| - 1
    est = mpmath.expm1(mpf(est))
    return ExpansionResult(val, method, orders, est, bool(region_ok), case, function, dict(diag))


def _prepare(z: Number, p: ShapeParams, variant: str, side: str) -> tuple[LiouvilleFrame, bool]:
    z = mpc(z)
    fr = frame(z, p, variant, side)
    return fr, fr.conjugated


# -- Liouville-Green forms -------------------------------------------------------

def _log_pref_L1a(p: ShapeParams, z: mpc) -> mpc:
    n, al, u = p.n, p.alpha_mp, p.u_mp
    lg = mpmath.loggamma
    return (lg(n + al + 1) - lg(n + 1) - lg(al + 1) + mpmath.log(al / u) / 2
            + u / 2 * mpmath.log(u / (u + al))
            + al / 2 * (mpmath.log(al * al / ((u + al) * u)) - 1 - _log_z(z)))


def _log_pref_N(p: ShapeParams, z: mpc) -> mpc:
    n, al, u = p.n, p.alpha_mp, p.u_mp
    return (-mpmath.loggamma(1 - al) + mpmath.log(abs(al) / u) / 2
            + u / 2 * mpmath.log((u + al) / u)
            + al / 2 * (mpmath.log((u + al) / (al * al * u)) + 1 - _log_z(z)))


def _log_pref_L2(p: ShapeParams, z: mpc) -> mpc:
    n, al, u = p.n, p.alpha_mp, p.u_mp
    return (1j * mp.pi * (n % 2) + (u - 1) / 2 * mpmath.log(u) + (u + al) / 2 * mpmath.log(u + al)
            - u - al / 2 - mpmath.loggamma(n + 1) - al / 2 * (mpmath.log(u) + _log_z(z)))


def _log_pref_U(p: ShapeParams, z: mpc) -> mpc:
    """Common factor u^(-(u+1)/2) (u+alpha)^(-(u+alpha)/2) (uz)^(-alpha/2) e^(u+alpha/2)."""
    al, u = p.alpha_mp, p.u_mp
    return (u + al / 2 - (u + 1) / 2 * mpmath.log(u) - (u + al) / 2 * mpmath.log(u + al)
            - al / 2 * (mpmath.log(u) + _log_z(z)))


def _exp_small(fr: LiouvilleFrame, u: mpf) -> mpf:
    """Relative size of the other exponential, which a Stokes line can switch on."""
    return mpmath.exp(-2 * u * abs(fr.xi.real))


def _lg_core(fr: LiouvilleFrame, tab: CoefficientTable, N: int, const: list, alternate: bool):
    _check_order(tab, N)
    if fr.S == 0:
        raise TurningPointProximityError("L-G forms are singular at a turning point")
    E = tab.e_from_S(fr.z, fr.S, min(N + 1, tab.s_max))
    return _lg_sum(E, const, tab.params.u_mp, N, alternate)


def lg_laguerre_case1a(z: Number, p: ShapeParams, N: int = 16, side: str = "above") -> ExpansionResult:
    if p.case_tag != CASE1A:
        raise ValueError("this form needs a^2 >= 1 + delta (alpha > 0)")
    fr, flip = _prepare(z, p, AT_Z1, side)
    tab = table_for(p, N + 1)
    u = p.u_mp
    sm, last = _lg_core(fr, tab, N, list(tab.mu_expansion), True)
    last += _exp_small(fr, u)
    logv = _log_pref_L1a(p, fr.z) - fr.log_S / 2 + u * fr.z / 2 - u * fr.xi + sm
    return _result(logv, flip, LG, TruncationOrders(N), last, region_check(fr.z, p, "D2").ok,
                   CASE1A, "L")


def lg_laguerre_case2(z: Number, p: ShapeParams, N: int = 16, side: str = "above") -> ExpansionResult:
    fr, flip = _prepare(z, p, AT_Z2, side)
    tp = p.turning_points()
    if fr.z.imag == 0 and tp.z1 <= fr.z.real <= tp.z2:
        raise InvalidRegionError("the L-G form about z2 is not valid on [z1, z2]")
    tab = table_for(p, N + 1)
    u = p.u_mp
    sm, last = _lg_core(fr, tab, N, list(tab.lam), True)
    last += _exp_small(fr, u)
    logv = _log_pref_L2(p, fr.z) - fr.log_S / 2 + u * fr.z / 2 - u * fr.xi + sm
    return _result(logv, flip, LG, TruncationOrders(N), last, region_check(fr.z, p, "D2tilde").ok,
                   CASE2, "L")


def _literal_frame(z: mpc, p: ShapeParams, variant: str, side: str) -> LiouvilleFrame:
    """Frame fields at a lower-half-plane point (no reflection)."""
    fr = frame(mpmath.conj(z), p, variant, side)
    cj = mpmath.conj
    return replace(fr, z=cj(fr.z), S=cj(fr.S), log_S=None if fr.log_S is None else cj(fr.log_S),
                   xi=cj(fr.xi), zeta=cj(fr.zeta),
                   log_zeta=None if fr.log_zeta is None else cj(fr.log_zeta), f=cj(fr.f),
                   conjugated=False)


def _u_frame(z: Number, p: ShapeParams, variant: str, side: str, literal: bool):
    z = mpc(z)
    if literal and z.imag < 0:
        return _literal_frame(z, p, variant, side), False, -1
    fr = frame(z, p, variant, side)
    return fr, fr.conjugated, 1


def lg_u_case1(z: Number, p: ShapeParams, N: int = 16, side: str = "above",
               literal: bool = False) -> ExpansionResult:
    """U(n+alpha+1, alpha+1, u z e^(-pi i)) in the upper half-plane (e^(+pi i) below).

    With literal=True a lower-half-plane z is evaluated by the conjugate
    (i -> -i) form directly rather than by reflection.
    """
    require_case1(p)
    fr, flip, sg = _u_frame(z, p, AT_Z1, side, literal)
    tab = table_for(p, N + 1)
    u, al = p.u_mp, p.alpha_mp
    E = tab.e_from_S(fr.z, fr.S, min(N + 1, tab.s_max)) if fr.S != 0 else None
    if E is None:
        raise TurningPointProximityError("L-G forms are singular at a turning point")
    sm, last = _lg_sum(E, list(tab.lam), u, N, False)
    last += _exp_small(fr, u)
    logv = (sg * max(al, 0) * mp.pi * 1j + _log_pref_U(p, fr.z)
            - fr.log_S / 2 - u * fr.z / 2 + u * fr.xi + sm)
    return _result(logv, flip, LG, TruncationOrders(N), last, region_check(fr.z, p, "D2").ok,
                   p.case_tag, "U")


def lg_u_case2(z: Number, p: ShapeParams, N: int = 16, side: str = "above",
               literal: bool = False) -> ExpansionResult:
    fr, flip, sg = _u_frame(z, p, AT_Z2, side, literal)
    tab = table_for(p, N + 1)
    u, al = p.u_mp, p.alpha_mp
    if fr.S == 0:
        raise TurningPointProximityError("L-G forms are singular at a turning point")
    E = tab.e_from_S(fr.z, fr.S, min(N + 1, tab.s_max))
    sm, last = _lg_sum(E, list(tab.lam), u, N, False)
    last += _exp_small(fr, u)
    logv = (1j * mp.pi * ((p.n + 1) % 2) + sg * al * mp.pi * 1j + _log_pref_U(p, fr.z)
            - fr.log_S / 2 - u * fr.z / 2 + u * fr.xi + sm)
    return _result(logv, flip, LG, TruncationOrders(N), last, region_check(fr.z, p, "D2tilde").ok,
                   CASE2, "U")


def _lg_n(fr: LiouvilleFrame, p: ShapeParams, N: int) -> tuple[mpc, mpf]:
    tab = table_for(p, N + 1)
    u = p.u_mp
    sm, last = _lg_core(fr, tab, N, list(tab.mu_expansion), True)
    return (_log_pref_N(p, fr.z) - fr.log_S / 2 + u * fr.z / 2 - u * fr.xi + sm,
            last + _exp_small(fr, u))


# -- Airy coefficient functions ------------------------------------------------

def _ab_from_frame(fr: LiouvilleFrame, tab: CoefficientTable, m: int) -> tuple[mpc, mpc, mpf]:
    """Truncated A_m, B_m (with the chi factor) at a frame, and a truncation estimate."""
    _check_order(tab, 2 * m)
    if fr.S == 0:
        raise TurningPointProximityError("coefficient functions are singular at the other turning point")
    u = tab.params.u_mp
    top = min(2 * m + 2, tab.s_max)
    E = tab.e_from_S(fr.z, fr.S, top)
    ix = 1 / fr.xi
    a, at = tab.a_aux, tab.at_aux
    ev_t = ev_a = od_t = od_a = mpc(0)
    est = mpf(0)
    for k in range(1, top + 1):
        sgn = 1 if k % 2 == 0 else -1
        corr = sgn * ix ** k / k
        t_t = (E[k - 1] + at[k - 1] * corr) / u ** k
        t_a = (E[k - 1] + a[k - 1] * corr) / u ** k
        if k > 2 * m:
            est = max(est, abs(t_t), abs(t_a))
        elif k % 2 == 0:
            ev_t += t_t
            ev_a += t_a
        else:
            od_t += t_t
            od_a += t_a
        if k >= 2 * m - 1 and k <= 2 * m:
            est = max(est, abs(t_t), abs(t_a))
    lchi = fr.log_zeta / 4 - fr.log_S / 2
    A = mpmath.exp(lchi + ev_t) * mpmath.cosh(od_t)
    B = mpmath.exp(lchi - fr.log_zeta / 2 + ev_a) * mpmath.sinh(od_a) / mpmath.cbrt(u)
    return A, B, est


def _variant_point(p: ShapeParams, variant: str) -> mpf:
    tp = p.turning_points()
    return tp.z1 if variant == AT_Z1 else tp.z2


def default_contour(p: ShapeParams, variant: str, points: int = 100,
                    radius: Optional[mpf] = None) -> CauchyContour:
    return CauchyContour(variant, radius, points)


def airy_coeff_series(z: Number, p: ShapeParams, m: int = 8, variant: str = AT_Z2,
                      side: str = "above", force: bool = False) -> tuple[mpc, mpc]:
    """(A_m, B_m) by direct summation of the truncated series.

    Refuses inside the Cauchy switch radius unless force=True.
    """
    A, B, _ = _airy_coeff_series_est(z, p, m, variant, side, force)
    return A, B


def _airy_coeff_series_est(z, p, m, variant, side, force):
    if variant == AT_Z1:
        require_case1(p)
    z = mpc(z)
    c = _variant_point(p, variant)
    if abs(z - c) == 0:
        raise TurningPointProximityError("direct series is undefined at the turning point")
    if not force and abs(z - c) <= cauchy_switch_radius(p, variant):
        raise TurningPointProximityError(
            "direct coefficient series is unstable this close to the turning point; use the Cauchy form")
    fr = frame(z, p, variant, side)
    tab = table_for(p, 2 * m + 2)
    A, B, est = _ab_from_frame(fr, tab, m)
    if fr.conjugated:
        A, B = mpmath.conj(A), mpmath.conj(B)
    return A, B, est


@lru_cache(maxsize=64)
def _contour_nodes(p: ShapeParams, m: int, variant: str, c: mpf, r: mpf, P: int, prec: int) -> tuple:
    with mpmath.workprec(prec):
        tab = table_for(p, 2 * m + 2)
        nodes = []
        for k in range(P):
            th = mp.pi * (k + mpf(1) / 2) / P
            t = c + r * mpmath.expj(th)
            fr = frame(t, p, variant)
            A, B, est = _ab_from_frame(fr, tab, m)
            nodes.append((t, A, B, est))
    return tuple(nodes)


def airy_coeff_cauchy(z: Number, p: ShapeParams, m: int = 8, variant: str = AT_Z2,
                      contour: Optional[CauchyContour] = None) -> tuple[mpc, mpc]:
    A, B, _, _ = _airy_coeff_cauchy_est(z, p, m, variant, contour)
    return A, B


def _airy_coeff_cauchy_est(z, p, m, variant, contour, with_quad=True):
    if variant == AT_Z1:
        require_case1(p)
    contour = contour or default_contour(p, variant)
    if contour.center != variant:
        raise ContourError("contour centre must match the expansion's turning point")
    c, r = contour.resolve(p)
    z = mpc(z)
    d = abs(z - c)
    if d >= r:
        raise ContourError("z must lie strictly inside the contour")
    warn = d > 0.9 * r
    P = contour.points_per_half
    nodes = _contour_nodes(p, m, variant, c, r, P, mp.prec)
    M = 2 * P
    sA = sB = mpc(0)
    hA = mpc(0)
    est = mpf(0)
    for k, (t, A, B, e) in enumerate(nodes):
        w = (t - c) / (t - z)
        tc = mpmath.conj(t)
        wc = (tc - c) / (tc - z)
        ta, tb = A * w + mpmath.conj(A) * wc, B * w + mpmath.conj(B) * wc
        sA += ta
        sB += tb
        # every other node of the full circle: even k above the axis, odd k below
        hA += A * w if k % 2 == 0 else mpmath.conj(A) * wc
    A, B = sA / M, sB / M
    # node errors |A_k| e_k reach z amplified by at most r / (r - d)
    tiny = mpf(2) ** -mp.prec
    for t, Ak, Bk, e in nodes:
        if e >= 1:
            # a node outside the asymptotic regime: the integral is unreliable
            est = mpf("inf")
            break
        est = max(est, e * max(abs(Ak) / max(abs(A), tiny), abs(Bk) / max(abs(B), tiny)))
    est = est * r / (r - d)
    diag = {"accuracy_warning": warn}
    if with_quad and P % 2 == 0:
        qa = abs(hA / P - A) / max(abs(A), mpf(2) ** -mp.prec)
        diag["quadrature_halving_change"] = qa
    return A, B, est, diag


# -- Airy forms ---------------------------------------------------------------------

def _ab_at(z: mpc, p: ShapeParams, m: int, variant: str, use_cauchy: bool,
           contour: Optional[CauchyContour], side: str) -> tuple[LiouvilleFrame, mpc, mpc, mpf, str, dict]:
    """Coefficient functions at the upper-half-plane representative of z."""
    fr = frame(z, p, variant, side)
    if use_cauchy:
        contour = contour or default_contour(p, variant)
        A, B, est, diag = _airy_coeff_cauchy_est(fr.z, p, m, variant, contour)
        return fr, A, B, est, AIRY_CAUCHY, diag
    tab = table_for(p, 2 * m + 2)
    if fr.xi == 0:
        raise TurningPointProximityError("direct series is undefined at the turning point")
    A, B, est = _ab_from_frame(fr, tab, m)
    return fr, A, B, est, AIRY_DIRECT, {}


def _airy_bracket(fr: LiouvilleFrame, A: mpc, B: mpc, u: mpf, rotation: int) -> mpc:
    w = mpmath.exp(2 * mpmath.log(u) / 3) * fr.zeta
    av = airy(w, rotation)
    return av.ai.to_mpc() * A + av.aip.to_mpc() * B


def cauchy_switch_radius(p: ShapeParams, variant: str, frac: float = 0.5) -> mpf:
    """Cauchy is used within frac * r_m of z1, or frac * (z2 - z1) of z2.

    A relative slack of 2^(-prec/2) keeps points computed on that circle inside.
    """
    return frac * _scale(p, variant) * (1 + mpf(2) ** (-mp.prec // 2))


def _want_cauchy(z: mpc, p: ShapeParams, variant: str, method: str,
                 contour: Optional[CauchyContour], frac: float = 0.5) -> bool:
    if method == "cauchy":
        return True
    if method == "direct":
        return False
    zu = mpmath.conj(z) if z.imag < 0 else z
    if abs(zu - _variant_point(p, variant)) > cauchy_switch_radius(p, variant, frac):
        return False
    c, r = (contour or default_contour(p, variant)).resolve(p)
    return abs(zu - c) < r


def airy_laguerre_case1a(z: Number, p: ShapeParams, m: int = 8, method: str = "auto",
                         contour: Optional[CauchyContour] = None, side: str = "above") -> ExpansionResult:
    if p.case_tag != CASE1A:
        raise ValueError("this form needs a^2 >= 1 + delta (alpha > 0)")
    z = mpc(z)
    cz = _want_cauchy(z, p, AT_Z1, method, contour)
    fr, A, B, est, meth, diag = _ab_at(z, p, m, AT_Z1, cz, contour, side)
    tab = table_for(p, 2 * m + 2)
    u = p.u_mp
    br = _airy_bracket(fr, A, B, u, 0)
    logv = (mpmath.log(2 * mpmath.sqrt(mp.pi)) + mpmath.log(u) / 6 + _log_pref_L1a(p, fr.z)
            + u * fr.z / 2 + _odd_sum(list(tab.mu_expansion), u, m) + mpmath.log(br))
    return _result(logv, fr.conjugated, meth, TruncationOrders(2 * m, m), est + _odd_tail(list(tab.mu_expansion), u, m),
                   region_check(fr.z, p, "Dbold").ok, CASE1A, "L", **diag)


def airy_laguerre_case2(z: Number, p: ShapeParams, m: int = 8, method: str = "auto",
                        contour: Optional[CauchyContour] = None, side: str = "above") -> ExpansionResult:
    z = mpc(z)
    cz = _want_cauchy(z, p, AT_Z2, method, contour)
    fr, A, B, est, meth, diag = _ab_at(z, p, m, AT_Z2, cz, contour, side)
    tab = table_for(p, 2 * m + 2)
    n, al, u = p.n, p.alpha_mp, p.u_mp
    br = _airy_bracket(fr, A, B, u, 0)
    logv = (1j * mp.pi * (n % 2) + mpmath.log(2 * mpmath.sqrt(mp.pi))
            + (u / 2 - mpf(1) / 3) * mpmath.log(u) + (u + al) / 2 * mpmath.log(u + al)
            - mpmath.loggamma(n + 1) - al / 2 * (mpmath.log(u) + _log_z(fr.z))
            + u * fr.z / 2 - u - al / 2 + _odd_sum(list(tab.lam), u, m) + mpmath.log(br))
    return _result(logv, fr.conjugated, meth, TruncationOrders(2 * m, m), est + _odd_tail(list(tab.lam), u, m),
                   region_check(fr.z, p, "Dtilde").ok, CASE2, "L", **diag)


def _airy_u_common(z: Number, p: ShapeParams, m: int, variant: str, method: str,
                   contour: Optional[CauchyContour], side: str, literal: bool):
    z = mpc(z)
    if literal and z.imag < 0:
        fr_u, A, B, est, meth, diag = _ab_at(mpmath.conj(z), p, m, variant,
                                             _want_cauchy(z, p, variant, method, contour), contour, side)
        fr = _literal_frame(z, p, variant, side)
        return fr, mpmath.conj(A), mpmath.conj(B), est, meth, diag, False, -1
    cz = _want_cauchy(z, p, variant, method, contour)
    fr, A, B, est, meth, diag = _ab_at(z, p, m, variant, cz, contour, side)
    return fr, A, B, est, meth, diag, fr.conjugated, 1


def airy_u_case1(z: Number, p: ShapeParams, m: int = 8, method: str = "auto",
                 contour: Optional[CauchyContour] = None, side: str = "above",
                 literal: bool = False) -> ExpansionResult:
    require_case1(p)
    fr, A, B, est, meth, diag, flip, sg = _airy_u_common(z, p, m, AT_Z1, method, contour, side, literal)
    tab = table_for(p, 2 * m + 2)
    al, u = p.alpha_mp, p.u_mp
    # zeta lies in the lower half-plane here, so Ai_(-1) carries e^(+u xi)
    br = _airy_bracket(fr, A, B, u, -sg)
    logv = (mpmath.log(2 * mpmath.sqrt(mp.pi)) + sg * 1j * mp.pi / 6
            - mpmath.log(u) / 3 - (u + al) / 2 * mpmath.log(u * (u + al)) - al / 2 * _log_z(fr.z)
            - u * fr.z / 2 + u + al / 2 + sg * max(al, 0) * mp.pi * 1j
            - _odd_sum(list(tab.lam), u, m) + mpmath.log(br))
    return _result(logv, flip, meth, TruncationOrders(2 * m, m), est + _odd_tail(list(tab.lam), u, m),
                   region_check(fr.z, p, "Dbold").ok, p.case_tag, "U", **diag)


def airy_u_case2(z: Number, p: ShapeParams, m: int = 8, method: str = "auto",
                 contour: Optional[CauchyContour] = None, side: str = "above",
                 literal: bool = False) -> ExpansionResult:
    fr, A, B, est, meth, diag, flip, sg = _airy_u_common(z, p, m, AT_Z2, method, contour, side, literal)
    tab = table_for(p, 2 * m + 2)
    n, al, u = p.n, p.alpha_mp, p.u_mp
    br = _airy_bracket(fr, A, B, u, sg)
    logv = (1j * mp.pi * ((n + 1) % 2) + mpmath.log(2 * mpmath.sqrt(mp.pi)) - sg * 1j * mp.pi / 6
            + sg * al * mp.pi * 1j - mpmath.log(u) / 3 - (u + al) / 2 * mpmath.log(u * (u + al))
            - al / 2 * _log_z(fr.z) - u * fr.z / 2 + u + al / 2
            - _odd_sum(list(tab.lam), u, m) + mpmath.log(br))
    return _result(logv, flip, meth, TruncationOrders(2 * m, m), est + _odd_tail(list(tab.lam), u, m),
                   region_check(fr.z, p, "Dtilde").ok, CASE2, "U", **diag)


# -- Olver's N and the alpha < 0 case ---------------------------------------------

def _check_case1b(p: ShapeParams) -> None:
    if p.case_tag != CASE1B:
        raise ValueError("this form needs a0 <= a^2 <= 1 - delta (alpha < 0)")


def n_function_case1b(z: Number, p: ShapeParams, order: int = 16, flavor: str = "LG",
                      method: str = "auto", contour: Optional[CauchyContour] = None,
                      side: str = "above") -> ExpansionResult:
    """Olver's N(-n, alpha+1, uz); order is N for flavor LG and m for Airy."""
    _check_case1b(p)
    diag = {}
    if p.alpha.denominator == 1:
        diag["degenerate_alpha"] = True
    if flavor == "LG":
        fr, flip = _prepare(z, p, AT_Z1, side)
        logv, last = _lg_n(fr, p, order)
        return _result(logv, flip, LG, TruncationOrders(order), last,
                       region_check(fr.z, p, "D2").ok, CASE1B, "N", **diag)
    if flavor != "Airy":
        raise ValueError("flavor must be 'LG' or 'Airy'")
    m = order
    z = mpc(z)
    cz = _want_cauchy(z, p, AT_Z1, method, contour)
    fr, A, B, est, meth, d2 = _ab_at(z, p, m, AT_Z1, cz, contour, side)
    diag.update(d2)
    tab = table_for(p, 2 * m + 2)
    u = p.u_mp
    br = _airy_bracket(fr, A, B, u, 0)
    logv = (mpmath.log(2 * mpmath.sqrt(mp.pi)) + mpmath.log(u) / 6 + _log_pref_N(p, fr.z)
            + u * fr.z / 2 + _odd_sum(list(tab.mu_expansion), u, m) + mpmath.log(br))
    return _result(logv, fr.conjugated, meth, TruncationOrders(2 * m, m), est + _odd_tail(list(tab.mu_expansion), u, m),
                   region_check(fr.z, p, "Dbold").ok, CASE1B, "N", **diag)


def laguerre_case1b(z: Number, p: ShapeParams, orders: TruncationOrders = TruncationOrders(),
                    flavor: str = "auto", method: str = "auto",
                    contour: Optional[CauchyContour] = None, side: str = "above",
                    _retry: bool = True) -> ExpansionResult:
    """L = e^(alpha pi i) N - sin(pi alpha)/pi Gamma(n+alpha+1) e^(uz) U(uz e^(-pi i))."""
    _check_case1b(p)
    z = mpc(z)
    zu, flip = _reflect(z)
    if flavor == "auto":
        flavor = "Airy" if _near(zu, p, AT_Z1, 1.5) else "LG"
    al, u = p.alpha_mp, p.u_mp
    if flavor == "LG":
        nres = n_function_case1b(zu, p, orders.N, "LG", side=side)
        ures = lg_u_case1(zu, p, orders.N, side=side)
    else:
        nres = n_function_case1b(zu, p, orders.m_eff, "Airy", method, contour, side)
        ures = airy_u_case1(zu, p, orders.m_eff, method, contour, side)
    t1 = nres.value * scaled_exp(1j * mp.pi * al)
    sin_pa = mpmath.sinpi(al)
    if sin_pa == 0:
        total, lost = t1, 0
        est = nres.est_error
    else:
        t2 = ures.value * scaled_exp(mpmath.loggamma(p.n + al + 1) + u * zu) * (-sin_pa / mp.pi)
        total, lost = t1.add(t2)
        est = max(nres.est_error, ures.est_error) * mpf(2) ** lost
    if zu.imag == 0:
        total = ScaledComplex.normalize(total.mantissa.real, total.exponent)
    diag = {"cancellation_bits": lost, "parts": (nres.method, ures.method)}
    if lost > 32 and _retry:
        with mpmath.workprec(2 * mp.prec):
            again = laguerre_case1b(zu, p, orders, flavor, method, contour, side, _retry=False)
        total = again.value
        diag["precision_doubled"] = True
        diag["warning"] = f"{lost} bits cancelled between the two terms"
    if flip:
        total = total.conjugate()
    return ExpansionResult(total, nres.method, orders, est, nres.region_ok and ures.region_ok,
                           CASE1B, "L", diag)


# -- dispatch ------------------------------------------------------------------------

def _dist_to_segment(z: mpc, p: ShapeParams) -> mpf:
    tp = p.turning_points()
    x = min(max(z.real, tp.z1), tp.z2)
    return abs(z - x)


def _scale(p: ShapeParams, variant: str) -> mpf:
    tp = p.turning_points()
    return p.r_m if variant == AT_Z1 else tp.z2 - tp.z1


def _near(z: mpc, p: ShapeParams, variant: str, factor: float) -> bool:
    """True unless z is far (factor length scales) from [z1, z2] and from z_t."""
    zu = mpmath.conj(z) if z.imag < 0 else z
    L = factor * _scale(p, variant)
    return _dist_to_segment(zu, p) <= L or abs(zu - _variant_point(p, variant)) <= L


def choose_case(z: Number, p: ShapeParams, case: str = "auto") -> str:
    if case in ("1a", CASE1A):
        if p.case_tag != CASE1A:
            raise ValueError("case 1a needs a^2 >= 1 + delta")
        return CASE1A
    if case in ("1b", CASE1B):
        if p.case_tag != CASE1B:
            raise ValueError("case 1b needs a^2 <= 1 - delta")
        return CASE1B
    if case in ("2", CASE2):
        return CASE2
    if case != "auto":
        raise ValueError(f"unknown case {case!r}")
    z = mpc(z)
    tp = p.turning_points()
    if p.supports_case1 and z.real <= (tp.z1 + tp.z2) / 2:
        return p.case_tag
    return CASE2


def choose_method(z: Number, p: ShapeParams, case: str, options: EvalOptions = EvalOptions()) -> str:
    if options.method in ("lg", LG):
        return LG
    if options.method in ("cauchy", AIRY_CAUCHY):
        return AIRY_CAUCHY
    variant = AT_Z2 if case == CASE2 else AT_Z1
    z = mpc(z)
    zu = mpmath.conj(z) if z.imag < 0 else z
    contour = CauchyContour(variant, options.contour_radius, options.contour_points)
    near_cauchy = _want_cauchy(zu, p, variant, "auto", contour, options.cauchy_switch)
    if options.method in ("airy",):
        return AIRY_CAUCHY if near_cauchy else AIRY_DIRECT
    if options.method != "auto":
        raise ValueError(f"unknown method {options.method!r}")
    if near_cauchy:
        return AIRY_CAUCHY
    if not _near(zu, p, variant, options.lg_switch):
        which = "D2tilde" if variant == AT_Z2 else "D2"
        if region_check(zu, p, which).ok:
            return LG
    return AIRY_DIRECT


def _with_fallback(run, z: mpc, p: ShapeParams, case: str, meth: str,
                   options: EvalOptions) -> ExpansionResult:
    res = run(meth)
    variant = AT_Z2 if case == CASE2 else AT_Z1
    if (meth == AIRY_CAUCHY and options.method == "auto" and res.est_error > 1
            and abs(z - _variant_point(p, variant)) > 0):
        # contour reaches where the coefficient series is not asymptotic
        alt = run(AIRY_DIRECT)
        if alt.est_error < res.est_error:
            alt.diagnostics["fallback_from"] = AIRY_CAUCHY
            return alt
    return res


def evaluate(z: Number, p: ShapeParams, orders: TruncationOrders = TruncationOrders(),
             options: EvalOptions = EvalOptions()) -> ExpansionResult:
    """L_n^(alpha)(uz) with automatic choice of expansion."""
    z = mpc(z)
    case = choose_case(z, p, options.case)
    meth = choose_method(z, p, case, options)
    return _with_fallback(lambda mt: _evaluate_l(z, p, orders, options, case, mt),
                          z, p, case, meth, options)


def _evaluate_l(z: mpc, p: ShapeParams, orders: TruncationOrders, options: EvalOptions,
                case: str, meth: str) -> ExpansionResult:
    variant = AT_Z2 if case == CASE2 else AT_Z1
    contour = CauchyContour(variant, options.contour_radius, options.contour_points)
    amethod = "cauchy" if meth == AIRY_CAUCHY else "direct"
    if case == CASE1B:
        flavor = "LG" if meth == LG else "Airy"
        return laguerre_case1b(z, p, orders, flavor, amethod, contour, options.side)
    if case == CASE1A:
        if meth == LG:
            return lg_laguerre_case1a(z, p, orders.N, options.side)
        return airy_laguerre_case1a(z, p, orders.m_eff, amethod, contour, options.side)
    if meth == LG:
        return lg_laguerre_case2(z, p, orders.N, options.side)
    return airy_laguerre_case2(z, p, orders.m_eff, amethod, contour, options.side)


def evaluate_u(z: Number, p: ShapeParams, orders: TruncationOrders = TruncationOrders(),
               options: EvalOptions = EvalOptions()) -> ExpansionResult:
    """U(n+alpha+1, alpha+1, uz e^(-pi i)) (upper half-plane) with automatic choice."""
    z = mpc(z)
    case = choose_case(z, p, options.case)
    meth = choose_method(z, p, case, options)
    return _with_fallback(lambda mt: _evaluate_u(z, p, orders, options, case, mt),
                          z, p, case, meth, options)


def _evaluate_u(z: mpc, p: ShapeParams, orders: TruncationOrders, options: EvalOptions,
                case: str, meth: str) -> ExpansionResult:
    variant = AT_Z2 if case == CASE2 else AT_Z1
    contour = CauchyContour(variant, options.contour_radius, options.contour_points)
    amethod = "cauchy" if meth == AIRY_CAUCHY else "direct"
    if case == CASE2:
        if meth == LG:
            return lg_u_case2(z, p, orders.N, options.side)
        return airy_u_case2(z, p, orders.m_eff, amethod, contour, options.side)
    if meth == LG:
        return lg_u_case1(z, p, orders.N, options.side)
    return airy_u_case1(z, p, orders.m_eff, amethod, contour, options.side)
