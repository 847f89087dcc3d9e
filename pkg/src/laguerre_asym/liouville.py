"""Coordinates for the Laguerre differential equation in the variable z.

Everything here works for points in the closed upper half-plane; values in
the lower half-plane follow by Schwarz reflection (conjugation).  Real points
on a branch cut are taken from above unless the caller asks otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Optional, Union

import mpmath
from mpmath import mp, mpc, mpf

from .numeric import Number, clog_lower, clog_upper

AlphaLike = Union[int, float, str, Fraction, mpf]


class UnsupportedRegimeError(ValueError):
    pass


class CoalescingRegimeError(UnsupportedRegimeError):
    pass


class BranchAmbiguityError(ValueError):
    pass


class PoleError(ZeroDivisionError):
    pass


CASE1A, CASE1B, CASE2 = "Case1a", "Case1b", "Case2"
AT_Z1, AT_Z2 = "AtZ1", "AtZ2"


@dataclass(frozen=True)
class RegimeConfig:
    delta: float = 0.05
    a0: float = 0.05
    a1: float = 400.0


def _as_fraction(x: AlphaLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, mpf):
        p, q = mpmath.libmp.to_rational(x._mpf_)
        return Fraction(int(p), int(q))
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(str(x).strip())


@dataclass(frozen=True)
class TurningPoints:
    z1: mpf
    z2: mpf


@dataclass(frozen=True)
class ShapeParams:
    """Degree, order and the derived shape parameter a**2 = 1 + alpha/u.

    n, alpha, u and a2 are stored exactly; floating values are derived at the
    precision that is active when they are requested.
    """

    n: int
    alpha: Fraction
    u: Fraction
    a2: Fraction
    case_tag: str
    config: RegimeConfig = field(default_factory=RegimeConfig)

    @property
    def supports_case1(self) -> bool:
        return self.case_tag in (CASE1A, CASE1B)

    @property
    def A(self) -> mpf:
        return mpf(self.a2.numerator) / self.a2.denominator

    @property
    def a(self) -> mpf:
        return mpmath.sqrt(self.A)

    @property
    def u_mp(self) -> mpf:
        return mpf(self.u.numerator) / self.u.denominator

    @property
    def alpha_mp(self) -> mpf:
        return mpf(self.alpha.numerator) / self.alpha.denominator

    @property
    def c(self) -> mpf:
        """|a**2 - 1|."""
        d = abs(self.a2 - 1)
        return mpf(d.numerator) / d.denominator

    def turning_points(self) -> TurningPoints:
        a = self.a
        return TurningPoints((a - 1) ** 2, (a + 1) ** 2)

    @property
    def z1(self) -> mpf:
        return self.turning_points().z1

    @property
    def z2(self) -> mpf:
        return self.turning_points().z2

    @property
    def r_m(self) -> mpf:
        """min(z1, z2 - z1): the largest admissible contour radius about z1."""
        tp = self.turning_points()
        return min(tp.z1, tp.z2 - tp.z1)


def classify(a2: Fraction, config: RegimeConfig) -> str:
    if a2 <= 0:
        raise UnsupportedRegimeError(f"a^2 = {float(a2)} <= 0 is outside the supported regime")
    if a2 < Fraction(config.a0):
        raise CoalescingRegimeError(f"a^2 = {float(a2)} < {config.a0}: turning points coalesce at 0")
    if a2 > Fraction(config.a1):
        raise UnsupportedRegimeError(f"a^2 = {float(a2)} > {config.a1}")
    if a2 >= 1 + Fraction(config.delta):
        return CASE1A
    if a2 <= 1 - Fraction(config.delta):
        return CASE1B
    return CASE2


def make_params(n: int, alpha: AlphaLike, config: Optional[RegimeConfig] = None) -> ShapeParams:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    config = config or RegimeConfig()
    al = _as_fraction(alpha)
    u = Fraction(2 * n + 1, 2)
    a2 = 1 + al / u
    return ShapeParams(n, al, u, a2, classify(a2, config), config)


def require_case1(p: ShapeParams) -> None:
    if not p.supports_case1:
        raise CoalescingRegimeError(
            f"a^2 = {float(p.a2)} is within delta of 1; only the expansions at z2 apply")


# -- side / conjugation handling ---------------------------------------------

def _upper(z: Number, side: Optional[str], on_cut: bool) -> tuple[mpc, bool]:
    """Map z to the closed upper half-plane; report whether to conjugate back."""
    z = mpc(z)
    if z.imag > 0:
        return z, False
    if z.imag < 0:
        return mpmath.conj(z), True
    if on_cut:
        if side == "above":
            return z, False
        if side == "below":
            return z, True
        raise BranchAmbiguityError(f"z = {mpmath.nstr(z.real, 10)} lies on a branch cut; pass side")
    return z, False


def _finish(w: mpc, flip: bool) -> mpc:
    return mpmath.conj(w) if flip else w


def _log_S_upper(z: mpc, p: ShapeParams) -> mpc:
    tp = p.turning_points()
    return (clog_lower(tp.z1 - z) + clog_lower(tp.z2 - z)) / 2


def big_S(z: Number, p: ShapeParams, side: Optional[str] = "above") -> mpc:
    """S(z) = sqrt((z1 - z)(z2 - z)), positive left of z1, cut along [z1, z2]."""
    tp = p.turning_points()
    z = mpc(z)
    if z == tp.z1 or z == tp.z2:
        return mpc(0)
    on_cut = z.imag == 0 and tp.z1 < z.real < tp.z2
    zu, flip = _upper(z, side, on_cut)
    s = mpmath.exp(_log_S_upper(zu, p))
    if zu.imag == 0 and not on_cut:
        s = mpc(s.real, 0)
    return _finish(s, flip)


def _xi1_closed(z: mpc, p: ShapeParams) -> mpc:
    A, c, a = p.A, p.c, p.a
    S = mpmath.exp(_log_S_upper(z, p))
    dm = A + 1 - z - S
    dp = A + 1 - z + S
    # dm*dp = 4A; use whichever factor avoids cancellation
    w1 = dm if abs(dm) >= abs(dp) else 4 * A / dp
    xi = (A + 1) / 2 * clog_upper(w1) - S / 2 - max(A, 1) * mpmath.log(2 * a)
    if c != 0:
        w2 = (c * c + c * S - (A + 1) * z) / z
        xi += c / 2 * clog_lower(w2)
    return xi


def _xi2_closed(z: mpc, p: ShapeParams) -> mpc:
    A, c, a = p.A, p.c, p.a
    S = mpmath.exp(_log_S_upper(z, p))
    dm = A + 1 - z - S
    dp = A + 1 - z + S
    v1 = -dp if abs(dp) >= abs(dm) else -4 * A / dm
    xi = -(A + 1) / 2 * clog_upper(v1) - S / 2 + max(A, 1) * mpmath.log(2 * a)
    if c != 0:
        v2 = ((A + 1) * z - c * c + c * S) / z
        xi -= c / 2 * clog_lower(v2)
    return xi


# -- local expansions at the turning points -------------------------------------

@lru_cache(maxsize=64)
def _local_coeffs(a2: Fraction, which: str, prec: int, terms: int) -> tuple:
    """Taylor coefficients of sqrt(d + tau) / (2 (z_t -/+ tau)) in tau."""
    with mpmath.workprec(prec + 20):
        a = mpmath.sqrt(mpf(a2.numerator) / a2.denominator)
        tp = TurningPoints((a - 1) ** 2, (a + 1) ** 2)
        d = tp.z2 - tp.z1
        sq = []
        b = mpf(1)
        for j in range(terms):
            sq.append(mpmath.sqrt(d) * b / d ** j)
            b = b * (mpf(1) / 2 - j) / (j + 1)
        if which == AT_Z1:
            geo = [1 / tp.z1 ** (k + 1) for k in range(terms)]
        else:
            geo = [(-1) ** k / tp.z2 ** (k + 1) for k in range(terms)]
        out = []
        for k in range(terms):
            out.append(sum(sq[j] * geo[k - j] for j in range(k + 1)) / 2)
    return tuple(out)


def local_radius(p: ShapeParams, variant: str) -> mpf:
    tp = p.turning_points()
    d = tp.z2 - tp.z1
    zt = tp.z1 if variant == AT_Z1 else tp.z2
    return min(d, zt) / 20


def _local_terms() -> int:
    # ratio of successive terms is at most 1/20
    return int(mp.prec / 4.3) + 8


def _local_series(tau: mpc, p: ShapeParams, variant: str) -> mpc:
    """G(tau) with xi = (2/3) G tau^(3/2), so zeta = tau G^(2/3)."""
    coeffs = _local_coeffs(p.a2, variant, mp.prec, _local_terms())
    acc = mpc(0)
    for k in reversed(range(len(coeffs))):
        acc = acc * tau + coeffs[k] / (k + mpf(3) / 2)
    return acc * mpf(3) / 2


# -- public coordinate functions ---------------------------------------------

def _xi_cut1(z: mpc, p: ShapeParams) -> bool:
    tp = p.turning_points()
    return z.imag == 0 and (z.real <= 0 or z.real >= tp.z1)


def _xi_cut2(z: mpc, p: ShapeParams) -> bool:
    tp = p.turning_points()
    return z.imag == 0 and (z.real <= 0 or tp.z1 <= z.real < tp.z2)


def xi_case1(z: Number, p: ShapeParams, side: Optional[str] = "above") -> mpc:
    """The variable xi, vanishing at z1 and positive on (0, z1)."""
    z = mpc(z)
    tp = p.turning_points()
    if z == 0:
        raise PoleError("xi is singular at z = 0")
    zu, flip = _upper(z, side, _xi_cut1(z, p) and z != tp.z1)
    if p.A != 1 and abs(zu - tp.z1) < local_radius(p, AT_Z1):
        tau = tp.z1 - zu
        w = mpmath.exp(clog_lower(tau) / 2)
        xi = 2 * w ** 3 * _local_series(tau, p, AT_Z1) / 3
    else:
        xi = _xi1_closed(zu, p)
    if zu.imag == 0 and 0 < zu.real < tp.z1:
        xi = mpc(xi.real, 0)
    return _finish(xi, flip)


def xi_case2(z: Number, p: ShapeParams, side: Optional[str] = "above") -> mpc:
    """The variable xi-tilde, vanishing at z2 and positive on (z2, inf)."""
    z = mpc(z)
    tp = p.turning_points()
    if z == 0:
        raise PoleError("xi-tilde is singular at z = 0")
    zu, flip = _upper(z, side, _xi_cut2(z, p))
    if abs(zu - tp.z2) < local_radius(p, AT_Z2):
        tau = zu - tp.z2
        w = mpmath.exp(clog_upper(tau) / 2)
        xi = 2 * w ** 3 * _local_series(tau, p, AT_Z2) / 3
    else:
        xi = _xi2_closed(zu, p)
    if zu.imag == 0 and zu.real >= tp.z2:
        xi = mpc(xi.real, 0)
    return _finish(xi, flip)


def zeta_log_from_xi(xi: Number, variant: str) -> Optional[mpc]:
    """log(zeta) for zeta = (3 xi / 2)**(2/3) on the branch used here.

    The caller's z must lie in the closed upper half-plane.  Returns None for
    xi = 0.
    """
    xi = mpc(xi)
    if xi == 0:
        return None
    L = mpmath.log(3 * xi / 2)
    th = L.imag
    snap = mpf(2) ** (-mp.prec // 2)
    if variant == AT_Z1:
        if 0 < th <= snap:
            th = mpf(0)
        elif th > 0:
            th -= 2 * mp.pi
    else:
        if -snap <= th < 0:
            th = mpf(0)
        elif th < 0:
            th += 2 * mp.pi
    return 2 * mpc(L.real, th) / 3


def zeta_from_xi(xi: Number, variant: str = AT_Z1) -> mpc:
    lz = zeta_log_from_xi(xi, variant)
    return mpc(0) if lz is None else mpmath.exp(lz)


def phi_of_z(z: Number, p: ShapeParams) -> mpc:
    z = mpc(z)
    tp = p.turning_points()
    if z == tp.z1 or z == tp.z2:
        raise PoleError("phi has poles at the turning points")
    A = p.A
    num = 4 * z ** 3 - 4 * (3 * A - 1) * (A - 3) * z + 8 * (A + 1) * (A - 1) ** 2
    return -z * num / (4 * (z - tp.z1) ** 3 * (z - tp.z2) ** 3)


def f_of_z(z: Number, p: ShapeParams) -> mpc:
    z = mpc(z)
    A = p.A
    return (z * z - 2 * (A + 1) * z + (A - 1) ** 2) / (4 * z * z)


@dataclass(frozen=True)
class LiouvilleFrame:
    """Coordinates at one point.

    log_S and log_zeta carry the branches used for fractional powers; for
    AtZ2 frames, log_S is the log of -S (the root that is positive right of z2).
    """

    z: mpc
    S: mpc
    log_S: mpc
    xi: mpc
    zeta: mpc
    log_zeta: Optional[mpc]
    f: mpc
    variant: str
    conjugated: bool


def frame(z: Number, p: ShapeParams, variant: str, side: Optional[str] = "above") -> LiouvilleFrame:
    """All coordinates at z, computed in the upper half-plane.

    The returned frame describes the upper-half-plane representative zu
    (``conjugated`` tells whether the input was reflected).  Callers reflect
    their final results back.
    """
    z = mpc(z)
    tp = p.turning_points()
    if variant == AT_Z1:
        on_cut = _xi_cut1(z, p) and z != tp.z1
    else:
        on_cut = _xi_cut2(z, p) and z != tp.z2
    zu, flip = _upper(z, side, on_cut)
    if zu == 0:
        raise PoleError("z = 0 is a singular point")
    lS = _log_S_upper(zu, p) if zu not in (tp.z1, tp.z2) else None
    S = mpmath.exp(lS) if lS is not None else mpc(0)
    if variant == AT_Z1:
        tau = tp.z1 - zu
        if tau == 0:
            xi, lz = mpc(0), None
        elif p.A != 1 and abs(tau) < local_radius(p, AT_Z1):
            G = _local_series(tau, p, AT_Z1)
            w = mpmath.exp(clog_lower(tau) / 2)
            xi = 2 * w ** 3 * G / 3
            lz = clog_lower(tau) + 2 * mpmath.log(G) / 3
        else:
            xi = _xi1_closed(zu, p)
            lz = zeta_log_from_xi(xi, AT_Z1)
        if zu.imag == 0 and 0 < zu.real < tp.z1:
            xi = mpc(xi.real, 0)
        log_S = lS
    else:
        tau = zu - tp.z2
        if tau == 0:
            xi, lz = mpc(0), None
        elif abs(tau) < local_radius(p, AT_Z2):
            G = _local_series(tau, p, AT_Z2)
            w = mpmath.exp(clog_upper(tau) / 2)
            xi = 2 * w ** 3 * G / 3
            lz = clog_upper(tau) + 2 * mpmath.log(G) / 3
        else:
            xi = _xi2_closed(zu, p)
            lz = zeta_log_from_xi(xi, AT_Z2)
        if zu.imag == 0 and zu.real > tp.z2:
            xi = mpc(xi.real, 0)
        # -S = sqrt(z - z1) sqrt(z - z2) with principal roots
        log_S = None if lS is None else lS + 1j * mp.pi
    zeta = mpc(0) if lz is None else mpmath.exp(lz)
    lo, hi = (0, tp.z2) if variant == AT_Z1 else (tp.z1, mpmath.inf)
    if lz is not None and zu.imag == 0 and lo < zu.real < hi:
        # zeta is real on this stretch of the axis
        zeta = mpc(zeta.real, 0)
    return LiouvilleFrame(zu, S, log_S, xi, zeta, lz, f_of_z(zu, p), variant, flip)


# -- advisory domain predicates ----------------------------------------------

@dataclass(frozen=True)
class RegionVerdict:
    ok: bool
    margin: mpf


def _on_segment(z: mpc, p: ShapeParams) -> bool:
    tp = p.turning_points()
    return z.imag == 0 and tp.z1 <= z.real <= tp.z2


def region_check(z: Number, p: ShapeParams, which: str) -> RegionVerdict:
    """Approximate domain membership, decided in the xi-plane.

    D2      expansions of L-G type about z1: excludes [z1, z2] and the part of
            the upper half-plane mapped into the closed first xi-quadrant.
    Dbold   Airy type about z1: excludes the open first xi-quadrant and z2.
    D2tilde L-G type about z2: excludes [z1, z2] and the open fourth quadrant
            of xi-tilde.
    Dtilde  Airy type about z2: excludes the open fourth quadrant of xi-tilde
            and z1.

    The margin is the distance (in the xi-plane) to the excluded set, negative
    inside it.
    """
    z = mpc(z)
    zu = mpmath.conj(z) if z.imag < 0 else z
    tp = p.turning_points()
    tol = mpf(2) ** (-mp.prec // 2)
    if zu == 0:
        return RegionVerdict(False, mpf(0))
    if which in ("D2", "Dbold"):
        if zu == tp.z2:
            return RegionVerdict(False, mpf(0))
        if which == "D2" and _on_segment(zu, p):
            return RegionVerdict(False, mpf(0))
        x = xi_case1(zu, p)
        if which == "D2":
            bad = x.real >= -tol and x.imag > tol
        else:
            bad = x.real > tol and x.imag > tol
        margin = min(abs(x.real), abs(x.imag))
        return RegionVerdict(not bad, -margin if bad else margin)
    if which in ("D2tilde", "Dtilde"):
        if which == "Dtilde" and zu == tp.z1:
            return RegionVerdict(False, mpf(0))
        if which == "D2tilde" and _on_segment(zu, p):
            return RegionVerdict(False, mpf(0))
        x = xi_case2(zu, p)
        bad = x.real > tol and x.imag < -tol
        margin = min(abs(x.real), abs(x.imag))
        return RegionVerdict(not bad, -margin if bad else margin)
    raise ValueError(f"unknown region {which!r}")
