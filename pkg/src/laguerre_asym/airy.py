"""Complex Airy function Ai and its derivative at arbitrary precision.

Small arguments use the Maclaurin series (at raised precision to absorb its
cancellation); large arguments use the asymptotic expansion in the sector
|arg w| <= 2pi/3, and the three-term connection formula elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath
from mpmath import mp, mpc, mpf

from .numeric import Number, ScaledComplex, scaled_exp


@dataclass(frozen=True)
class AiryValue:
    ai: ScaledComplex
    aip: ScaledComplex
    scaled: bool
    scale_phase: mpc


def switch_radius(bits: int | None = None) -> mpf:
    """|w| above which the asymptotic expansion reaches full precision."""
    bits = mp.prec if bits is None else bits
    return ((mpf(3) / 4) * (bits + 10) * mpmath.ln2) ** (mpf(2) / 3)


@lru_cache(maxsize=8)
def _maclaurin_constants(prec: int) -> tuple[mpf, mpf]:
    with mpmath.workprec(prec):
        c1 = 1 / (mpmath.cbrt(9) * mpmath.gamma(mpf(2) / 3))
        c2 = 1 / (mpmath.cbrt(3) * mpmath.gamma(mpf(1) / 3))
    return c1, c2


def _series(v: mpc) -> tuple[mpc, mpc]:
    """Ai(v), Ai'(v) from the Maclaurin series."""
    target = mp.prec
    extra = int(4 * abs(v) ** mpf(1.5) / (3 * mpmath.ln2)) + 24
    with mpmath.workprec(target + extra):
        v = mpc(v)
        c1, c2 = _maclaurin_constants(mp.prec)
        v3 = v ** 3
        tol = mpf(2) ** (-mp.prec - 4)
        f = fp = g = gp = mpc(0)
        tf, tg, tgp = mpc(1), v, mpc(1)
        tfp = v * v / 2
        k = 0
        while True:
            f += tf
            g += tg
            gp += tgp
            fp += tfp
            if k > 2 and max(abs(tf), abs(tg), abs(tfp), abs(tgp)) < tol * (1 + abs(f) + abs(g)):
                break
            tf = tf * v3 / ((3 * k + 2) * (3 * k + 3))
            tg = tg * v3 / ((3 * k + 3) * (3 * k + 4))
            tgp = tgp * v3 / ((3 * k + 1) * (3 * k + 3))
            tfp = tfp * v3 / ((3 * k + 3) * (3 * k + 5))
            k += 1
        ai = c1 * f - c2 * g
        aip = c1 * fp - c2 * gp
    return +ai, +aip


def _asymptotic(v: mpc) -> tuple[mpc, mpc, mpc]:
    """(scaled Ai, scaled Ai', sigma) with Ai = scaled * exp(-sigma).

    Valid for |arg v| <= 2pi/3 and large |v|.
    """
    with mpmath.extraprec(20):
        v = mpc(v)
        lv = mpmath.log(v)
        sigma = 2 * mpmath.exp(mpf(3) / 2 * lv) / 3
        q = mpmath.exp(lv / 4)
        tol = mpf(2) ** (-mp.prec)
        su = sv = mpc(0)
        uk = mpf(1)
        term_prev = None
        k = 0
        t = mpc(1)
        while True:
            vk = -uk * (6 * k + 1) / (6 * k - 1)
            tu = uk * t
            tv = vk * t
            mag = max(abs(tu), abs(tv))
            if term_prev is not None and mag > term_prev:
                break
            su += tu
            sv += tv
            if mag < tol:
                break
            term_prev = mag
            # u_{k+1} = u_k (6k+1)(6k+3)(6k+5) / (216 (k+1)(2k+1))
            uk = uk * (6 * k + 1) * (6 * k + 3) * (6 * k + 5) / (216 * (k + 1) * (2 * k + 1))
            t = -t / sigma
            k += 1
        norm = 2 * mpmath.sqrt(mp.pi)
        ai = su / (norm * q)
        aip = -q * sv / norm
    return +ai, +aip, +sigma


def _principal_pair(v: mpc) -> tuple[ScaledComplex, ScaledComplex]:
    """Ai(v), Ai'(v) for |arg v| <= 2pi/3 (or any small |v|)."""
    if abs(v) <= switch_radius():
        ai, aip = _series(v)
        return ScaledComplex.normalize(ai), ScaledComplex.normalize(aip)
    ai, aip, sigma = _asymptotic(v)
    scale = scaled_exp(-sigma)
    return scale * ai, scale * aip


def _ai_pair(v: mpc) -> tuple[ScaledComplex, ScaledComplex]:
    v = mpc(v)
    if v == 0 or abs(v) <= switch_radius() or abs(mpmath.arg(v)) <= 2 * mp.pi / 3:
        return _principal_pair(v)
    # Ai(v) = -w Ai(w v) - w^2 Ai(w^2 v), w = exp(2 pi i / 3)
    w = mpmath.expjpi(mpf(2) / 3)
    wb = mpmath.conj(w)
    a1, d1 = _principal_pair(v * w)
    a2, d2 = _principal_pair(v * wb)
    ai = (a1 * (-w)) + (a2 * (-wb))
    aip = (d1 * (-w * w)) + (d2 * (-wb * wb))
    return ai, aip


def airy(w: Number, rotation: int = 0, want_scaled: bool = False) -> AiryValue:
    """Ai_j(w) = Ai(w exp(-2 pi i j / 3)) and its derivative with respect to w.

    With want_scaled the values are multiplied by exp((2/3) w^(3/2)) (principal
    branch), which is returned as scale_phase.
    """
    if rotation not in (0, 1, -1):
        raise ValueError("rotation must be 0, 1 or -1")
    w = mpc(w)
    with mpmath.extraprec(10):
        rot = mpmath.expjpi(-mpf(2 * rotation) / 3) if rotation else mpc(1)
        ai, aip = _ai_pair(w * rot)
        if rotation:
            aip = aip * rot
        phase = mpc(0)
        if want_scaled:
            phase = 2 * mpmath.exp(mpf(3) / 2 * mpmath.log(w)) / 3 if w != 0 else mpc(0)
            s = scaled_exp(phase)
            ai, aip = ai * s, aip * s
    return AiryValue(ai, aip, want_scaled, phase)


def ai(w: Number, rotation: int = 0) -> mpc:
    return airy(w, rotation).ai.to_mpc()


def aip(w: Number, rotation: int = 0) -> mpc:
    return airy(w, rotation).aip.to_mpc()
