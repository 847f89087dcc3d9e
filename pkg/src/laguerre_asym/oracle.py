"""Multiprecision reference values used to test the expansions.

Everything here sums convergent series at adaptively raised precision: a
result is accepted only once the cancellation seen while summing leaves at
least ``bits`` correct bits.  Nothing in this module is asymptotic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import mpmath
from mpmath import mp, mpc, mpf

from .liouville import _as_fraction
from .numeric import Number, ScaledComplex

Real = Union[int, float, Fraction, mpf, str]


class OracleFailure(RuntimeError):
    pass


class UnsupportedOracleInput(ValueError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    bits: int = 512
    max_terms: int = 200_000
    max_bits: int = 1 << 16

    def __post_init__(self) -> None:
        if self.bits < 64:
            raise ValueError("oracle bits must be >= 64")


DEFAULT = OracleConfig()


def _frac_to_mpf(q: Fraction) -> mpf:
    return mpf(q.numerator) / q.denominator


def _lost_bits(biggest: mpf, total) -> int:
    if total == 0:
        return 1 << 30
    if biggest == 0:
        return 0
    return max(0, int(mpmath.ceil(mpmath.log(biggest / abs(total), 2))))


def _adaptive(fn, bits: int, cfg: OracleConfig):
    """Run fn(prec) -> (value, lost_bits) until lost bits leave ``bits`` intact."""
    guard = 32
    prec = bits + guard
    while True:
        with mpmath.workprec(prec):
            value, lost = fn(prec)
        if lost + bits + 16 <= prec:
            return value
        prec = bits + lost + guard
        if prec > cfg.max_bits:
            raise OracleFailure(f"cancellation needs more than {cfg.max_bits} bits")


# -- Laguerre polynomial --------------------------------------------------------

@lru_cache(maxsize=64)
def _laguerre_coeffs(n: int, alpha: Fraction) -> tuple[Fraction, ...]:
    """c_k with L_n^(alpha)(x) = sum c_k x^k, exactly."""
    c = Fraction(1)
    for j in range(1, n + 1):
        c = c * (alpha + j) / j
    out = [c]
    for k in range(n):
        # c_{k+1}/c_k = -(n-k) / ((alpha+k+1)(k+1))
        if alpha + k + 1 == 0:
            # binom(n+alpha, n-k-1) restarts from zero denominators; do it directly
            return tuple(_laguerre_coeffs_direct(n, alpha))
        c = -c * (n - k) / ((alpha + k + 1) * (k + 1))
        out.append(c)
    return tuple(out)


def _laguerre_coeffs_direct(n: int, alpha: Fraction) -> list[Fraction]:
    out = []
    fact = Fraction(1)
    for k in range(n + 1):
        if k:
            fact *= k
        # binom(n+alpha, n-k) = prod_{j=1}^{n-k} (alpha + k + j) / j
        b = Fraction(1)
        for j in range(1, n - k + 1):
            b = b * (alpha + k + j) / j
        out.append(b * (-1) ** k / fact)
    return out


def laguerre_exact(n: int, alpha: Real, x: Number, bits: Optional[int] = None,
                   config: OracleConfig = DEFAULT) -> ScaledComplex:
    """L_n^(alpha)(x) from its finite sum with exact rational coefficients."""
    if n < 0:
        raise ValueError("n must be non-negative")
    bits = bits or config.bits
    coeffs = _laguerre_coeffs(n, _as_fraction(alpha))
    x0 = mpc(x)

    def run(prec):
        xx = mpc(x0)
        acc = mpc(0)
        big = mpf(0)
        pw = mpc(1)
        for c in coeffs:
            t = _frac_to_mpf(c) * pw
            acc += t
            big = max(big, abs(t))
            pw *= xx
        return acc, _lost_bits(big, acc)

    return ScaledComplex.normalize(_adaptive(run, bits, config))


def laguerre_derivative_exact(n: int, alpha: Real, x: Number, bits: Optional[int] = None,
                              config: OracleConfig = DEFAULT) -> ScaledComplex:
    """d/dx L_n^(alpha)(x) = -L_{n-1}^(alpha+1)(x)."""
    if n == 0:
        return ScaledComplex(mpc(0), 0)
    return -laguerre_exact(n - 1, _as_fraction(alpha) + 1, x, bits, config)


# -- Kummer functions ------------------------------------------------------------

def _is_nonpos_int(v) -> bool:
    v = mpmath.mpmathify(v)
    return mpmath.isint(v) and v <= 0


def _m_series(a, b, x, scaled: bool, cfg: OracleConfig, prec: int):
    """Sum of (a)_k x^k / (k! (b)_k), or with 1/Gamma(b+k) when scaled."""
    a, b, x = mpmath.mpmathify(a), mpmath.mpmathify(b), mpc(x)
    k0 = 0
    if scaled and _is_nonpos_int(b):
        k0 = int(1 - b)
        t = mpmath.rf(a, k0) * x ** k0 / mpmath.factorial(k0)
    elif scaled:
        t = mpmath.rgamma(b) * mpc(1)
    else:
        if _is_nonpos_int(b):
            raise UnsupportedOracleInput("plain M is undefined for b a non-positive integer")
        t = mpc(1)
    tol = mpf(2) ** (-prec - 8)
    acc = mpc(0)
    big = mpf(0)
    k = k0
    while True:
        acc += t
        big = max(big, abs(t))
        if t == 0:
            break  # terminating series
        r = (a + k) * x / ((k + 1) * (b + k))
        t = t * r
        k += 1
        # past the hump with a geometric tail below tolerance
        if k > abs(a) + abs(x) + 2 and abs(r) < mpf(1) / 2 and abs(t) < tol * abs(acc):
            acc += t
            break
        if k - k0 > cfg.max_terms:
            raise OracleFailure("Kummer series did not converge within max_terms")
    return acc, _lost_bits(big, acc)


def kummer_m(a: Number, b: Number, x: Number, bits: Optional[int] = None,
             config: OracleConfig = DEFAULT) -> ScaledComplex:
    """M(a, b, x) = 1F1(a; b; x)."""
    bits = bits or config.bits
    return ScaledComplex.normalize(_adaptive(lambda pr: _m_series(a, b, x, False, config, pr),
                                             bits, config))


def olver_m(a: Number, b: Number, x: Number, bits: Optional[int] = None,
            config: OracleConfig = DEFAULT) -> ScaledComplex:
    """Olver's scaled M(a, b, x) / Gamma(b), entire in b."""
    bits = bits or config.bits
    return ScaledComplex.normalize(_adaptive(lambda pr: _m_series(a, b, x, True, config, pr),
                                             bits, config))


def olver_n(n: int, alpha: Real, x: Number, log_x: Optional[Number] = None,
            bits: Optional[int] = None, config: OracleConfig = DEFAULT) -> ScaledComplex:
    """N(-n, alpha+1, x) = x^(-alpha) * scaled M(-n-alpha, 1-alpha, x)."""
    bits = bits or config.bits
    al = _as_fraction(alpha)
    with mpmath.workprec(bits + 32):
        alm = _frac_to_mpf(al)
        lx = mpmath.log(mpc(x)) if log_x is None else mpc(log_x)
        m = olver_m(-n - alm, 1 - alm, x, bits, config)
        return m * mpmath.exp(-alm * lx)


def u_exact(a: Number, b: Number, x: Number, sheet: int = 0,
            bits: Optional[int] = None, config: OracleConfig = DEFAULT) -> ScaledComplex:
    """Tricomi U(a, b, x) for non-integer b, with log x = Log x + 2 pi i sheet.

    U = pi/sin(pi b) [M~(a,b,x)/Gamma(a-b+1) - x^(1-b) M~(a-b+1,2-b,x)/Gamma(a)]
    with M~ Olver's scaled M.  The two terms can cancel heavily, so log x is
    rebuilt at every working precision rather than passed in.
    """
    bits = bits or config.bits
    if mpmath.isint(mpmath.mpmathify(b)):
        raise UnsupportedOracleInput("U oracle needs non-integer b; perturb b off the integer")
    x0 = mpc(x)
    if x0 == 0:
        raise UnsupportedOracleInput("U is singular at x = 0")

    def run(prec):
        aa, bb = mpmath.mpmathify(a), mpmath.mpmathify(b)
        lx = mpmath.log(x0) + 2j * mp.pi * sheet
        inner = prec + 16
        t1 = olver_m(aa, bb, x0, inner, config).to_mpc() * mpmath.rgamma(aa - bb + 1)
        t2 = (mpmath.exp((1 - bb) * lx) * olver_m(aa - bb + 1, 2 - bb, x0, inner, config).to_mpc()
              * mpmath.rgamma(aa))
        val = (t1 - t2) * mp.pi / mpmath.sinpi(bb)
        return val, _lost_bits(max(abs(t1), abs(t2)), t1 - t2)

    return ScaledComplex.normalize(_adaptive(run, bits, config))


def u_upper_sheet(n: int, alpha: Real, z: Number, bits: Optional[int] = None,
                  config: OracleConfig = DEFAULT) -> ScaledComplex:
    """U(n+alpha+1, alpha+1, u z e^(-pi i)) for Im z >= 0, u = n + 1/2."""
    bits = bits or config.bits
    z = mpc(z)
    if z.imag < 0:
        raise ValueError("z must lie in the closed upper half-plane")
    with mpmath.workprec(bits + 64):
        al = _frac_to_mpf(_as_fraction(alpha))
        u = mpf(n) + mpf(1) / 2
        xs = -u * z
        # arg(uz) - pi lies in [-pi, 0]; the principal arg of -uz is +pi on the real axis
        sheet = -1 if xs.imag == 0 and xs.real < 0 else 0
        return u_exact(n + al + 1, al + 1, xs, sheet, bits, config)


# -- error metrics ------------------------------------------------------------------

def envelope(n: int, alpha: Real, x: Number, bits: Optional[int] = None,
             config: OracleConfig = DEFAULT) -> mpf:
    """{|L|^2 + |L'|^2}^(1/2), derivative with respect to x."""
    L = laguerre_exact(n, alpha, x, bits, config).to_mpc()
    D = laguerre_derivative_exact(n, alpha, x, bits, config).to_mpc()
    return mpmath.sqrt(abs(L) ** 2 + abs(D) ** 2)


def rel_err(approx: Number, exact: Number) -> Optional[mpf]:
    """|f - f*| / |f|, or None where f vanishes."""
    exact = exact.to_mpc() if isinstance(exact, ScaledComplex) else mpc(exact)
    approx = approx.to_mpc() if isinstance(approx, ScaledComplex) else mpc(approx)
    if exact == 0:
        return None
    return abs(approx - exact) / abs(exact)


def rel_err_env(approx: Number, n: int, alpha: Real, x: Number,
                bits: Optional[int] = None, config: OracleConfig = DEFAULT) -> tuple[Optional[mpf], mpf]:
    """(relative error, envelope-normalised error) of an approximation to L_n^(alpha)(x)."""
    exact = laguerre_exact(n, alpha, x, bits, config).to_mpc()
    approx = approx.to_mpc() if isinstance(approx, ScaledComplex) else mpc(approx)
    env = envelope(n, alpha, x, bits, config)
    eps = None if exact == 0 else abs(approx - exact) / abs(exact)
    return eps, abs(approx - exact) / env
