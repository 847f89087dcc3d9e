"""Extended-precision plumbing shared by every other module.

mpmath supplies the arbitrary-precision reals and complexes. This module adds
a precision context, an overflow-proof mantissa/exponent value type and a few
branch-aware logarithms used throughout the coordinate code.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator, Union

import mpmath
from mpmath import mp, mpc, mpf

Number = Union[int, float, complex, mpf, mpc]

DEFAULT_BITS_ENV = "LAGUERRE_ASYM_BITS"


class DomainError(ValueError):
    """Argument outside the domain of a real-valued function."""


def default_bits() -> int:
    """Mantissa bits used when nothing else is specified.

    Read from the environment variable ``LAGUERRE_ASYM_BITS`` (default 256).
    """
    raw = os.environ.get(DEFAULT_BITS_ENV)
    if raw is None:
        return 256
    bits = int(raw)
    if bits < 64:
        raise ValueError(f"{DEFAULT_BITS_ENV} must be >= 64, got {bits}")
    return bits


@dataclass(frozen=True)
class PrecisionContext:
    mantissa_bits: int = 256
    guard_bits: int = 32

    def __post_init__(self) -> None:
        if self.mantissa_bits < 64:
            raise ValueError("mantissa_bits must be >= 64")
        if self.guard_bits < 0:
            raise ValueError("guard_bits must be non-negative")

    @property
    def working_bits(self) -> int:
        return self.mantissa_bits + self.guard_bits

    @contextmanager
    def activate(self) -> Iterator["PrecisionContext"]:
        # mpmath keeps its precision in a process-global context, so this
        # is not safe to interleave across threads; use processes instead.
        with mpmath.workprec(self.working_bits):
            yield self

    def doubled(self) -> "PrecisionContext":
        return PrecisionContext(2 * self.mantissa_bits, self.guard_bits)

    def eps(self) -> mpf:
        return mpf(2) ** (-self.mantissa_bits)


def to_mpc(w: Number) -> mpc:
    return mpc(w)


def log_gamma(x: Number) -> mpf:
    """ln Gamma(x) for real x > 0."""
    x = mpf(x)
    if x <= 0:
        raise DomainError("log_gamma requires x > 0")
    return mpmath.loggamma(x)


def clog_upper(w: Number) -> mpc:
    """Logarithm for arguments known to lie in the closed upper half-plane.

    A negative real argument gets arg = +pi even if rounding put it slightly
    below the axis.
    """
    lw = mpmath.log(mpc(w))
    if lw.imag < -mp.pi / 2:
        lw += 2j * mp.pi
    return lw


def clog_lower(w: Number) -> mpc:
    """Logarithm for arguments known to lie in the closed lower half-plane.

    A negative real argument gets arg = -pi.
    """
    lw = mpmath.log(mpc(w))
    if lw.imag > mp.pi / 2:
        lw -= 2j * mp.pi
    return lw


def _exact_norm2(m: mpc) -> mpf:
    re, im = m.real, m.imag
    if re and im and abs(mpmath.mag(re) - mpmath.mag(im)) > 2 * mp.prec + 16:
        # the smaller part cannot move the exponent; an exact sum would be huge
        big = re if abs(re) > abs(im) else im
        return mpmath.fmul(big, big, exact=True)
    return mpmath.fadd(mpmath.fmul(re, re, exact=True), mpmath.fmul(im, im, exact=True), exact=True)


@dataclass(frozen=True)
class ScaledComplex:
    """A complex number ``mantissa * 2**exponent``.

    The mantissa satisfies 1 <= |mantissa| < 2 (or is exactly zero), which
    makes the representation unique and the shift to and from a plain mpc
    exact.
    """

    mantissa: mpc
    exponent: int

    @staticmethod
    def normalize(value: Number, exponent: int = 0) -> "ScaledComplex":
        m = mpc(value)
        if m == 0:
            return ScaledComplex(mpc(0), 0)
        q = _exact_norm2(m)
        _, e2 = mpmath.frexp(q)
        k = (int(e2) - 1) // 2
        m = mpc(mpmath.ldexp(m.real, -k), mpmath.ldexp(m.imag, -k))
        return ScaledComplex(m, int(exponent) + k)

    @classmethod
    def from_log(cls, w: Number) -> "ScaledComplex":
        return scaled_exp(w)

    def denormalize(self) -> mpc:
        """The plain value (mpmath exponents are unbounded)."""
        return mpc(mpmath.ldexp(self.mantissa.real, self.exponent),
                   mpmath.ldexp(self.mantissa.imag, self.exponent))

    to_mpc = denormalize

    def is_zero(self) -> bool:
        return self.mantissa == 0

    def log(self) -> mpc:
        if self.is_zero():
            raise DomainError("log of zero")
        return mpmath.log(self.mantissa) + self.exponent * mpmath.ln2

    def abs_log2(self) -> mpf:
        """log2 of the modulus."""
        if self.is_zero():
            return mpf("-inf")
        return mpmath.log(abs(self.mantissa), 2) + self.exponent

    def conjugate(self) -> "ScaledComplex":
        return ScaledComplex(mpmath.conj(self.mantissa), self.exponent)

    def __mul__(self, other: object) -> "ScaledComplex":
        if isinstance(other, ScaledComplex):
            return ScaledComplex.normalize(self.mantissa * other.mantissa,
                                           self.exponent + other.exponent)
        return ScaledComplex.normalize(self.mantissa * mpc(other), self.exponent)

    __rmul__ = __mul__

    def __neg__(self) -> "ScaledComplex":
        return ScaledComplex(-self.mantissa, self.exponent)

    def __truediv__(self, other: object) -> "ScaledComplex":
        if isinstance(other, ScaledComplex):
            return ScaledComplex.normalize(self.mantissa / other.mantissa,
                                           self.exponent - other.exponent)
        return ScaledComplex.normalize(self.mantissa / mpc(other), self.exponent)

    def add(self, other: "ScaledComplex") -> tuple["ScaledComplex", int]:
        """Sum with exponent alignment; also returns the bits lost to cancellation."""
        if self.is_zero():
            return other, 0
        if other.is_zero():
            return self, 0
        top = max(self.exponent, other.exponent)
        # shifting by an integer power of two is exact
        a = mpc(mpmath.ldexp(self.mantissa.real, self.exponent - top),
                mpmath.ldexp(self.mantissa.imag, self.exponent - top))
        b = mpc(mpmath.ldexp(other.mantissa.real, other.exponent - top),
                mpmath.ldexp(other.mantissa.imag, other.exponent - top))
        out = ScaledComplex.normalize(a + b, top)
        if out.is_zero():
            return out, mp.prec
        return out, max(0, top - out.exponent)

    def __add__(self, other: "ScaledComplex") -> "ScaledComplex":
        return self.add(other)[0]

    def __sub__(self, other: "ScaledComplex") -> "ScaledComplex":
        return self.add(-other)[0]

    def to_decimal(self) -> tuple[mpc, int]:
        """(mantissa10, exponent10) with 1 <= |mantissa10| < 10."""
        if self.is_zero():
            return mpc(0), 0
        lg = mpmath.log10(abs(self.mantissa)) + self.exponent * mpmath.log10(2)
        e10 = int(mpmath.floor(lg))
        m10 = self.mantissa * mpmath.power(2, self.exponent) / mpmath.power(10, e10)
        tol = mpf(2) ** (-mp.prec + 16)
        if abs(m10) >= 10 * (1 - tol):
            m10, e10 = m10 / 10, e10 + 1
        elif abs(m10) < 1 - tol:
            m10, e10 = m10 * 10, e10 - 1
        return m10, e10

    def __complex__(self) -> complex:
        return complex(self.denormalize())

    def format(self, digits: int = 20) -> str:
        """Decimal string ``re+imj`` scaled by a shared power of ten."""
        m10, e10 = self.to_decimal()
        return f"({mpmath.nstr(m10.real, digits)}{_signed(m10.imag, digits)}j)e{e10}"

    def __repr__(self) -> str:
        return f"ScaledComplex({self.format(12)})"


def _signed(x: mpf, digits: int) -> str:
    s = mpmath.nstr(x, digits)
    return s if s.startswith("-") else "+" + s


def scaled_exp(w: Number) -> ScaledComplex:
    """e**w as a ScaledComplex; safe for any |Re w| that fits a Python int."""
    w = mpc(w)
    with mpmath.extraprec(64):
        k = int(mpmath.floor(w.real / mpmath.ln2))
        r = w.real - k * mpmath.ln2
        m = mpmath.exp(mpc(r, w.imag))
    return ScaledComplex.normalize(+m, k)


def sum_scaled(terms: list[ScaledComplex]) -> tuple[ScaledComplex, int]:
    """Sum a list of ScaledComplex values, reporting cancellation in bits."""
    out = ScaledComplex(mpc(0), 0)
    biggest = None
    for t in terms:
        if t.is_zero():
            continue
        biggest = t.exponent if biggest is None else max(biggest, t.exponent)
        out = out + t
    if biggest is None:
        return out, 0
    if out.is_zero():
        return out, mp.prec
    return out, max(0, biggest - out.exponent)
