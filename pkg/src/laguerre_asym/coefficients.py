"""Coefficient functions of the Liouville-Green expansions.

The functions are generated for one (n, alpha) at a time as rational
functions of z: a polynomial numerator over a power of S(z).  Two sign
conventions are involved and both are exposed:

* the *normalized* convention (``ehat``) is the one in which the published
  closed forms are stated: the first numerator is
  (1/(48a^2)) [(a^2-1)^2((a^2-1)^2-4a^2) - 3(a^2+1)^3 z + 3(a^4+6a^2+1) z^2 - (a^2+1) z^3],
  d/dz ehat_s = fhat_s S / (2z), and ehat_s(0) = mu_s;
* the *expansion* convention (``e_values``) E_s = (-1)^s ehat_s is what enters
  the exponent sums, because the Liouville variable decreases along the
  positive real axis (d xi/dz = -S/(2z)).  Its limit at infinity is lam_s,
  the ratio of leading coefficients, and its value at 0 is (-1)^s mu_s.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
from mpmath import mp, mpc, mpf

from .liouville import ShapeParams, big_S

Poly = list  # dense coefficient list, index = power of z


class InconsistentSystemError(RuntimeError):
    """The undetermined-coefficient system has no solution (an algebra bug)."""


def padd(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def pmul(p: Poly, q: Poly) -> Poly:
    out = [mpf(0)] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x == 0:
            continue
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def pscale(p: Poly, c) -> Poly:
    return [c * x for x in p]


def pder(p: Poly) -> Poly:
    return [i * p[i] for i in range(1, len(p))] or [mpf(0)]


def peval(p: Poly, z):
    acc = 0
    for c in reversed(p):
        acc = acc * z + c
    return acc


@dataclass(frozen=True)
class FHatTerm:
    """fhat_s S/(2z) = numerator / S**S_power, with S_power = 3s + 2."""

    s: int
    numerator: tuple
    S_power: int


@dataclass(frozen=True)
class RationalCoefficient:
    """ehat_s = numerator / S**S_power, with S_power = 3s."""

    s: int
    parity: str
    numerator: tuple
    S_power: int

    def degree(self) -> int:
        d = len(self.numerator) - 1
        scale = max(abs(c) for c in self.numerator)
        tol = scale * mpf(2) ** (-mp.prec // 2)
        while d > 0 and abs(self.numerator[d]) <= tol:
            d -= 1
        return d


def _quadratic(A: mpf) -> Poly:
    """S**2 as a polynomial in z."""
    return [(A - 1) ** 2, -2 * (A + 1), mpf(1)]


def _fhat_numerators(A: mpf, s_max: int) -> list:
    """P_s with fhat_s = z P_s / S**(3s+3) (index 0 unused).

    fhat_1 = phi/2 and fhat_{s+1} = -(z/S) d(fhat_s)/dz - (1/2) sum fhat_j fhat_{s-j}.
    """
    Q = _quadratic(A)
    Qp = pder(Q)
    phi_num = [8 * (A + 1) * (A - 1) ** 2, -4 * (3 * A - 1) * (A - 3), mpf(0), mpf(4)]
    P = [None, pscale(phi_num, mpf(-1) / 8)]
    z = [mpf(0), mpf(1)]
    for s in range(1, s_max):
        Ps = P[s]
        nxt = padd(pscale(pmul(padd(Ps, pmul(z, pder(Ps))), Q), -1),
                   pscale(pmul(pmul(z, Ps), Qp), mpf(3 * (s + 1)) / 2))
        acc = [mpf(0)]
        for j in range(1, s):
            acc = padd(acc, pmul(P[j], P[s - j]))
        nxt = padd(nxt, pscale(pmul(z, acc), mpf(-1) / 2))
        P.append(nxt)
    return P


def _eliminate(rows: list, ncols: int) -> tuple[list, mpf]:
    """Solve an overdetermined but consistent system by full-pivot elimination.

    ``rows`` holds augmented rows [coeffs..., rhs].  Returns the solution and
    the largest leftover residual (relative to the rhs scale).
    """
    rows = [list(r) for r in rows]
    nrows = len(rows)
    perm = list(range(ncols))
    rank = 0
    for k in range(ncols):
        best, bi, bj = mpf(0), -1, -1
        for i in range(k, nrows):
            r = rows[i]
            for j in range(k, ncols):
                v = abs(r[j])
                if v > best:
                    best, bi, bj = v, i, j
        if best == 0:
            break
        rows[k], rows[bi] = rows[bi], rows[k]
        if bj != k:
            for r in rows:
                r[k], r[bj] = r[bj], r[k]
            perm[k], perm[bj] = perm[bj], perm[k]
        piv = rows[k][k]
        for i in range(k + 1, nrows):
            f = rows[i][k] / piv
            if f != 0:
                ri, rk = rows[i], rows[k]
                for j in range(k, ncols + 1):
                    ri[j] -= f * rk[j]
        rank += 1
    if rank < ncols:
        raise InconsistentSystemError("singular coefficient system")
    x = [mpf(0)] * ncols
    for k in reversed(range(ncols)):
        acc = rows[k][ncols]
        for j in range(k + 1, ncols):
            acc -= rows[k][j] * x[j]
        x[k] = acc / rows[k][k]
    scale = max([abs(r[ncols]) for r in rows] + [mpf(1)])
    resid = max([abs(rows[i][ncols]) for i in range(ncols, nrows)] + [mpf(0)]) / scale
    out = [mpf(0)] * ncols
    for k in range(ncols):
        out[perm[k]] = x[k]
    return out, resid


def _solve_numerator(A: mpf, s: int, rhs: Poly) -> tuple[Poly, mpf]:
    """Polynomial T with T' Q - (3s/2) T Q' = rhs, deg T <= 3s (odd s) or 3s-1 (even s).

    For even s the homogeneous solution S**(3s) is a polynomial; dropping the
    z**(3s) unknown removes it, which fixes ehat_s(inf) = 0.
    """
    q0, q1 = (A - 1) ** 2, -2 * (A + 1)
    d = 3 * s if s % 2 else 3 * s - 1
    ncols = d + 1
    nrows = max(d + 2, len(rhs))
    h = mpf(3 * s) / 2
    rows = []
    for i in range(nrows):
        r = [mpf(0)] * (ncols + 1)
        # coefficient of z**i: q0 (i+1) t_{i+1} + q1 (i - 3s/2) t_i + (i - 1 - 3s) t_{i-1}
        if i + 1 < ncols:
            r[i + 1] += q0 * (i + 1)
        if i < ncols:
            r[i] += q1 * (i - h)
        if 0 <= i - 1 < ncols:
            r[i - 1] += i - 1 - 3 * s
        r[ncols] = rhs[i] if i < len(rhs) else mpf(0)
        rows.append(r)
    return _eliminate(rows, ncols)


@lru_cache(maxsize=32)
def _generate(a2: Fraction, s_max: int, prec: int) -> tuple:
    extra = 64
    for attempt in range(2):
        with mpmath.workprec(prec + extra):
            A = mpf(a2.numerator) / a2.denominator
            P = _fhat_numerators(A, s_max)
            T = [None]
            worst = mpf(0)
            for s in range(1, s_max + 1):
                t, resid = _solve_numerator(A, s, pscale(P[s], mpf(1) / 2))
                worst = max(worst, resid)
                T.append(t)
            if worst <= mpf(2) ** (-(prec + extra // 2)):
                break
        if attempt == 0:
            extra = prec + 64
    else:
        raise InconsistentSystemError(f"residual {mpmath.nstr(worst, 5)} after precision doubling")
    with mpmath.workprec(prec):
        P = tuple(tuple(+c for c in pscale(P[s], mpf(1) / 2)) for s in range(1, s_max + 1))
        T = tuple(tuple(+c for c in T[s]) for s in range(1, s_max + 1))
    return P, T


def gen_fhat(s_max: int, p: ShapeParams) -> list[FHatTerm]:
    if s_max < 1:
        raise ValueError("s_max must be >= 1")
    P, _ = _generate(p.a2, s_max, mp.prec)
    return [FHatTerm(s, P[s - 1], 3 * s + 2) for s in range(1, s_max + 1)]


def gen_ehat(s_max: int, p: ShapeParams) -> list[RationalCoefficient]:
    if s_max < 1:
        raise ValueError("s_max must be >= 1")
    _, T = _generate(p.a2, s_max, mp.prec)
    return [RationalCoefficient(s, "odd" if s % 2 else "even", T[s - 1], 3 * s)
            for s in range(1, s_max + 1)]


def lambda_mu(s_max: int, p: ShapeParams) -> tuple[list, list]:
    """(lam_1..lam_smax, mu_1..mu_smax).

    lam_s is the ratio of leading coefficients of numerator and S**(3s)
    (the limit of E_s = (-1)**s ehat_s at infinity); mu_s = ehat_s(0).
    """
    ehat = gen_ehat(s_max, p)
    c = p.c
    lam, mu = [], []
    for e in ehat:
        lam.append(e.numerator[3 * e.s] if len(e.numerator) > 3 * e.s else mpf(0))
        mu.append(e.numerator[0] / c ** (3 * e.s) if c != 0 else mpf("nan"))
    return lam, mu


def airy_aux_constants(s_max: int) -> tuple[tuple, tuple]:
    """(a_1..a_smax, atilde_1..atilde_smax) as exact fractions."""
    if s_max < 2:
        raise ValueError("s_max must be >= 2")

    def run(seed: Fraction) -> tuple:
        b = [None, seed, seed]
        for s in range(2, s_max):
            conv = sum((b[j] * b[s - j] for j in range(1, s)), Fraction(0))
            b.append(Fraction(s + 1, 2) * b[s] + conv / 2)
        return tuple(b[1:s_max + 1])

    return run(Fraction(5, 72)), run(Fraction(-7, 72))


@dataclass(frozen=True)
class CoefficientTable:
    """Everything the expansions need for one (n, alpha), frozen after build."""

    params: ShapeParams
    s_max: int
    ehat: tuple
    fhat: tuple
    lam: tuple
    mu: tuple
    a_aux: tuple
    at_aux: tuple
    prec: int

    @classmethod
    def build(cls, p: ShapeParams, s_max: int = 16) -> "CoefficientTable":
        ehat = gen_ehat(s_max, p)
        lam, mu = lambda_mu(s_max, p)
        a_aux, at_aux = airy_aux_constants(max(s_max, 2))
        return cls(p, s_max, tuple(ehat), tuple(gen_fhat(s_max, p)), tuple(lam), tuple(mu),
                   tuple(mpf(x.numerator) / x.denominator for x in a_aux),
                   tuple(mpf(x.numerator) / x.denominator for x in at_aux), mp.prec)

    @property
    def mu_expansion(self) -> tuple:
        """Values E_s(0) = (-1)**s mu_s."""
        return tuple((-1) ** (s + 1) * m for s, m in enumerate(self.mu))

    def ehat_from_S(self, z: mpc, S: mpc, upto: int | None = None) -> list:
        upto = self.s_max if upto is None else upto
        out = []
        for e in self.ehat[:upto]:
            out.append(peval(e.numerator, z) / S ** e.S_power)
        return out

    def e_from_S(self, z: mpc, S: mpc, upto: int | None = None) -> list:
        return [(-1) ** (s + 1) * v for s, v in enumerate(self.ehat_from_S(z, S, upto))]


def eval_ehat(coeffs: Sequence[RationalCoefficient], z, p: ShapeParams, side: str = "above") -> list:
    """ehat_s(z) in the normalized convention, for each supplied coefficient."""
    z = mpc(z)
    S = big_S(z, p, side)
    if S == 0:
        raise ZeroDivisionError("coefficient functions have poles at the turning points")
    return [peval(e.numerator, z) / S ** e.S_power for e in coeffs]


def eval_fhat_ratio(terms: Sequence[FHatTerm], z, p: ShapeParams, side: str = "above") -> list:
    """fhat_s(z) S(z) / (2z) for each supplied term."""
    z = mpc(z)
    S = big_S(z, p, side)
    return [peval(t.numerator, z) / S ** t.S_power for t in terms]
