"""scikit-learn style front end.

``fit`` fixes (n, alpha), builds the coefficient table once and freezes the
options; ``predict`` evaluates at an array of z points.
"""

from __future__ import annotations

from numbers import Integral
from typing import Optional

import mpmath
import numpy as np
from mpmath import mpc, mpf
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .expansions import EvalOptions, ExpansionResult, TruncationOrders, evaluate, evaluate_u, table_for
from .liouville import make_params
from .numeric import PrecisionContext, ScaledComplex, default_bits

_METHODS = ("auto", "lg", "airy", "cauchy")
_CASES = ("auto", "1a", "1b", "2")


def check_points(X, bits: Optional[int] = None) -> list[mpc]:
    """Coerce a scalar or a 1-d (or n x 1) collection of z values to mpc.

    Strings are parsed at the working precision, so "0.1" is exact to the
    last bit rather than a rounded double.
    """
    bits = bits or default_bits()
    if isinstance(X, (str, int, float, complex, mpf, mpc)):
        X = [X]
    if isinstance(X, np.ndarray):
        if X.ndim == 2 and X.shape[1] == 1:
            X = X[:, 0]
        elif X.ndim != 1:
            raise ValueError(f"expected a 1-d array of points, got shape {X.shape}")
        X = X.tolist()
    out = []
    with mpmath.workprec(bits):
        for x in X:
            if isinstance(x, (list, tuple)):
                if len(x) != 1:
                    raise ValueError("each sample must be a single z value")
                x = x[0]
            try:
                z = mpc(mpmath.mpmathify(x.replace(" ", "")) if isinstance(x, str) else x)
            except (TypeError, ValueError) as exc:
                raise ValueError(f"cannot read {x!r} as a complex number") from exc
            if not (mpmath.isfinite(z.real) and mpmath.isfinite(z.imag)):
                raise ValueError(f"non-finite point {x!r}")
            out.append(z)
    if not out:
        raise ValueError("no points given")
    return out


class LaguerreExpansion(BaseEstimator):
    """Asymptotic L_n^(alpha)(uz) (function="L") or U(n+alpha+1, alpha+1, uz e^(-pi i)) ("U").

    Parameters mirror the command line: N and m are the truncation orders
    (m defaults to N/2), bits the mantissa length (default from
    LAGUERRE_ASYM_BITS).
    """

    def __init__(self, n: int = 100, alpha=0, N: int = 16, m: Optional[int] = None,
                 bits: Optional[int] = None, method: str = "auto", case: str = "auto",
                 contour_points: int = 100, contour_radius=None, function: str = "L"):
        self.n = n
        self.alpha = alpha
        self.N = N
        self.m = m
        self.bits = bits
        self.method = method
        self.case = case
        self.contour_points = contour_points
        self.contour_radius = contour_radius
        self.function = function

    def _validate(self) -> None:
        if not isinstance(self.n, Integral) or self.n < 1:
            raise ValueError("n must be a positive integer")
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")
        if self.case not in _CASES:
            raise ValueError(f"case must be one of {_CASES}")
        if self.function not in ("L", "U"):
            raise ValueError("function must be 'L' or 'U'")
        if int(self.contour_points) < 4:
            raise ValueError("contour_points must be >= 4")

    def fit(self, X=None, y=None):
        """Build the coefficient table.  X and y are ignored."""
        self._validate()
        self.precision_ = PrecisionContext(int(self.bits or default_bits()))
        self.orders_ = TruncationOrders(int(self.N), None if self.m is None else int(self.m))
        with self.precision_.activate():
            self.params_ = make_params(int(self.n), self.alpha)
            radius = None if self.contour_radius is None else mpf(self.contour_radius)
            self.options_ = EvalOptions(self.method, self.case, int(self.contour_points), radius)
            self.table_ = table_for(self.params_, self.orders_.s_needed + 2)
        self.case_tag_ = self.params_.case_tag
        return self

    def predict_results(self, X) -> list[ExpansionResult]:
        check_is_fitted(self, "table_")
        pts = check_points(X, self.precision_.working_bits)
        fn = evaluate if self.function == "L" else evaluate_u
        with self.precision_.activate():
            return [fn(z, self.params_, self.orders_, self.options_) for z in pts]

    def predict_scaled(self, X) -> list[ScaledComplex]:
        return [r.value for r in self.predict_results(X)]

    def predict(self, X) -> np.ndarray:
        """complex128 values; entries beyond double range become inf or 0."""
        out = []
        for v in self.predict_scaled(X):
            try:
                out.append(complex(v))
            except OverflowError:
                out.append(complex(np.inf, 0))
        return np.asarray(out, dtype=np.complex128)

    def error_estimates(self, X) -> np.ndarray:
        return np.asarray([float(r.est_error) for r in self.predict_results(X)])
