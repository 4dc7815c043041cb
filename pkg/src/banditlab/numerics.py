"""Numerically stable scalar kernels used by the posterior-weight policies.

The only nontrivial primitive is the log of the standard normal CDF, which
must stay accurate for arguments hundreds of standard deviations into the
left tail; everything else is thin arithmetic on top of it.
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import DegenerateWeightsError, QuadratureAccuracyError

__all__ = [
    "log_plus",
    "normalize_log_weights",
    "log_gauss_cdf",
    "log_trunc_gauss_integral",
    "gauss_tail_bounds",
    "quadrature",
]


def log_plus(x: float) -> float:
    """log(x) clipped below at zero: log(x) for x >= 1, else 0."""
    x = float(x)
    if not (x > 0):
        raise ValueError(f"log_plus requires x > 0, got {x!r}")
    return math.log(x) if x >= 1.0 else 0.0


def normalize_log_weights(log_weights) -> np.ndarray:
    """Exponentiate and normalize a vector of natural-log weights.

    Entries may be -inf (zero weight); +inf and NaN are rejected.  The result
    is invariant, up to rounding, to adding a constant to every entry.
    """
    lw = np.asarray(log_weights, dtype=float)
    if lw.ndim != 1 or lw.size == 0:
        raise ValueError("log weights must be a nonempty 1-d vector")
    if np.isnan(lw).any() or np.isposinf(lw).any():
        raise ValueError("log weights must be finite or -inf")
    top = lw.max()
    if top == -math.inf:
        raise DegenerateWeightsError("all log weights are -inf")
    p = np.exp(lw - top)
    return p / p.sum()


# log Phi(z).  Three regimes:
#   z >= -1     : plain CDF via erf, no cancellation (Phi >= 0.158).
#   -35 <= z<-1 : erfc keeps full relative precision down to ~1e-268.
#   z < -35     : erfc underflows; use the Mills-ratio continued fraction
#                 Phi(-x) = phi(x) / (x + 1/(x + 2/(x + 3/(x + ...)))).
# Written with literal constants and a plain loop so the identical source can
# be JIT-compiled for the episode kernels.
def _log_gauss_cdf_impl(z: float) -> float:
    if z >= -1.0:
        return math.log(0.5 * (1.0 + math.erf(z / 1.4142135623730951)))
    if z >= -35.0:
        return math.log(0.5 * math.erfc(-z / 1.4142135623730951))
    x = -z
    cf = 0.0
    for k in range(48, 0, -1):
        cf = k / (x + cf)
    # 0.9189385332046727 = log(sqrt(2*pi))
    return -0.5 * z * z - 0.9189385332046727 - math.log(x + cf)


def log_gauss_cdf(z: float) -> float:
    """log of the standard normal CDF, accurate over the whole real line."""
    return _log_gauss_cdf_impl(float(z))


def log_trunc_gauss_integral(m: float, a: float, s: int) -> float:
    """log of integral_{-inf}^{a} exp(-(s/3) (v - m)^2) dv.

    Equals log( sqrt(3 pi / s) * Phi((a - m) sqrt(2 s / 3)) ); nondecreasing
    in ``a`` and converging to log sqrt(3 pi / s) as a -> +inf.
    """
    s = int(s)
    if s < 1:
        raise ValueError("sample count s must be at least 1")
    z = (float(a) - float(m)) * math.sqrt(2.0 * s / 3.0)
    return 0.5 * math.log(3.0 * math.pi / s) + _log_gauss_cdf_impl(z)


def gauss_tail_bounds(x: float) -> tuple[float, float]:
    """Bracket for integral_x^inf exp(-v^2/2) dv:

    (1/x)(1 - 1/x^2) e^{-x^2/2}  <=  tail  <=  (1/x) e^{-x^2/2},  for x > 0.
    """
    x = float(x)
    if not (x > 0):
        raise ValueError(f"gauss_tail_bounds requires x > 0, got {x!r}")
    core = math.exp(-0.5 * x * x) / x
    return (1.0 - 1.0 / (x * x)) * core, core


def quadrature(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> float:
    """Adaptive quadrature of ``f`` on [lo, hi] with certified absolute error <= tol.

    Finite intervals only; callers integrating to infinity truncate where the
    integrand is negligible.  Raises QuadratureAccuracyError (carrying the
    achieved bound) when the requested tolerance cannot be certified.
    """
    lo, hi, tol = float(lo), float(hi), float(tol)
    if not lo < hi:
        raise ValueError("quadrature requires lo < hi")
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    out = quad(f, lo, hi, epsabs=tol, epsrel=0.0, limit=400, full_output=1)
    value, achieved = float(out[0]), float(out[1])
    if achieved > tol:
        raise QuadratureAccuracyError(
            f"quadrature reached error bound {achieved:.3e} > tol {tol:.3e}",
            achieved=achieved,
        )
    return value
