"""Closed-form regret bounds and numerical certification of the identities
and concentration inequalities behind them.

The verifiers spot-check displayed formulas at sampled points: antiderivatives
against central finite differences and adaptive quadrature, split points and
geometric tail sums against direct summation, and the maximal inequality
against seeded Monte Carlo.  They certify transcription fidelity, not proofs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .environments import RngStream
from .errors import ConfigurationError, VerificationError
from .numerics import gauss_tail_bounds, quadrature

__all__ = [
    "BoundReport",
    "thm1_bound",
    "minimax_lower_bound",
    "thm2_bound",
    "thm3_bound",
    "tail_split_point",
    "verify_prior_free_integrals",
    "verify_prior_free_tail_terms",
    "pull_count_threshold",
    "gauss_tail_bracket_check",
    "hoeffding_maximal_check",
]


@dataclass(frozen=True)
class BoundReport:
    """Outcome of a bound computation or a verification run."""

    name: str
    inputs: Mapping[str, Any]
    bound_value: float
    empirical: float | None = None
    satisfied: bool | None = None
    residuals: Mapping[str, float] = field(default_factory=dict)


def _check_nk(n: int, k: int) -> None:
    if n < 1:
        raise ValueError("n must be at least 1")
    if k < 2:
        raise ValueError("K must be at least 2")


def thm1_bound(n: int, k: int) -> float:
    """Prior-free Bayesian regret bound for Thompson Sampling: 14 sqrt(nK)."""
    _check_nk(n, k)
    return 14.0 * math.sqrt(n * k)


def minimax_lower_bound(n: int, k: int) -> float:
    """Worst-case lower bound matching thm1 up to the constant: sqrt(nK)/20."""
    _check_nk(n, k)
    return math.sqrt(n * k) / 20.0


def thm2_bound(delta: float) -> float:
    """Regret bound of the two-point policy, uniform in n: delta + 578/delta."""
    delta = float(delta)
    if not (delta > 0 and math.isfinite(delta)):
        raise ValueError("delta must be positive")
    return delta + 578.0 / delta


def thm3_bound(gaps: Sequence[float], epsilon: float) -> float:
    """Regret bound of the min-gap policy, uniform in n.

    Sum over arms with positive gap of  gap + (80 + log(gap/epsilon)) / gap.
    """
    epsilon = float(epsilon)
    if not (epsilon > 0 and math.isfinite(epsilon)):
        raise ValueError("epsilon must be positive")
    total = 0.0
    for i, g in enumerate(gaps):
        g = float(g)
        if g < 0:
            raise ValueError(f"gap {i} is negative")
        if g == 0.0:
            continue
        if g < epsilon * (1.0 - 1e-12):
            raise ConfigurationError(
                f"gap {g} of arm {i} is below epsilon={epsilon}; "
                "the known-min-gap contract is violated"
            )
        total += g + (80.0 + math.log(g / epsilon)) / g
    return total


# ---------------------------------------------------------------------------
# Verifiers for the prior-free bound's integration steps
# ---------------------------------------------------------------------------


def _delta0(n: int, k: int) -> float:
    return 2.0 * math.sqrt(k / n)


def _require_wide_horizon(n: int, k: int) -> None:
    _check_nk(n, k)
    if n < 16 * k:
        raise ValueError("need n >= 16 K so that 2 sqrt(K/n) <= 1/2")


def verify_prior_free_integrals(
    n: int, k: int, *, samples: int = 100, seed: int = 0, tol: float = 1e-6
) -> BoundReport:
    """Check the two closed-form integrals used by the prior-free bound.

    For each of
        f1(u) = (4K/(n u^2)) log(sqrt(n/K) u),
        f2(u) = 1 / (n u^2 / K - 1),
    the claimed antiderivative is validated by central finite differences at
    ``samples`` random points of (delta0, 1), the definite integral over
    [delta0, 1] is matched against quadrature, and the endpoint-dropped upper
    bounds 2(1+log 2) sqrt(K/n) and (log 3)/2 sqrt(K/n) are confirmed.
    """
    _require_wide_horizon(n, k)
    d0 = _delta0(n, k)
    r = math.sqrt(n / k)

    def f1(u: float) -> float:
        return 4.0 * k / (n * u * u) * math.log(r * u)

    def anti1(u: float) -> float:
        return -4.0 * k / (n * u) * math.log(math.e * r * u)

    def f2(u: float) -> float:
        return 1.0 / (n * u * u / k - 1.0)

    def anti2(u: float) -> float:
        return -0.5 * math.sqrt(k / n) * math.log((r * u + 1.0) / (r * u - 1.0))

    residuals: dict[str, float] = {}
    gen = RngStream(seed, 0).make()
    h = 1e-6
    for label, f, anti in (("f1", f1, anti1), ("f2", f2, anti2)):
        worst = 0.0
        for u in gen.uniform(d0 + 2 * h, 1.0 - 2 * h, size=samples):
            derivative = (anti(u + h) - anti(u - h)) / (2.0 * h)
            worst = max(worst, abs(derivative - f(u)) / abs(f(u)))
        residuals[f"{label}_fd_rel"] = worst
        if worst > tol:
            raise VerificationError(
                f"finite differences of the {label} antiderivative exceed {tol}",
                residuals,
            )

    bound1 = 2.0 * (1.0 + math.log(2.0)) * math.sqrt(k / n)
    bound2 = 0.5 * math.log(3.0) * math.sqrt(k / n)
    for label, f, anti, bound in (
        ("f1", f1, anti1, bound1),
        ("f2", f2, anti2, bound2),
    ):
        exact = anti(1.0) - anti(d0)
        quad_value = quadrature(f, d0, 1.0, tol=1e-12)
        rel = abs(quad_value - exact) / abs(exact)
        residuals[f"{label}_quad_rel"] = rel
        residuals[f"{label}_bound_margin"] = bound - exact
        if rel > tol:
            raise VerificationError(
                f"quadrature of {label} does not match its antiderivative", residuals
            )
        if exact > bound + 1e-15:
            raise VerificationError(
                f"definite integral of {label} exceeds its displayed bound", residuals
            )
    # Dropping the upper endpoint term is exactly what loosens bound1.
    residuals["f1_bound_gap_expected"] = 4.0 * k / n * (1.0 + 0.5 * math.log(n / k))
    return BoundReport(
        name="prior-free-integrals",
        inputs={"n": n, "K": k, "samples": samples},
        bound_value=bound1 + bound2,
        satisfied=True,
        residuals=residuals,
    )


def tail_split_point(u: float, n: int, k: int) -> int:
    """Pull-count split ceil(3 log(n u^2 / K) / u^2) used by the tail bound."""
    return math.ceil(3.0 * math.log(n * u * u / k) / (u * u))


def verify_prior_free_tail_terms(
    n: int, k: int, *, samples: int = 100, seed: int = 0
) -> BoundReport:
    """Check the tail-splitting step of the prior-free bound.

    At ``samples`` points u of [delta0, 1/c] with c = 1 - 1/sqrt(3): the split
    point s(u) is a valid index (>= 1), and the direct sum
    Sum_{s=s(u)}^{n} exp(-2 s c^2 u^2) stays below the displayed geometric
    bound exp(-12 c^2 log 2) / (1 - exp(-2 c^2 u^2)).
    """
    _require_wide_horizon(n, k)
    c = 1.0 - 1.0 / math.sqrt(3.0)
    d0 = _delta0(n, k)
    gen = RngStream(seed, 0).make()
    numerator = math.exp(-12.0 * c * c * math.log(2.0))
    worst_margin = math.inf
    for u in gen.uniform(d0, 1.0 / c, size=samples):
        s_u = tail_split_point(u, n, k)
        if s_u < 1:
            raise VerificationError(f"split point {s_u} < 1 at u={u}")
        s = np.arange(s_u, n + 1)
        direct = float(np.exp(-2.0 * s * c * c * u * u).sum())
        rhs = numerator / (1.0 - math.exp(-2.0 * c * c * u * u))
        if direct > rhs:
            raise VerificationError(
                f"geometric tail bound violated at u={u}: {direct} > {rhs}"
            )
        worst_margin = min(worst_margin, rhs - direct)
    return BoundReport(
        name="prior-free-tail-terms",
        inputs={"n": n, "K": k, "samples": samples, "c": c},
        bound_value=numerator,
        satisfied=True,
        residuals={"min_margin": worst_margin, "split_at_delta0": tail_split_point(d0, n, k)},
    )


def pull_count_threshold(delta: float, epsilon: float) -> int:
    """Pull count ceil((6/delta^2) (6 + log(delta/epsilon))) past which a
    suboptimal arm's weight is negligible; always at least 36/delta^2."""
    delta, epsilon = float(delta), float(epsilon)
    if not (epsilon > 0 and delta >= epsilon):
        raise ValueError("need delta >= epsilon > 0")
    threshold = math.ceil(6.0 / (delta * delta) * (6.0 + math.log(delta / epsilon)))
    if threshold < 36.0 / (delta * delta):
        raise VerificationError(
            f"threshold {threshold} fell below 36/delta^2 for delta={delta}"
        )
    return threshold


def gauss_tail_bracket_check(
    *, samples: int = 50, x_max: float = 8.0, seed: int = 0
) -> BoundReport:
    """Confirm the Gaussian tail bracket against quadrature at random points."""
    gen = RngStream(seed, 0).make()
    worst = math.inf
    for x in gen.uniform(1e-3, x_max, size=samples):
        lower, upper = gauss_tail_bounds(x)
        tail = quadrature(
            lambda v: math.exp(-0.5 * v * v), x, x + 45.0, tol=max(upper * 1e-10, 1e-150)
        )
        if not lower <= tail <= upper:
            raise VerificationError(
                f"tail bracket violated at x={x}: {lower} <= {tail} <= {upper} fails"
            )
        worst = min(worst, upper - tail, tail - lower)
    return BoundReport(
        name="gauss-tail-bracket",
        inputs={"samples": samples, "x_max": x_max},
        bound_value=x_max,
        satisfied=True,
        residuals={"min_margin": worst},
    )


def hoeffding_maximal_check(
    m: int, x: float, trials: int, rng: RngStream
) -> BoundReport:
    """Monte Carlo check of the maximal inequality for Gaussian partial sums.

    Estimates P(exists s <= m with s * (mu - mean_s) >= x) for i.i.d. standard
    normals and compares it with exp(-x^2 / (2m)) plus three binomial standard
    errors.
    """
    if m < 1 or trials < 1:
        raise ValueError("m and trials must be positive")
    if not x > 0:
        raise ValueError("x must be positive")
    gen = rng.make()
    hits = 0
    chunk_rows = max(1, int(2_000_000 // m))
    remaining = trials
    while remaining > 0:
        rows = min(chunk_rows, remaining)
        draws = gen.standard_normal((rows, m))
        # s * (mu - mean_s) is minus the partial sum of centered draws
        deviations = -np.cumsum(draws, axis=1)
        hits += int((deviations.max(axis=1) >= x).sum())
        remaining -= rows
    frequency = hits / trials
    bound = math.exp(-x * x / (2.0 * m))
    se = math.sqrt(frequency * (1.0 - frequency) / trials)
    return BoundReport(
        name="hoeffding-maximal",
        inputs={"m": m, "x": x, "trials": trials},
        bound_value=bound,
        empirical=frequency,
        satisfied=frequency <= bound + 3.0 * se,
        residuals={"three_se": 3.0 * se},
    )
