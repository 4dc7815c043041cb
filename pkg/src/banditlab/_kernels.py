"""JIT-compiled episode loops for the weight-based policies.

The kernels receive all randomness as pre-drawn arrays (one reward-noise value
and one policy uniform per round) and return the arm sequence plus the final
per-arm sufficient statistics, so a 1e5-round episode costs milliseconds
instead of seconds.  The arithmetic mirrors the pure-Python policies: the same
one-pass statistics recurrence, the same weight formulas, and the same
inverse-CDF draw, so both paths produce the same trace for the same stream.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from . import numerics

_log_gauss_cdf = njit(cache=True)(numerics._log_gauss_cdf_impl)


@njit(cache=True)
def _reward(bernoulli: bool, mean: float, noise: float) -> float:
    if bernoulli:
        return 1.0 if noise < mean else 0.0
    return mean + noise


@njit(cache=True)
def two_point_episode(uniforms, noise, bernoulli, means, mu_star, delta):
    """Run one episode of the two-point policy; returns (arms, pulls, sums, css)."""
    n = uniforms.shape[0]
    arms = np.empty(n, dtype=np.int8)
    pulls = np.zeros(2, dtype=np.int64)
    sums = np.zeros(2)
    css = np.zeros(2)
    hi = mu_star
    lo = mu_star - delta
    for t in range(n):
        if t < 2:
            arm = t
        else:
            m1 = sums[0] / pulls[0]
            m2 = sums[1] / pulls[1]
            # log mass of "arm 1 best" and "arm 2 best" via sufficient stats
            l1 = -0.5 * (
                pulls[0] * (hi - m1) ** 2 + css[0] + pulls[1] * (lo - m2) ** 2 + css[1]
            )
            l2 = -0.5 * (
                pulls[0] * (lo - m1) ** 2 + css[0] + pulls[1] * (hi - m2) ** 2 + css[1]
            )
            d = l2 - l1
            if d <= 0.0:
                p1 = 1.0 / (1.0 + math.exp(d))
            else:
                e = math.exp(-d)
                p1 = e / (1.0 + e)
            arm = 0 if uniforms[t] < p1 else 1
        x = _reward(bernoulli, means[arm], noise[t])
        mean_old = sums[arm] / pulls[arm] if pulls[arm] > 0 else x
        pulls[arm] += 1
        sums[arm] += x
        css[arm] += (x - mean_old) * (x - sums[arm] / pulls[arm])
        arms[t] = arm
    return arms, pulls, sums, css


@njit(cache=True)
def min_gap_episode(uniforms, noise, bernoulli, means, mu_star, epsilon):
    """Run one episode of the min-gap policy; returns (arms, pulls, sums, css)."""
    n = uniforms.shape[0]
    k = means.shape[0]
    arms = np.empty(n, dtype=np.int8)
    pulls = np.zeros(k, dtype=np.int64)
    sums = np.zeros(k)
    css = np.zeros(k)
    lw = np.empty(k)
    threshold = mu_star - epsilon
    for t in range(n):
        if t < k:
            arm = t
        else:
            top = -math.inf
            for i in range(k):
                mean_i = sums[i] / pulls[i]
                d = mean_i - mu_star
                z = (threshold - mean_i) * math.sqrt(2.0 * pulls[i] / 3.0)
                log_integral = 0.5 * math.log(3.0 * math.pi / pulls[i]) + _log_gauss_cdf(z)
                lw[i] = -pulls[i] * d * d / 3.0 - log_integral
                if lw[i] > top:
                    top = lw[i]
            total = 0.0
            for i in range(k):
                total += math.exp(lw[i] - top)
            u = uniforms[t]
            arm = k - 1
            acc = 0.0
            for i in range(k):
                acc += math.exp(lw[i] - top) / total
                if u < acc:
                    arm = i
                    break
        x = _reward(bernoulli, means[arm], noise[t])
        mean_old = sums[arm] / pulls[arm] if pulls[arm] > 0 else x
        pulls[arm] += 1
        sums[arm] += x
        css[arm] += (x - mean_old) * (x - sums[arm] / pulls[arm])
        arms[t] = arm
    return arms, pulls, sums, css
