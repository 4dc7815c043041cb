"""Arm-selection strategies.

Every policy exposes ``select_arm(t, rng)`` and ``observe(arm, reward)`` and
keeps its own per-arm sufficient statistics; ``t`` is the 1-based round index.
A policy instance belongs to a single episode and is never shared between
threads.  Policies that draw the arm from a weight vector consume exactly one
uniform per round (including their forced initial rounds), so episode traces
are stable under refactoring.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import ArmStatistics, BanditInstance, RewardFamily, gap_profile
from .errors import ConfigurationError, DegenerateWeightsError
from .numerics import log_plus, log_trunc_gauss_integral, normalize_log_weights

__all__ = [
    "Policy",
    "BetaThompson",
    "FinitePosterior",
    "FiniteSupportThompson",
    "TwoPointThompson",
    "MinGapThompson",
    "MossPolicy",
    "UcbPolicy",
    "OraclePolicy",
    "moss_index",
    "sum_sq_about",
]


def _argmax_lowest(values: Sequence[float]) -> int:
    best = 0
    for i in range(1, len(values)):
        if values[i] > values[best]:
            best = i
    return best


def _inverse_cdf(probs: np.ndarray, u: float) -> int:
    acc = 0.0
    for i in range(len(probs)):
        acc += probs[i]
        if u < acc:
            return i
    return len(probs) - 1


def sum_sq_about(stats: ArmStatistics, center: float) -> float:
    """Sum_s (center - x_s)^2 computed from sufficient statistics."""
    d = center - stats.mean
    return stats.pulls * d * d + stats.centered_sq_sum


class Policy:
    """Base class holding per-arm statistics and the observe bookkeeping."""

    name = "policy"

    def __init__(self, num_arms: int):
        if num_arms < 1:
            raise ConfigurationError("policy needs at least one arm")
        self.num_arms = int(num_arms)
        self.arms = [ArmStatistics() for _ in range(self.num_arms)]

    def reset(self) -> None:
        self.arms = [ArmStatistics() for _ in range(self.num_arms)]

    def select_arm(self, t: int, rng: np.random.Generator) -> int:
        raise NotImplementedError

    def observe(self, arm: int, reward: float) -> None:
        if not 0 <= arm < self.num_arms:
            raise IndexError(f"arm {arm} out of range")
        self.arms[arm].add(reward)

    def validate_instance(self, instance: BanditInstance) -> None:
        """Raise ConfigurationError when the policy constants do not match."""
        if instance.num_arms != self.num_arms:
            raise ConfigurationError(
                f"{self.name}: instance has {instance.num_arms} arms, "
                f"policy expects {self.num_arms}"
            )

    def get_params(self) -> dict:
        return {}

    @property
    def total_pulls(self) -> int:
        return sum(s.pulls for s in self.arms)


class BetaThompson(Policy):
    """Thompson Sampling with independent Beta priors over Bernoulli means."""

    name = "ts-beta"

    def __init__(self, num_arms: int, alpha=1.0, beta=1.0):
        super().__init__(num_arms)
        self._alpha0 = self._expand(alpha, "alpha")
        self._beta0 = self._expand(beta, "beta")
        # cached posterior parameter vectors, kept in sync by observe()
        self._post_alpha = self._alpha0.copy()
        self._post_beta = self._beta0.copy()

    def _expand(self, value, label: str) -> np.ndarray:
        arr = np.asarray(value, dtype=float)
        if arr.ndim == 0:
            arr = np.full(self.num_arms, float(arr))
        if arr.shape != (self.num_arms,) or (arr <= 0).any():
            raise ConfigurationError(f"{label} must be positive, one value or one per arm")
        return arr

    def reset(self) -> None:
        super().reset()
        self._post_alpha = self._alpha0.copy()
        self._post_beta = self._beta0.copy()

    def posterior_parameters(self) -> tuple[np.ndarray, np.ndarray]:
        return self._post_alpha.copy(), self._post_beta.copy()

    def select_arm(self, t: int, rng: np.random.Generator) -> int:
        return int(np.argmax(rng.beta(self._post_alpha, self._post_beta)))

    def observe(self, arm: int, reward: float) -> None:
        if reward not in (0.0, 1.0):
            raise ValueError(f"Beta-Bernoulli rewards must be 0 or 1, got {reward!r}")
        super().observe(arm, reward)
        if reward == 1.0:
            self._post_alpha[arm] += 1.0
        else:
            self._post_beta[arm] += 1.0

    def validate_instance(self, instance: BanditInstance) -> None:
        super().validate_instance(instance)
        if instance.family is not RewardFamily.BERNOULLI:
            raise ConfigurationError("ts-beta requires Bernoulli rewards")

    def get_params(self) -> dict:
        return {"alpha": tuple(self._alpha0), "beta": tuple(self._beta0)}


@dataclass
class FinitePosterior:
    """Posterior over an explicit list of candidate instances, in log scale."""

    atoms: tuple[BanditInstance, ...]
    log_mass: np.ndarray

    def probabilities(self) -> np.ndarray:
        return normalize_log_weights(self.log_mass)

    def update(self, arm: int, reward: float) -> None:
        """Add the log-likelihood of (arm, reward) under every atom."""
        for j, atom in enumerate(self.atoms):
            mu = atom.means[arm]
            if atom.family is RewardFamily.BERNOULLI:
                p = mu if reward == 1.0 else 1.0 - mu
                ll = math.log(p) if p > 0.0 else -math.inf
            else:
                d = reward - mu
                ll = -0.5 * d * d
            self.log_mass[j] += ll
        if np.max(self.log_mass) == -math.inf:
            raise DegenerateWeightsError(
                "every atom assigns probability zero to the observed history"
            )


class FiniteSupportThompson(Policy):
    """Thompson Sampling over a finite-support prior: draw an atom, play its best arm."""

    name = "ts-finite"

    def __init__(
        self,
        atoms: Sequence[BanditInstance],
        probabilities: Sequence[float] | None = None,
    ):
        atoms = tuple(atoms)
        if not atoms:
            raise ConfigurationError("need at least one atom")
        k = atoms[0].num_arms
        family = atoms[0].family
        if any(a.num_arms != k or a.family != family for a in atoms):
            raise ConfigurationError("atoms must share arm count and reward family")
        super().__init__(k)
        if probabilities is None:
            log_mass = np.zeros(len(atoms))
        else:
            probs = np.asarray(probabilities, dtype=float)
            if probs.shape != (len(atoms),) or (probs < 0).any():
                raise ConfigurationError("probabilities must be nonnegative, one per atom")
            with np.errstate(divide="ignore"):
                log_mass = np.log(probs)
        self.posterior = FinitePosterior(atoms=atoms, log_mass=log_mass)
        self._best_arm = tuple(gap_profile(a).best_arm for a in atoms)

    def arm_distribution(self) -> np.ndarray:
        """Probability that each arm is played this round."""
        out = np.zeros(self.num_arms)
        for j, p in enumerate(self.posterior.probabilities()):
            out[self._best_arm[j]] += p
        return out

    def select_arm(self, t: int, rng: np.random.Generator) -> int:
        u = rng.random()
        atom = _inverse_cdf(self.posterior.probabilities(), u)
        return self._best_arm[atom]

    def observe(self, arm: int, reward: float) -> None:
        super().observe(arm, reward)
        self.posterior.update(arm, reward)

    def validate_instance(self, instance: BanditInstance) -> None:
        super().validate_instance(instance)
        if instance.family is not self.posterior.atoms[0].family:
            raise ConfigurationError("instance reward family does not match the atoms")

    def get_params(self) -> dict:
        return {"atoms": len(self.posterior.atoms)}


class TwoPointThompson(Policy):
    """Two-armed posterior sampling when the best mean and the gap are both known.

    The prior has exactly two candidates, (mu*, mu*-delta) and its swap, each
    with mass 1/2.  Rounds 1 and 2 pull arms 1 and 2; afterwards the arm is
    drawn from the posterior probabilities of the two candidates.
    """

    name = "ts-two-point"

    def __init__(self, mu_star: float, delta: float):
        super().__init__(2)
        if not math.isfinite(mu_star):
            raise ConfigurationError("mu_star must be finite")
        if not (delta > 0 and math.isfinite(delta)):
            raise ConfigurationError("delta must be positive")
        self.mu_star = float(mu_star)
        self.delta = float(delta)

    def log_weight_pair(self) -> np.ndarray:
        """Unnormalized log posterior mass of 'arm 1 is best' and 'arm 2 is best'."""
        hi, lo = self.mu_star, self.mu_star - self.delta
        s1, s2 = self.arms
        l1 = -0.5 * (sum_sq_about(s1, hi) + sum_sq_about(s2, lo))
        l2 = -0.5 * (sum_sq_about(s1, lo) + sum_sq_about(s2, hi))
        return np.array([l1, l2])

    def weights(self) -> np.ndarray:
        """The pair (p_t(1), p_t(2)); sums to one."""
        return normalize_log_weights(self.log_weight_pair())

    def log_posterior_ratio(self) -> float:
        """Closed form of log( p_t(2) / p_t(1) ).

        Equals -(T1 + T2) delta^2 / 2 + delta (T1 g1 + T2 g2) where
        g1 = mu* - mean_1 and g2 = mean_2 - (mu* - delta).
        """
        s1, s2 = self.arms
        t1, t2 = s1.pulls, s2.pulls
        g1 = (self.mu_star - s1.mean) if t1 > 0 else 0.0
        g2 = (s2.mean - (self.mu_star - self.delta)) if t2 > 0 else 0.0
        d = self.delta
        return -(t1 + t2) * d * d / 2.0 + d * (t1 * g1 + t2 * g2)

    def select_arm(self, t: int, rng: np.random.Generator) -> int:
        u = rng.random()
        if t <= 2:
            return t - 1
        return _inverse_cdf(self.weights(), u)

    def validate_instance(self, instance: BanditInstance) -> None:
        super().validate_instance(instance)
        hi, lo = max(instance.means), min(instance.means)
        if abs(hi - self.mu_star) > 1e-9 or abs(lo - (self.mu_star - self.delta)) > 1e-9:
            raise ConfigurationError(
                f"{self.name}: instance means {instance.means} are not "
                f"(mu*={self.mu_star}, mu*-delta={self.mu_star - self.delta}) up to order"
            )

    def get_params(self) -> dict:
        return {"mu_star": self.mu_star, "delta": self.delta}


class MinGapThompson(Policy):
    """Posterior-style sampling when the best mean and a gap lower bound are known.

    Candidate environments place one arm at mu* and every other arm below
    mu* - epsilon with an improper uniform prior on its mean.  The weight of
    arm i is exp(-(1/3) Sum_s (x_{i,s} - mu*)^2) divided by
    integral_{-inf}^{mu*-eps} exp(-(1/3) Sum_s (x_{i,s} - v)^2) dv; completing
    the square cancels the centered square sum between the two, leaving

        log w_i = -(1/3) T_i (mean_i - mu*)^2 - log_trunc_gauss_integral(...)

    Rounds 1..K pull each arm once; afterwards the arm is drawn from the
    normalized weights.
    """

    name = "ts-min-gap"

    def __init__(self, mu_star: float, epsilon: float, num_arms: int):
        super().__init__(num_arms)
        if not math.isfinite(mu_star):
            raise ConfigurationError("mu_star must be finite")
        if not (epsilon > 0 and math.isfinite(epsilon)):
            raise ConfigurationError("epsilon must be positive")
        self.mu_star = float(mu_star)
        self.epsilon = float(epsilon)

    def log_weights(self) -> np.ndarray:
        threshold = self.mu_star - self.epsilon
        out = np.empty(self.num_arms)
        for i, s in enumerate(self.arms):
            if s.pulls == 0:
                raise ValueError(
                    "min-gap weights need at least one pull per arm "
                    f"(arm {i} has none)"
                )
            d = s.mean - self.mu_star
            out[i] = -s.pulls * d * d / 3.0 - log_trunc_gauss_integral(
                s.mean, threshold, s.pulls
            )
        return out

    def weights(self) -> np.ndarray:
        return normalize_log_weights(self.log_weights())

    def select_arm(self, t: int, rng: np.random.Generator) -> int:
        u = rng.random()
        if t <= self.num_arms:
            return t - 1
        return _inverse_cdf(self.weights(), u)

    def validate_instance(self, instance: BanditInstance) -> None:
        super().validate_instance(instance)
        profile = gap_profile(instance)
        if abs(profile.mu_star - self.mu_star) > 1e-9:
            raise ConfigurationError(
                f"{self.name}: best mean {profile.mu_star} does not equal mu*={self.mu_star}"
            )
        for i, g in enumerate(profile.gaps):
            if 0.0 < g < self.epsilon - 1e-9:
                raise ConfigurationError(
                    f"{self.name}: arm {i} has gap {g} below epsilon={self.epsilon}"
                )

    def get_params(self) -> dict:
        return {"mu_star": self.mu_star, "epsilon": self.epsilon}


def moss_index(stats: ArmStatistics, horizon: int, num_arms: int) -> float:
    """Empirical mean plus the horizon-aware bonus sqrt(log_+(n/(K T)) / T).

    Unpulled arms get +inf so every arm is tried once.
    """
    if horizon < num_arms or num_arms < 1:
        raise ConfigurationError("moss_index requires horizon >= num_arms >= 1")
    if stats.pulls == 0:
        return math.inf
    t = stats.pulls
    return stats.mean + math.sqrt(log_plus(horizon / (num_arms * t)) / t)


class MossPolicy(Policy):
    """Index policy with the horizon-aware exploration bonus of ``moss_index``."""

    name = "moss"

    def __init__(self, horizon: int, num_arms: int):
        super().__init__(num_arms)
        if horizon < num_arms:
            raise ConfigurationError("moss requires horizon >= number of arms")
        self.horizon = int(horizon)

    def select_arm(self, t: int, rng: np.random.Generator) -> int:
        return _argmax_lowest(
            [moss_index(s, self.horizon, self.num_arms) for s in self.arms]
        )

    def get_params(self) -> dict:
        return {"horizon": self.horizon}


class UcbPolicy(Policy):
    """Plain UCB baseline: mean + sqrt(2 log t / T), +inf for unpulled arms."""

    name = "ucb"

    def select_arm(self, t: int, rng: np.random.Generator) -> int:
        bonus_scale = 2.0 * math.log(max(t, 1))
        indices = [
            s.mean + math.sqrt(bonus_scale / s.pulls) if s.pulls > 0 else math.inf
            for s in self.arms
        ]
        return _argmax_lowest(indices)


class OraclePolicy(Policy):
    """Diagnostic baseline that always plays a fixed arm (the known best one)."""

    name = "oracle"

    def __init__(self, best_arm: int, num_arms: int):
        super().__init__(num_arms)
        if not 0 <= best_arm < num_arms:
            raise ConfigurationError("best_arm out of range")
        self.best_arm = int(best_arm)

    def select_arm(self, t: int, rng: np.random.Generator) -> int:
        return self.best_arm

    def get_params(self) -> dict:
        return {"best_arm": self.best_arm}
