"""Domain types: bandit instances, gap profiles, priors, and regret bookkeeping.

Everything here is a plain value object; nothing holds a reference to shared
mutable state, so instances can be passed freely between worker processes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "RewardFamily",
    "BanditInstance",
    "GapProfile",
    "gap_profile",
    "ArmStatistics",
    "update_statistics",
    "RegretTrace",
    "ProductBetaPrior",
    "TwoPointPermutationPrior",
    "UniformGapPrior",
    "FiniteSupportPrior",
    "PriorSpec",
]


class RewardFamily(str, Enum):
    """Reward distribution attached to each arm of an instance."""

    BERNOULLI = "bernoulli"
    GAUSSIAN = "gaussian"  # unit variance


@dataclass(frozen=True)
class BanditInstance:
    """A fixed environment: one mean per arm plus the reward family."""

    means: tuple[float, ...]
    family: RewardFamily

    def __post_init__(self):
        means = tuple(float(m) for m in self.means)
        object.__setattr__(self, "means", means)
        family = RewardFamily(self.family)
        object.__setattr__(self, "family", family)
        if len(means) < 2:
            raise ConfigurationError("a bandit instance needs at least 2 arms")
        if not all(math.isfinite(m) for m in means):
            raise ConfigurationError("arm means must be finite")
        if family is RewardFamily.BERNOULLI and not all(0.0 <= m <= 1.0 for m in means):
            raise ConfigurationError("Bernoulli arm means must lie in [0, 1]")

    @property
    def num_arms(self) -> int:
        return len(self.means)


@dataclass(frozen=True)
class GapProfile:
    """Best arm, its mean, and the per-arm suboptimality gaps of an instance."""

    best_arm: int
    mu_star: float
    gaps: tuple[float, ...]


def gap_profile(instance: BanditInstance) -> GapProfile:
    """Best arm (lowest index on ties), optimal mean, and gap vector."""
    means = instance.means
    best = 0
    for i in range(1, len(means)):
        if means[i] > means[best]:
            best = i
    mu_star = means[best]
    gaps = tuple(mu_star - m for m in means)
    return GapProfile(best_arm=best, mu_star=mu_star, gaps=gaps)


@dataclass
class ArmStatistics:
    """Sufficient statistics of one arm: pull count, reward sum, centered square sum.

    The centered square sum is Sum_s (x_s - mean)^2, maintained by a one-pass
    recurrence so that no reward history needs to be stored.
    """

    pulls: int = 0
    reward_sum: float = 0.0
    centered_sq_sum: float = 0.0

    @property
    def mean(self) -> float:
        """Empirical mean; 0.0 before the first pull."""
        if self.pulls == 0:
            return 0.0
        return self.reward_sum / self.pulls

    def add(self, reward: float) -> None:
        reward = float(reward)
        if not math.isfinite(reward):
            raise ValueError(f"reward must be finite, got {reward!r}")
        mean_old = self.reward_sum / self.pulls if self.pulls > 0 else reward
        self.pulls += 1
        self.reward_sum += reward
        mean_new = self.reward_sum / self.pulls
        self.centered_sq_sum += (reward - mean_old) * (reward - mean_new)


def update_statistics(stats: ArmStatistics, reward: float) -> ArmStatistics:
    """Fold one reward into ``stats`` in place and return it."""
    stats.add(reward)
    return stats


@dataclass
class RegretTrace:
    """Per-round and cumulative regret of a single episode."""

    episode_seed: int
    horizon: int
    instant_regret: np.ndarray
    cumulative_regret: np.ndarray
    theta_summary: GapProfile

    @classmethod
    def from_instant(
        cls, episode_seed: int, instant: np.ndarray, theta_summary: GapProfile
    ) -> "RegretTrace":
        instant = np.asarray(instant, dtype=float)
        return cls(
            episode_seed=episode_seed,
            horizon=instant.shape[0],
            instant_regret=instant,
            cumulative_regret=np.cumsum(instant),
            theta_summary=theta_summary,
        )


# ---------------------------------------------------------------------------
# Priors over instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductBetaPrior:
    """Independent Beta(alpha_i, beta_i) mean per arm; Bernoulli rewards."""

    alphas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        alphas = tuple(float(a) for a in self.alphas)
        betas = tuple(float(b) for b in self.betas)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "betas", betas)
        if len(alphas) != len(betas):
            raise ConfigurationError("alphas and betas must have the same length")
        if len(alphas) < 2:
            raise ConfigurationError("need at least 2 arms")
        if any(a <= 0 for a in alphas) or any(b <= 0 for b in betas):
            raise ConfigurationError("Beta parameters must be positive")

    @property
    def num_arms(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class TwoPointPermutationPrior:
    """Two Gaussian instances, (mu*, mu*-delta) and its swap, each with mass 1/2."""

    mu_star: float
    delta: float

    def __post_init__(self):
        if not math.isfinite(self.mu_star):
            raise ConfigurationError("mu_star must be finite")
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise ConfigurationError("delta must be positive")

    @property
    def num_arms(self) -> int:
        return 2

    def atoms(self) -> tuple[BanditInstance, BanditInstance]:
        lo = self.mu_star - self.delta
        return (
            BanditInstance((self.mu_star, lo), RewardFamily.GAUSSIAN),
            BanditInstance((lo, self.mu_star), RewardFamily.GAUSSIAN),
        )


@dataclass(frozen=True)
class UniformGapPrior:
    """Known optimal mean mu*, best-arm index uniform on the arms, Gaussian rewards.

    Every suboptimal mean is drawn uniformly from [mu* - gap_max, mu* - epsilon],
    so all gaps are at least epsilon.
    """

    mu_star: float
    epsilon: float
    num_arms: int
    gap_max: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.mu_star):
            raise ConfigurationError("mu_star must be finite")
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ConfigurationError("epsilon must be positive")
        if self.num_arms < 2:
            raise ConfigurationError("need at least 2 arms")
        gap_max = 10.0 * self.epsilon if self.gap_max is None else float(self.gap_max)
        object.__setattr__(self, "gap_max", gap_max)
        if gap_max < self.epsilon:
            raise ConfigurationError("gap_max must be at least epsilon")


@dataclass(frozen=True)
class FiniteSupportPrior:
    """Explicit list of instances with probabilities summing to one."""

    atoms: tuple[BanditInstance, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self):
        atoms = tuple(self.atoms)
        probs = tuple(float(p) for p in self.probabilities)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "probabilities", probs)
        if not atoms:
            raise ConfigurationError("finite-support prior needs at least one atom")
        if len(atoms) != len(probs):
            raise ConfigurationError("atoms and probabilities must align")
        if any(p < 0 for p in probs):
            raise ConfigurationError("probabilities must be nonnegative")
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ConfigurationError("probabilities must sum to 1 (within 1e-12)")
        k = atoms[0].num_arms
        family = atoms[0].family
        if any(a.num_arms != k or a.family != family for a in atoms):
            raise ConfigurationError("all atoms must share arm count and reward family")

    @property
    def num_arms(self) -> int:
        return self.atoms[0].num_arms


PriorSpec = Union[
    ProductBetaPrior, TwoPointPermutationPrior, UniformGapPrior, FiniteSupportPrior
]
