"""Sampling instances from priors and rewards from instances.

Randomness discipline
---------------------
Each episode owns one ``RngStream`` identified by ``(seed, stream_id)``; the
stream is materialized into a ``numpy.random.Generator`` (PCG64 seeded through
``SeedSequence(seed, spawn_key=(stream_id,))``) exactly once per episode.
Distinct stream ids give statistically independent sequences, and identical
ids replay bit-identical draws.

Within an episode, draws are consumed in a fixed order: the instance draw (in
Bayesian mode), then one block of per-round reward noise, then the per-round
policy draws in round order.  Gaussian noise uses ``Generator.standard_normal``
(the ziggurat method, identified by ``GAUSSIAN_SAMPLER`` in summary metadata).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    BanditInstance,
    UniformGapPrior,
    FiniteSupportPrior,
    PriorSpec,
    ProductBetaPrior,
    RewardFamily,
    TwoPointPermutationPrior,
)
from .errors import ConfigurationError

__all__ = [
    "GAUSSIAN_SAMPLER",
    "RngStream",
    "sample_instance",
    "sample_reward",
    "reward_noise_block",
    "reward_from_noise",
]

GAUSSIAN_SAMPLER = "numpy-pcg64-ziggurat"

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """Address of one reproducible random stream."""

    seed: int
    stream_id: int

    def make(self) -> np.random.Generator:
        """Materialize the stream; every call restarts it from the beginning."""
        ss = np.random.SeedSequence(
            entropy=self.seed & _MASK64, spawn_key=(self.stream_id & _MASK64,)
        )
        return np.random.default_rng(ss)


def _require_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(
        "expected a numpy Generator; materialize an RngStream with .make() first "
        "so repeated draws advance the stream"
    )


def sample_instance(prior: PriorSpec, rng: np.random.Generator) -> BanditInstance:
    """Draw one instance from a prior."""
    rng = _require_generator(rng)
    if isinstance(prior, ProductBetaPrior):
        means = rng.beta(np.asarray(prior.alphas), np.asarray(prior.betas))
        return BanditInstance(tuple(means), RewardFamily.BERNOULLI)
    if isinstance(prior, TwoPointPermutationPrior):
        first, second = prior.atoms()
        return first if rng.random() < 0.5 else second
    if isinstance(prior, UniformGapPrior):
        best = int(rng.integers(prior.num_arms))
        gaps = rng.uniform(prior.epsilon, prior.gap_max, size=prior.num_arms - 1)
        means = np.empty(prior.num_arms)
        means[best] = prior.mu_star
        others = [i for i in range(prior.num_arms) if i != best]
        means[others] = prior.mu_star - gaps
        return BanditInstance(tuple(means), RewardFamily.GAUSSIAN)
    if isinstance(prior, FiniteSupportPrior):
        u = rng.random()
        acc = 0.0
        for atom, p in zip(prior.atoms, prior.probabilities):
            acc += p
            if u < acc:
                return atom
        return prior.atoms[-1]
    raise ConfigurationError(f"unknown prior type: {type(prior).__name__}")


def sample_reward(instance: BanditInstance, arm: int, rng: np.random.Generator) -> float:
    """Draw one reward from the given arm."""
    rng = _require_generator(rng)
    if not 0 <= arm < instance.num_arms:
        raise IndexError(f"arm {arm} out of range for {instance.num_arms} arms")
    return reward_from_noise(instance, arm, _draw_noise(instance.family, rng))


def _draw_noise(family: RewardFamily, rng: np.random.Generator) -> float:
    if family is RewardFamily.BERNOULLI:
        return float(rng.random())
    return float(rng.standard_normal())


def reward_noise_block(
    family: RewardFamily, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Pre-draw the per-round reward noise for an episode of length ``n``.

    Uniforms for Bernoulli instances, standard normals for Gaussian ones; the
    block consumes the stream exactly like ``n`` scalar draws.
    """
    rng = _require_generator(rng)
    if family is RewardFamily.BERNOULLI:
        return rng.random(n)
    return rng.standard_normal(n)


def reward_from_noise(instance: BanditInstance, arm: int, noise: float) -> float:
    """Turn one pre-drawn noise value into the reward of ``arm``."""
    mean = instance.means[arm]
    if instance.family is RewardFamily.BERNOULLI:
        return 1.0 if noise < mean else 0.0
    return mean + noise
