"""Episode runner and Monte Carlo regret estimation.

Regret is pseudo-regret, computed from the true means of the realized
instance, never from sampled rewards.  Episodes are independent: episode ``i``
of an experiment uses the stream ``RngStream(master_seed, i)``, so the result
of ``estimate_regret`` is byte-identical for any worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Mapping, Union

import numpy as np

from .core import (
    BanditInstance,
    PriorSpec,
    RegretTrace,
    RewardFamily,
    gap_profile,
)
from .environments import (
    GAUSSIAN_SAMPLER,
    RngStream,
    reward_from_noise,
    reward_noise_block,
    sample_instance,
)
from .errors import ConfigurationError
from .policies import (
    BetaThompson,
    FiniteSupportThompson,
    MinGapThompson,
    MossPolicy,
    OraclePolicy,
    Policy,
    TwoPointThompson,
    UcbPolicy,
)

__all__ = [
    "PolicySpec",
    "ExperimentConfig",
    "RegretSummary",
    "default_checkpoints",
    "build_policy",
    "run_episode",
    "estimate_regret",
]

Environment = Union[BanditInstance, PriorSpec]


def default_checkpoints(horizon: int) -> tuple[int, ...]:
    """Geometric grid ceil(n / 2^j), deduplicated and ascending, down to 1."""
    points = set()
    j = 0
    while True:
        value = math.ceil(horizon / (2**j))
        points.add(value)
        if value <= 1:
            break
        j += 1
    return tuple(sorted(points))


@dataclass(frozen=True)
class PolicySpec:
    """Declarative policy description, buildable per episode."""

    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)


def _required(params: Mapping[str, Any], kind: str, key: str):
    try:
        return params[key]
    except KeyError:
        raise ConfigurationError(f'policy "{kind}" requires parameter "{key}"') from None


def build_policy(spec: PolicySpec, instance: BanditInstance, horizon: int) -> Policy:
    """Instantiate a fresh policy for one episode on ``instance``."""
    kind, p = spec.kind, spec.params
    if kind == "ts-beta":
        return BetaThompson(
            instance.num_arms, alpha=p.get("alpha", 1.0), beta=p.get("beta", 1.0)
        )
    if kind == "ts-two-point":
        return TwoPointThompson(
            _required(p, kind, "mu_star"), _required(p, kind, "delta")
        )
    if kind == "ts-min-gap":
        return MinGapThompson(
            _required(p, kind, "mu_star"),
            _required(p, kind, "epsilon"),
            instance.num_arms,
        )
    if kind == "ts-finite":
        return FiniteSupportThompson(
            _required(p, kind, "atoms"), p.get("probabilities")
        )
    if kind == "moss":
        return MossPolicy(horizon, instance.num_arms)
    if kind == "ucb":
        return UcbPolicy(instance.num_arms)
    if kind == "oracle":
        return OraclePolicy(gap_profile(instance).best_arm, instance.num_arms)
    raise ConfigurationError(f'unknown policy kind "{kind}"')


def _environment_arms(environment: Environment) -> int:
    return environment.num_arms


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one experiment."""

    policy: PolicySpec
    environment: Environment
    horizon: int
    episodes: int
    master_seed: int
    checkpoints: tuple[int, ...] = ()
    experiment_id: str = ""

    def __post_init__(self):
        if self.horizon < 1:
            raise ConfigurationError("horizon must be at least 1")
        if self.horizon < _environment_arms(self.environment):
            raise ConfigurationError("horizon must be at least the number of arms")
        if self.episodes < 1:
            raise ConfigurationError("episodes must be at least 1")
        checkpoints = tuple(int(t) for t in self.checkpoints)
        if not checkpoints:
            checkpoints = default_checkpoints(self.horizon)
        if any(t < 1 or t > self.horizon for t in checkpoints):
            raise ConfigurationError("checkpoints must lie within [1, horizon]")
        if list(checkpoints) != sorted(set(checkpoints)):
            raise ConfigurationError("checkpoints must be strictly increasing")
        object.__setattr__(self, "checkpoints", checkpoints)
        if not self.experiment_id:
            env = self.environment
            env_tag = type(env).__name__.lower()
            object.__setattr__(
                self, "experiment_id", f"{self.policy.kind}-{env_tag}-n{self.horizon}"
            )


@dataclass(frozen=True)
class RegretSummary:
    """Monte Carlo summary of cumulative regret at each checkpoint."""

    checkpoints: tuple[int, ...]
    mean_cum_regret: tuple[float, ...]
    stderr: tuple[float, ...]
    ci95: tuple[float, ...]
    episodes: int
    metadata: Mapping[str, Any] = field(default_factory=dict)


def _run_python_loop(policy, instance, horizon, gen, noise):
    arms = np.empty(horizon, dtype=np.int64)
    for t in range(1, horizon + 1):
        arm = policy.select_arm(t, gen)
        reward = reward_from_noise(instance, arm, noise[t - 1])
        policy.observe(arm, reward)
        arms[t - 1] = arm
    return arms


def _run_kernel(policy, instance, horizon, gen, noise):
    from . import _kernels

    uniforms = gen.random(horizon)
    means = np.asarray(instance.means)
    bernoulli = instance.family is RewardFamily.BERNOULLI
    if isinstance(policy, TwoPointThompson):
        arms, pulls, sums, css = _kernels.two_point_episode(
            uniforms, noise, bernoulli, means, policy.mu_star, policy.delta
        )
    else:
        arms, pulls, sums, css = _kernels.min_gap_episode(
            uniforms, noise, bernoulli, means, policy.mu_star, policy.epsilon
        )
    for i, stats in enumerate(policy.arms):
        stats.pulls = int(pulls[i])
        stats.reward_sum = float(sums[i])
        stats.centered_sq_sum = float(css[i])
    return arms


def run_episode(
    policy: Policy,
    instance: BanditInstance,
    horizon: int,
    rng: Union[RngStream, np.random.Generator],
    *,
    accelerate: bool = True,
) -> RegretTrace:
    """Play ``horizon`` rounds of ``policy`` on ``instance`` and return the trace.

    The policy constants are validated against the instance before round 1.
    Weight-based policies on plain reward families run through a compiled
    kernel with identical draw semantics unless ``accelerate=False``.
    """
    if horizon < 1:
        raise ConfigurationError("horizon must be at least 1")
    policy.validate_instance(instance)
    if isinstance(rng, RngStream):
        episode_seed = rng.stream_id
        gen = rng.make()
    else:
        episode_seed = -1
        gen = rng
    profile = gap_profile(instance)
    noise = reward_noise_block(instance.family, horizon, gen)
    use_kernel = accelerate and isinstance(policy, (TwoPointThompson, MinGapThompson))
    if use_kernel:
        arms = _run_kernel(policy, instance, horizon, gen, noise)
    else:
        arms = _run_python_loop(policy, instance, horizon, gen, noise)
    instant = np.asarray(profile.gaps)[arms]
    return RegretTrace.from_instant(episode_seed, instant, profile)


def _episode_checkpoint_values(config: ExperimentConfig, stream_id: int) -> np.ndarray:
    try:
        stream = RngStream(config.master_seed, stream_id)
        gen = stream.make()
        env = config.environment
        instance = env if isinstance(env, BanditInstance) else sample_instance(env, gen)
        policy = build_policy(config.policy, instance, config.horizon)
        trace = run_episode(policy, instance, config.horizon, gen)
    except ConfigurationError as exc:
        raise ConfigurationError(f"episode stream {stream_id}: {exc}") from None
    except Exception as exc:
        raise RuntimeError(f"episode stream {stream_id}: {exc}") from exc
    idx = np.asarray(config.checkpoints, dtype=np.int64) - 1
    return trace.cumulative_regret[idx]


def _episode_batch(config: ExperimentConfig, stream_ids: list[int]) -> np.ndarray:
    return np.array([_episode_checkpoint_values(config, i) for i in stream_ids])


def estimate_regret(config: ExperimentConfig, workers: int = 1) -> RegretSummary:
    """Monte Carlo estimate of mean cumulative regret at each checkpoint.

    Episode ``i`` uses stream ``(master_seed, i)``; in Bayesian mode (a prior
    as environment) the instance draw is the first use of the stream.  Results
    are merged in episode order, so the summary does not depend on ``workers``.
    """
    m = config.episodes
    workers = max(1, int(workers))
    if workers == 1 or m == 1:
        values = _episode_batch(config, list(range(m)))
    else:
        chunk = max(1, math.ceil(m / (4 * workers)))
        batches = [list(range(i, min(i + chunk, m))) for i in range(0, m, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_episode_batch, config, ids) for ids in batches]
            values = np.vstack([f.result() for f in futures])
    mean = values.mean(axis=0)
    if m > 1:
        stderr = values.std(axis=0, ddof=1) / math.sqrt(m)
    else:
        stderr = np.zeros_like(mean)
    ci95 = 1.96 * stderr
    return RegretSummary(
        checkpoints=config.checkpoints,
        mean_cum_regret=tuple(float(v) for v in mean),
        stderr=tuple(float(v) for v in stderr),
        ci95=tuple(float(v) for v in ci95),
        episodes=m,
        metadata={
            "experiment_id": config.experiment_id,
            "policy": config.policy.kind,
            "master_seed": config.master_seed,
            "horizon": config.horizon,
            "gaussian_sampler": GAUSSIAN_SAMPLER,
        },
    )
