"""Flat key-value experiment files for the command line.

Format: one ``key = value`` pair per line, ``#`` starts a comment, lists are
comma separated.  One experiment per file; a list-valued ``delta`` describes a
gap sweep and is only accepted by the ``sweep`` command.

Keys
----
policy        ts-beta | ts-two-point | ts-min-gap | moss | ucb | oracle
environment   two-point | uniform-gap | product-beta | gaussian | bernoulli
horizon       rounds per episode (required)
episodes      Monte Carlo episodes (required)
seed          master seed (required; --seed overrides)
id            experiment id (optional; derived when absent)
checkpoints   rounds at which regret is recorded (optional; geometric default)
means         arm means for the fixed gaussian / bernoulli environments
mu_star       best mean (two-point, uniform-gap, ts-two-point, ts-min-gap)
delta         gap (two-point environment and ts-two-point policy)
epsilon       minimum gap (uniform-gap, ts-min-gap)
arms          arm count (product-beta, uniform-gap)
gap_max       largest sampled gap (uniform-gap; default 10 * epsilon)
alpha, beta   Beta prior parameters (ts-beta policy, product-beta environment)
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (
    BanditInstance,
    UniformGapPrior,
    ProductBetaPrior,
    RewardFamily,
    TwoPointPermutationPrior,
)
from .errors import ConfigurationError
from .simulation import ExperimentConfig, PolicySpec

__all__ = ["parse_kv_text", "experiments_from_file"]

_POLICIES = ("ts-beta", "ts-two-point", "ts-min-gap", "moss", "ucb", "oracle")
_ENVIRONMENTS = ("two-point", "uniform-gap", "product-beta", "gaussian", "bernoulli")


@dataclass(frozen=True)
class _Field:
    raw: str
    line: int


def parse_kv_text(text: str) -> dict[str, _Field]:
    fields: dict[str, _Field] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigurationError(f'line {lineno}: expected "key = value", got {body!r}')
        key, _, value = body.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if not key or not value:
            raise ConfigurationError(f"line {lineno}: empty key or value")
        if key in fields:
            raise ConfigurationError(f'line {lineno}: duplicate field "{key}"')
        fields[key] = _Field(value, lineno)
    return fields


class _Config:
    def __init__(self, fields: dict[str, _Field]):
        self.fields = fields
        self.used: set[str] = set()

    def _fetch(self, key: str, required: bool):
        self.used.add(key)
        if key not in self.fields:
            if required:
                raise ConfigurationError(f'missing required field "{key}"')
            return None
        return self.fields[key]

    def _convert(self, key: str, conv, label: str, required: bool, default=None):
        f = self._fetch(key, required)
        if f is None:
            return default
        try:
            return conv(f.raw)
        except ValueError:
            raise ConfigurationError(
                f'field "{key}" (line {f.line}): expected {label}, got {f.raw!r}'
            ) from None

    def string(self, key, required=True, default=None, choices=None):
        value = self._convert(key, str, "a string", required, default)
        if value is not None and choices is not None and value not in choices:
            f = self.fields[key]
            raise ConfigurationError(
                f'field "{key}" (line {f.line}): {value!r} is not one of {list(choices)}'
            )
        return value

    def integer(self, key, required=True, default=None):
        return self._convert(key, int, "an integer", required, default)

    def number(self, key, required=True, default=None):
        return self._convert(key, float, "a number", required, default)

    def number_list(self, key, required=True, default=None):
        conv = lambda raw: [float(v.strip()) for v in raw.split(",") if v.strip()]
        return self._convert(key, conv, "a comma-separated list of numbers", required, default)

    def integer_list(self, key, required=True, default=None):
        conv = lambda raw: [int(v.strip()) for v in raw.split(",") if v.strip()]
        return self._convert(key, conv, "a comma-separated list of integers", required, default)

    def reject_unused(self):
        unused = set(self.fields) - self.used
        if unused:
            name = sorted(unused)[0]
            raise ConfigurationError(
                f'unknown field "{name}" (line {self.fields[name].line})'
            )


def _build_environment(cfg: _Config, kind: str, delta: float | None):
    if kind == "two-point":
        return TwoPointPermutationPrior(
            mu_star=cfg.number("mu_star"), delta=delta if delta is not None else cfg.number("delta")
        )
    if kind == "uniform-gap":
        return UniformGapPrior(
            mu_star=cfg.number("mu_star"),
            epsilon=cfg.number("epsilon"),
            num_arms=cfg.integer("arms"),
            gap_max=cfg.number("gap_max", required=False),
        )
    if kind == "product-beta":
        arms = cfg.integer("arms")
        alpha = cfg.number("alpha", required=False, default=1.0)
        beta = cfg.number("beta", required=False, default=1.0)
        return ProductBetaPrior((alpha,) * arms, (beta,) * arms)
    family = RewardFamily.GAUSSIAN if kind == "gaussian" else RewardFamily.BERNOULLI
    means = cfg.number_list("means")
    return BanditInstance(tuple(means), family)


def _build_policy_spec(cfg: _Config, kind: str, delta: float | None) -> PolicySpec:
    if kind == "ts-beta":
        params = {
            "alpha": cfg.number("alpha", required=False, default=1.0),
            "beta": cfg.number("beta", required=False, default=1.0),
        }
    elif kind == "ts-two-point":
        params = {
            "mu_star": cfg.number("mu_star"),
            "delta": delta if delta is not None else cfg.number("delta"),
        }
    elif kind == "ts-min-gap":
        params = {"mu_star": cfg.number("mu_star"), "epsilon": cfg.number("epsilon")}
    else:
        params = {}
    return PolicySpec(kind, params)


def experiments_from_file(
    path: str, *, sweep: bool = False, seed_override: int | None = None
) -> list[ExperimentConfig]:
    """Load one experiment (or, for ``sweep``, one per delta) from a file."""
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from None
    cfg = _Config(parse_kv_text(text))

    policy_kind = cfg.string("policy", choices=_POLICIES)
    env_kind = cfg.string("environment", choices=_ENVIRONMENTS)
    horizon = cfg.integer("horizon")
    episodes = cfg.integer("episodes")
    seed = cfg.integer("seed")
    if seed_override is not None:
        seed = seed_override
    checkpoints = cfg.integer_list("checkpoints", required=False, default=[])
    base_id = cfg.string("id", required=False, default="")

    sweeps_delta = policy_kind == "ts-two-point" or env_kind == "two-point"
    if sweeps_delta:
        deltas = cfg.number_list("delta")
        if not sweep and len(deltas) > 1:
            raise ConfigurationError(
                'field "delta": a list needs the sweep command; simulate takes one value'
            )
    else:
        deltas = [None]
        if sweep:
            raise ConfigurationError(
                "sweep requires a delta-parameterized policy or environment"
            )

    experiments = []
    for delta in deltas:
        policy = _build_policy_spec(cfg, policy_kind, delta)
        environment = _build_environment(cfg, env_kind, delta)
        experiment_id = base_id
        if delta is not None and (sweep or len(deltas) > 1):
            experiment_id = f"{base_id or policy_kind}-delta{delta:g}"
        experiments.append(
            ExperimentConfig(
                policy=policy,
                environment=environment,
                horizon=horizon,
                episodes=episodes,
                master_seed=seed,
                checkpoints=tuple(checkpoints),
                experiment_id=experiment_id,
            )
        )
    cfg.reject_unused()
    return experiments
