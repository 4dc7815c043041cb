"""CSV schema for experiment results.

One row per (experiment, checkpoint).  Floats are written with ``repr``, the
shortest decimal that round-trips, so files are byte-reproducible; re-emitting
a parsed file reproduces it exactly.
"""
from __future__ import annotations

import csv
import io

from .core import (
    BanditInstance,
    UniformGapPrior,
    FiniteSupportPrior,
    ProductBetaPrior,
    TwoPointPermutationPrior,
)
from .errors import ConfigurationError
from .simulation import ExperimentConfig, RegretSummary

__all__ = ["COLUMNS", "describe_environment", "rows_for", "render_csv", "parse_csv"]

COLUMNS = (
    "experiment_id",
    "policy",
    "environment",
    "n",
    "checkpoint",
    "mean_cum_regret",
    "stderr",
    "ci95",
    "episodes",
    "master_seed",
)


def _fmt(value: float) -> str:
    return repr(float(value))


def describe_environment(env) -> str:
    """Compact single-token descriptor (no commas, CSV-friendly)."""
    if isinstance(env, BanditInstance):
        means = ";".join(_fmt(m) for m in env.means)
        return f"{env.family.value}[{means}]"
    if isinstance(env, TwoPointPermutationPrior):
        return f"two-point(mu_star={_fmt(env.mu_star)};delta={_fmt(env.delta)})"
    if isinstance(env, UniformGapPrior):
        return (
            f"uniform-gap(mu_star={_fmt(env.mu_star)};epsilon={_fmt(env.epsilon)};"
            f"K={env.num_arms};gap_max={_fmt(env.gap_max)})"
        )
    if isinstance(env, ProductBetaPrior):
        alphas = ";".join(_fmt(a) for a in env.alphas)
        betas = ";".join(_fmt(b) for b in env.betas)
        return f"product-beta(alpha=[{alphas}];beta=[{betas}])"
    if isinstance(env, FiniteSupportPrior):
        return f"finite-support(atoms={len(env.atoms)})"
    raise ConfigurationError(f"unknown environment type {type(env).__name__}")


def rows_for(config: ExperimentConfig, summary: RegretSummary) -> list[list[str]]:
    env = describe_environment(config.environment)
    rows = []
    for i, t in enumerate(summary.checkpoints):
        rows.append(
            [
                config.experiment_id,
                config.policy.kind,
                env,
                str(config.horizon),
                str(t),
                _fmt(summary.mean_cum_regret[i]),
                _fmt(summary.stderr[i]),
                _fmt(summary.ci95[i]),
                str(summary.episodes),
                str(config.master_seed),
            ]
        )
    return rows


def render_csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    writer.writerows(rows)
    return buf.getvalue()


def parse_csv(text: str) -> list[dict[str, str]]:
    """Parse an emitted CSV; the header must match the schema exactly."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ConfigurationError("empty CSV: missing header row") from None
    if tuple(header) != COLUMNS:
        raise ConfigurationError(
            f"CSV header {header} does not match the expected schema {list(COLUMNS)}"
        )
    return [dict(zip(COLUMNS, row)) for row in reader if row]
