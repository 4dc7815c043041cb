"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s``.  The Monte Carlo checks
use fixed seeds, so every run is reproducible; the heavy criteria report
their wall-clock time alongside the verdict.
"""
import math
import textwrap
import time

import numpy as np
import pytest

from banditlab import (
    BanditInstance,
    ExperimentConfig,
    FiniteSupportThompson,
    MinGapThompson,
    PolicySpec,
    ProductBetaPrior,
    RewardFamily,
    RngStream,
    TwoPointPermutationPrior,
    TwoPointThompson,
    estimate_regret,
    quadrature,
)
from banditlab.bounds import (
    gauss_tail_bracket_check,
    hoeffding_maximal_check,
    minimax_lower_bound,
    pull_count_threshold,
    thm1_bound,
    thm2_bound,
    thm3_bound,
    verify_prior_free_integrals,
    verify_prior_free_tail_terms,
)
from banditlab.cli import main


def _verdict(number: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"{status} criterion {number}: {detail}")
    assert ok, f"criterion {number}: {detail}"


def test_criterion_1_prior_free_bound():
    start = time.time()
    config = ExperimentConfig(
        policy=PolicySpec("ts-beta"),
        environment=ProductBetaPrior((1.0,) * 10, (1.0,) * 10),
        horizon=2000,
        episodes=2000,
        master_seed=20240,
        checkpoints=(2000,),
        experiment_id="prior-free",
    )
    summary = estimate_regret(config, workers=1)
    elapsed = time.time() - start
    estimate = summary.mean_cum_regret[0]
    margin = 3.0 * summary.stderr[0]
    bound = thm1_bound(2000, 10)
    ok = estimate + margin <= bound
    _verdict(
        1,
        ok,
        f"Bayes regret {estimate:.2f} + 3SE {margin:.2f} <= {bound:.2f} "
        f"(K=10, n=2000, m=2000, {elapsed:.0f}s single-threaded)",
    )


def test_criterion_2_lower_bound_sanity():
    pairs = [(2000, 10), (100, 4), (400, 4), (100_000, 2), (50_000, 5)]
    ok = all(minimax_lower_bound(n, k) < thm1_bound(n, k) for n, k in pairs)
    _verdict(2, ok, f"minimax lower bound < prior-free bound on {len(pairs)} (n, K) pairs")


def test_criterion_3_two_point_uniform_in_n():
    start = time.time()
    checkpoints = (1000, 10_000, 50_000, 100_000)
    failures = []
    details = []
    for delta in (0.2, 0.5, 1.0):
        config = ExperimentConfig(
            policy=PolicySpec("ts-two-point", {"mu_star": 0.0, "delta": delta}),
            environment=TwoPointPermutationPrior(0.0, delta),
            horizon=100_000,
            episodes=1000,
            master_seed=31337,
            checkpoints=checkpoints,
            experiment_id=f"two-point-{delta}",
        )
        summary = estimate_regret(config, workers=1)
        bound = thm2_bound(delta)
        for mean, se in zip(summary.mean_cum_regret, summary.stderr):
            if mean + 3.0 * se > bound:
                failures.append(f"delta={delta}: {mean:.2f}+3*{se:.2f} > {bound:.2f}")
        m50, m100 = summary.mean_cum_regret[2], summary.mean_cum_regret[3]
        se50, se100 = summary.stderr[2], summary.stderr[3]
        combined = math.sqrt(se50**2 + se100**2)
        if m100 - m50 > 0.05 * m50 + 2.0 * combined:
            failures.append(f"delta={delta}: no plateau ({m50:.3f} -> {m100:.3f})")
        details.append(f"delta={delta}: regret {m100:.2f} vs bound {bound:.1f}")
    elapsed = time.time() - start
    _verdict(
        3,
        not failures,
        "; ".join(details + failures) + f" (m=1000, n=1e5, {elapsed:.0f}s)",
    )


def test_criterion_4_min_gap_uniform_in_n():
    start = time.time()
    means = (0.0, -0.5, -0.5, -1.0, -1.0)
    gaps = tuple(-m for m in means)
    checkpoints = (1000, 10_000, 25_000, 50_000)
    config = ExperimentConfig(
        policy=PolicySpec("ts-min-gap", {"mu_star": 0.0, "epsilon": 0.5}),
        environment=BanditInstance(means, RewardFamily.GAUSSIAN),
        horizon=50_000,
        episodes=500,
        master_seed=42424,
        checkpoints=checkpoints,
        experiment_id="min-gap",
    )
    summary = estimate_regret(config, workers=1)
    bound = thm3_bound(gaps, 0.5)
    failures = []
    for mean, se in zip(summary.mean_cum_regret, summary.stderr):
        if mean + 3.0 * se > bound:
            failures.append(f"{mean:.2f}+3*{se:.2f} > {bound:.2f}")
    m25, m50 = summary.mean_cum_regret[2], summary.mean_cum_regret[3]
    se25, se50 = summary.stderr[2], summary.stderr[3]
    combined = math.sqrt(se25**2 + se50**2)
    if m50 - m25 > 0.05 * m25 + 2.0 * combined:
        failures.append(f"no plateau ({m25:.3f} -> {m50:.3f})")
    elapsed = time.time() - start
    _verdict(
        4,
        not failures,
        f"regret {m50:.2f} vs bound {bound:.2f}, plateau "
        f"{m25:.2f}->{m50:.2f} (K=5, m=500, n=5e4, {elapsed:.0f}s)"
        + ("; " + "; ".join(failures) if failures else ""),
    )


def _two_point_atoms(mu_star, delta):
    lo = mu_star - delta
    return (
        BanditInstance((mu_star, lo), RewardFamily.GAUSSIAN),
        BanditInstance((lo, mu_star), RewardFamily.GAUSSIAN),
    )


def test_criterion_5_posterior_equivalence():
    rng = np.random.default_rng(99)
    worst_ratio_err = 0.0
    worst_tv = 0.0
    for _ in range(1000):
        mu_star = float(rng.normal())
        delta = float(rng.uniform(0.1, 2.0))
        policy = TwoPointThompson(mu_star, delta)
        finite = FiniteSupportThompson(_two_point_atoms(mu_star, delta))
        exact = 0.0
        hi, lo = mu_star, mu_star - delta
        for arm, mean in ((0, hi), (1, lo)):
            for _ in range(int(rng.integers(0, 40))):
                x = float(mean + rng.standard_normal())
                policy.observe(arm, x)
                finite.observe(arm, x)
                sign = 1.0 if arm == 0 else -1.0
                exact += -0.5 * ((lo - x) ** 2 - (hi - x) ** 2) * sign
        worst_ratio_err = max(worst_ratio_err, abs(policy.log_posterior_ratio() - exact))
        tv = 0.5 * float(np.abs(policy.weights() - finite.arm_distribution()).sum())
        worst_tv = max(worst_tv, tv)
    ok = worst_ratio_err <= 1e-10 and worst_tv <= 1e-10
    _verdict(
        5,
        ok,
        f"closed-form log ratio err {worst_ratio_err:.2e} <= 1e-10, "
        f"TV vs finite-support sampler {worst_tv:.2e} <= 1e-10 (1000 histories)",
    )


def test_criterion_6_min_gap_weight_kernel():
    rng = np.random.default_rng(123)
    worst = 0.0
    for _ in range(200):
        mu_star = float(rng.normal())
        epsilon = float(rng.uniform(0.2, 1.0))
        lists = []
        for mean in (mu_star, mu_star - epsilon - float(rng.uniform(0.0, 1.0))):
            pulls = int(rng.integers(1, 101))
            lists.append([float(mean + rng.standard_normal()) for _ in range(pulls)])
        policy = MinGapThompson(mu_star, epsilon, 2)
        log_num, log_den = [], []
        for arm, rewards in enumerate(lists):
            for x in rewards:
                policy.observe(arm, x)
            x = np.asarray(rewards)
            log_num.append(-float(np.sum((x - mu_star) ** 2)) / 3.0)
            scale = float(np.sum((x - x.mean()) ** 2)) / 3.0
            integrand = lambda v: math.exp(scale - float(np.sum((x - v) ** 2)) / 3.0)
            lo = min(mu_star - epsilon, float(x.mean())) - 45.0 / math.sqrt(len(rewards))
            rough = quadrature(
                integrand, lo, mu_star - epsilon,
                tol=math.sqrt(3.0 * math.pi / len(rewards)) * 1e-12,
            )
            refined = quadrature(
                integrand, lo, mu_star - epsilon, tol=max(rough * 1e-10, 1e-280)
            )
            log_den.append(math.log(refined) - scale)
        oracle = (log_num[0] - log_den[0]) - (log_num[1] - log_den[1])
        lw = policy.log_weights()
        worst = max(worst, abs((lw[0] - lw[1]) - oracle))
    ok = worst <= 1e-8
    _verdict(
        6,
        ok,
        f"weight log-ratio vs quadrature worst err {worst:.2e} <= 1e-8 "
        "(200 histories, K=2, T in [1,100])",
    )


def test_criterion_7_proof_integral_verification():
    grid = [(400, 4), (2000, 10), (32, 2), (80, 5), (320, 20)]
    for n, k in grid:
        assert verify_prior_free_integrals(n, k).satisfied
        assert verify_prior_free_tail_terms(n, k).satisfied
    assert gauss_tail_bracket_check().satisfied
    assert pull_count_threshold(1.0, 1.0) == 36
    assert pull_count_threshold(1.0, 0.5) == 41
    assert pull_count_threshold(2.0, 1.0) == 11
    _verdict(
        7,
        True,
        f"integral, tail-term, tail-bracket and pull-threshold checks hold on {grid}",
    )


def test_criterion_8_hoeffding_maximal_inequality():
    details = []
    ok = True
    for m, x in ((100, 50.0), (1000, 150.0)):
        report = hoeffding_maximal_check(m, x, 100_000, RngStream(2024, m))
        ok = ok and bool(report.satisfied)
        details.append(
            f"(m={m}, x={x:g}): freq {report.empirical:.2e} <= "
            f"bound {report.bound_value:.2e} + 3SE"
        )
    _verdict(8, ok, "; ".join(details))


def test_criterion_9_cli_determinism(tmp_path):
    config = tmp_path / "determinism.cfg"
    config.write_text(
        textwrap.dedent(
            """
            id = determinism
            policy = ts-two-point
            environment = two-point
            mu_star = 0.0
            delta = 0.5
            horizon = 2000
            episodes = 40
            seed = 1234
            checkpoints = 500, 1000, 2000
            """
        ).strip()
        + "\n",
        encoding="utf-8",
    )
    outputs = []
    for workers in ("1", "4", "max"):
        out = tmp_path / f"workers-{workers}.csv"
        code = main(
            ["simulate", str(config), "--out", str(out), "--workers", workers]
        )
        assert code == 0
        outputs.append(out.read_bytes())
    ok = outputs[0] == outputs[1] == outputs[2]
    _verdict(9, ok, "simulate output byte-identical for --workers in {1, 4, max}")
