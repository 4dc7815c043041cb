"""Command line front end: simulate, sweep, bounds, plot.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import bounds as bounds_mod
from .config import experiments_from_file
from .errors import ConfigurationError, VerificationError
from .reporting import parse_csv, render_csv, rows_for
from .simulation import estimate_regret
from .svg import Series, render_regret_chart

__all__ = ["main", "entrypoint"]


def _parse_workers(value: str) -> int:
    if value == "max":
        return os.cpu_count() or 1
    try:
        workers = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("workers must be an integer or 'max'") from None
    if workers < 1:
        raise argparse.ArgumentTypeError("workers must be at least 1")
    return workers


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="banditlab",
        description="Bandit policy simulation and regret-bound certification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, as_sweep in (("simulate", False), ("sweep", True)):
        cmd = sub.add_parser(
            name,
            help=(
                "run a gap sweep from one config file"
                if as_sweep
                else "run one experiment from a config file"
            ),
        )
        cmd.add_argument("config", help="flat key-value experiment file")
        cmd.add_argument("--out", help="write CSV here instead of stdout")
        cmd.add_argument(
            "--workers", type=_parse_workers, default=1, help="parallel episode workers or 'max'"
        )
        cmd.add_argument("--seed", type=int, default=None, help="override the config seed")
        cmd.set_defaults(func=_cmd_simulate, sweep=as_sweep)

    cmd = sub.add_parser("bounds", help="print a bound value or verify the proof identities")
    cmd.add_argument(
        "name",
        choices=["thm1", "thm2", "thm3", "lower-bound", "verify-proofs"],
        help="which bound or verification to run",
    )
    cmd.add_argument("--n", type=int, help="horizon")
    cmd.add_argument("--K", type=int, dest="k", help="number of arms")
    cmd.add_argument("--delta", type=float, help="gap (thm2)")
    cmd.add_argument("--gaps", help="comma-separated gap vector (thm3)")
    cmd.add_argument("--epsilon", type=float, help="minimum gap (thm3)")
    cmd.add_argument("--compare", help="CSV of results to compare against the bound")
    cmd.set_defaults(func=_cmd_bounds)

    cmd = sub.add_parser("plot", help="render regret curves from result CSVs to SVG")
    cmd.add_argument("csvs", nargs="+", help="result CSV files")
    cmd.add_argument("--out", required=True, help="output SVG path")
    cmd.set_defaults(func=_cmd_plot)
    return parser


def _cmd_simulate(args) -> int:
    experiments = experiments_from_file(
        args.config, sweep=args.sweep, seed_override=args.seed
    )
    rows = []
    for config in experiments:
        summary = estimate_regret(config, workers=args.workers)
        rows.extend(rows_for(config, summary))
    text = render_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _require_option(args, attr: str, flag: str):
    value = getattr(args, attr)
    if value is None:
        raise ConfigurationError(f"bounds {args.name} requires {flag}")
    return value


def _final_empirical(csv_path: str) -> list[tuple[str, float]]:
    with open(csv_path, encoding="utf-8") as handle:
        rows = parse_csv(handle.read())
    latest: dict[str, tuple[int, float]] = {}
    for row in rows:
        t = int(row["checkpoint"])
        current = latest.get(row["experiment_id"])
        if current is None or t > current[0]:
            latest[row["experiment_id"]] = (t, float(row["mean_cum_regret"]))
    return [(exp, value) for exp, (_, value) in latest.items()]


def _print_bound(args, label: str, value: float) -> int:
    print(f"{label} = {value:.2f}")
    if args.compare:
        for experiment, empirical in _final_empirical(args.compare):
            verdict = "empirical <= bound" if empirical <= value else "BOUND VIOLATED"
            print(f"  {experiment}: empirical = {empirical:.4f} -> {verdict}")
    return 0


def _cmd_bounds(args) -> int:
    if args.name == "thm1":
        n = _require_option(args, "n", "--n")
        k = _require_option(args, "k", "--K")
        return _print_bound(args, f"thm1(n={n}, K={k})", bounds_mod.thm1_bound(n, k))
    if args.name == "lower-bound":
        n = _require_option(args, "n", "--n")
        k = _require_option(args, "k", "--K")
        return _print_bound(
            args, f"lower-bound(n={n}, K={k})", bounds_mod.minimax_lower_bound(n, k)
        )
    if args.name == "thm2":
        delta = _require_option(args, "delta", "--delta")
        return _print_bound(args, f"thm2(delta={delta:g})", bounds_mod.thm2_bound(delta))
    if args.name == "thm3":
        raw = _require_option(args, "gaps", "--gaps")
        epsilon = _require_option(args, "epsilon", "--epsilon")
        try:
            gaps = [float(v) for v in raw.split(",") if v.strip()]
        except ValueError:
            raise ConfigurationError(f"--gaps must be comma-separated numbers, got {raw!r}")
        return _print_bound(
            args,
            f"thm3(gaps={raw}, epsilon={epsilon:g})",
            bounds_mod.thm3_bound(gaps, epsilon),
        )
    return _cmd_verify_proofs(args)


def _cmd_verify_proofs(args) -> int:
    n = _require_option(args, "n", "--n")
    k = _require_option(args, "k", "--K")
    reports = [
        bounds_mod.verify_prior_free_integrals(n, k),
        bounds_mod.verify_prior_free_tail_terms(n, k),
        bounds_mod.gauss_tail_bracket_check(),
    ]
    print(f"verify-proofs(n={n}, K={k}): PASS")
    for report in reports:
        print(f"  [{report.name}]")
        for key, value in report.residuals.items():
            print(f"    {key} = {value:.6g}")
    for delta, epsilon in ((1.0, 1.0), (1.0, 0.5), (2.0, 1.0)):
        threshold = bounds_mod.pull_count_threshold(delta, epsilon)
        print(f"  [pull-threshold] delta={delta:g} epsilon={epsilon:g} -> {threshold}")
    return 0


def _cmd_plot(args) -> int:
    rows = []
    for path in args.csvs:
        try:
            with open(path, encoding="utf-8") as handle:
                rows.extend(parse_csv(handle.read()))
        except OSError as exc:
            raise ConfigurationError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise ConfigurationError("no data rows")
    order: list[str] = []
    grouped: dict[str, list[dict[str, str]]] = {}
    for row in rows:
        experiment = row["experiment_id"]
        if experiment not in grouped:
            grouped[experiment] = []
            order.append(experiment)
        grouped[experiment].append(row)
    series = []
    for experiment in order:
        entries = sorted(grouped[experiment], key=lambda r: int(r["checkpoint"]))
        series.append(
            Series(
                label=experiment,
                t=tuple(float(r["checkpoint"]) for r in entries),
                mean=tuple(float(r["mean_cum_regret"]) for r in entries),
                ci=tuple(float(r["ci95"]) for r in entries),
            )
        )
    svg = render_regret_chart(series)
    with open(args.out, "w", encoding="utf-8", newline="") as handle:
        handle.write(svg)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
