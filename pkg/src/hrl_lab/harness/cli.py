"""Command-line entry point.

Exit codes: 0 success, 1 runtime failure, 2 config error (including
missing fixtures and bad usage).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from hrl_lab.harness.config import ConfigError, load_config, parse_config_text
from hrl_lab.harness.experiments import run_experiment
from hrl_lab.harness.runlog import read_runlog
from hrl_lab.harness.summary import summarize
from hrl_lab.harness.svg import HistogramSpec, render_curves, render_histogram


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hrl-lab",
        description="Seeded maze/market/embed experiments and report rendering.",
    )
    subparsers = parser.add_subparsers(dest="kind", required=True)
    for kind, blurb in (
        ("maze", "train maze agents and log steps/reward per episode"),
        ("market", "run trading agents and log ticks-to-doubling per episode"),
        ("embed", "window telemetry, embed, cluster, and write CSV reports"),
        ("report", "render curves/histogram/summary from run log CSVs"),
    ):
        sub = subparsers.add_parser(kind, help=blurb)
        sub.add_argument("--config", required=True, help="key = value config file")
        sub.add_argument("--seed", type=int, default=None, help="replace the seed list")
        sub.add_argument("--out", default=None, help="replace the output directory")
        sub.add_argument(
            "--set",
            dest="assignments",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override any config key (repeatable)",
        )
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, str]:
    out: dict[str, str] = {}
    for item in args.assignments:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    if args.seed is not None:
        out["seeds"] = str(args.seed)
    if args.out is not None:
        out["out"] = args.out
    return out


def _report(args: argparse.Namespace) -> None:
    try:
        raw = parse_config_text(Path(args.config).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    raw.update(_overrides(args))

    if "logs" not in raw:
        raise ConfigError("report configs need logs = <csv,csv,...>")
    log_paths = [p.strip() for p in raw["logs"].split(",") if p.strip()]
    missing = [p for p in log_paths if not Path(p).is_file()]
    if missing:
        raise ConfigError(f"log files do not exist: {missing}")
    logs = [read_runlog(p) for p in log_paths]

    metric = raw.get("metric", "steps")
    bounds = None
    if "bounds" in raw:
        try:
            lo, hi = (float(tok) for tok in raw["bounds"].split(","))
        except ValueError as exc:
            raise ConfigError(f"bounds must be lo,hi: {raw['bounds']!r}") from exc
        bounds = (lo, hi)
    try:
        spec = HistogramSpec(
            bin_width=float(raw["bin_width"]) if "bin_width" in raw else None,
            bin_count=int(raw["bin_count"]) if "bin_count" in raw else None,
            bounds=bounds,
            shared_bounds=raw.get("shared_bounds", "true").lower() != "false",
        )
        curves = render_curves(logs, metric=metric)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    durations = {log.agent: [r.steps for r in log.rows] for log in logs}

    out_dir = Path(raw.get("out", "out"))
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "curves.svg").write_text(curves)
    (out_dir / "histogram.svg").write_text(render_histogram(durations, spec))
    (out_dir / "summary.csv").write_text(summarize(logs))


def main(argv: "list[str] | None" = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.kind == "report":
            _report(args)
        else:
            run_experiment(load_config(args.kind, args.config, _overrides(args)))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary maps failures to exit 1
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
