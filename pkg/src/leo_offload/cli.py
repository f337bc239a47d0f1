"""Command-line front end.

Subcommands: run, sweep-budget, sweep-constellation, oracle-compare, and
bench-runtime. Flags mirror the scenario config keys; a JSON config file can
set any of them and flags override the file.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .harness import (
    ScenarioConfig,
    bench_runtime,
    emit,
    oracle_compare,
    run,
    sweep_budget,
    sweep_constellation,
    write_rows_csv,
    write_summary,
)

_OVERRIDE_FLAGS = [
    ("--seed", "rng_seed", int),
    ("--scheme", "scheme", str),
    ("--budget", "budget_per_interval_usd", float),
    ("--horizon", "horizon_intervals", int),
    ("--planes", "num_planes", int),
    ("--sats-per-plane", "sats_per_plane", int),
    ("--altitude-km", "altitude_km", float),
    ("--inclination-deg", "inclination_deg", float),
    ("--interval-s", "interval_s", float),
    ("--elevation-mask-deg", "elevation_mask_deg", float),
    ("--sites-csv", "sites_csv", str),
    ("--prices-csv", "prices_csv", str),
    ("--default-price", "default_price_usd_per_kwh", float),
    ("--active-fraction", "active_fraction", float),
    ("--rate-bps", "rate_bps", float),
    ("--mean-task-volume-bits", "mean_task_volume_bits", float),
    ("--pipelines", "parallel_pipelines", int),
    ("--bandwidth-bps", "default_bandwidth_bps", float),
    ("--hroa-reduction", "hroa_reduction_factor", float),
]


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, default=None, help="JSON scenario config file")
    for flag, dest, typ in _OVERRIDE_FLAGS:
        p.add_argument(flag, dest=dest, type=typ, default=None)
    p.add_argument(
        "--no-record-runtime",
        dest="record_runtime",
        action="store_false",
        default=None,
        help="write zeros to the runtime column so output files are byte-reproducible",
    )


def _build_config(args: argparse.Namespace) -> ScenarioConfig:
    cfg = ScenarioConfig.from_file(args.config) if args.config else ScenarioConfig()
    overrides = {}
    for _, dest, _ in _OVERRIDE_FLAGS:
        v = getattr(args, dest, None)
        if v is not None:
            overrides[dest] = v
    if getattr(args, "record_runtime", None) is not None:
        overrides["record_runtime"] = args.record_runtime
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


def _parse_sizes(text: str) -> list[tuple[int, int]]:
    sizes = []
    for chunk in text.split(","):
        planes, _, spp = chunk.strip().partition("x")
        sizes.append((int(planes), int(spp)))
    return sizes


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="leo-offload",
        description="Discrete-time LEO task-offloading simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one scheme over the horizon")
    _add_config_args(p_run)
    p_run.add_argument("--out", type=Path, default=Path("out"))
    p_run.add_argument("--format", choices=("csv", "jsonl"), default="csv")

    p_sb = sub.add_parser("sweep-budget", help="re-run across budget levels")
    _add_config_args(p_sb)
    p_sb.add_argument("--out", type=Path, default=Path("out"))
    p_sb.add_argument("--budgets", type=str, default="0.25,0.5,1,2,4")
    p_sb.add_argument("--schemes", type=str, default="ao2,cct,hroa")

    p_sc = sub.add_parser("sweep-constellation", help="re-run across constellation sizes")
    _add_config_args(p_sc)
    p_sc.add_argument("--out", type=Path, default=Path("out"))
    p_sc.add_argument("--sizes", type=str, default="72x22,108x22,144x22")
    p_sc.add_argument("--schemes", type=str, default="ao2,cct,hroa")

    p_oc = sub.add_parser("oracle-compare", help="greedy vs exhaustive on random instances")
    p_oc.add_argument("--seed", type=int, required=True)
    p_oc.add_argument("--instances", type=int, default=200)
    p_oc.add_argument("--out", type=Path, default=Path("out"))

    p_br = sub.add_parser("bench-runtime", help="orchestrator runtime vs constellation size")
    _add_config_args(p_br)
    p_br.add_argument("--out", type=Path, default=Path("out"))
    p_br.add_argument("--sizes", type=str, default="72x22,108x22,144x22")
    p_br.add_argument("--intervals", type=int, default=12)

    args = parser.parse_args(argv)
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)

    if args.command == "run":
        cfg = _build_config(args)
        result = run(cfg)
        metrics_path = emit(result.metrics, args.format, out / f"metrics.{args.format}")
        summary_path = write_summary(result.summary, out / "summary.json")
        print(f"wrote {metrics_path} and {summary_path}")

    elif args.command == "sweep-budget":
        cfg = _build_config(args)
        budgets = [float(b) for b in args.budgets.split(",")]
        rows = sweep_budget(cfg, budgets, schemes=args.schemes.split(","))
        path = write_rows_csv(rows, out / "sweep_budget.csv")
        print(f"wrote {path}")

    elif args.command == "sweep-constellation":
        cfg = _build_config(args)
        rows = sweep_constellation(
            cfg, _parse_sizes(args.sizes), schemes=args.schemes.split(",")
        )
        path = write_rows_csv(rows, out / "sweep_constellation.csv")
        print(f"wrote {path}")

    elif args.command == "oracle-compare":
        rows = oracle_compare(seed=args.seed, instances=args.instances)
        path = write_rows_csv(rows, out / "oracle_compare.csv")
        ratios = [r["gain_ratio"] for r in rows]
        print(f"wrote {path}; mean gain ratio {sum(ratios) / len(ratios):.4f}")

    elif args.command == "bench-runtime":
        cfg = _build_config(args)
        rows = bench_runtime(cfg, _parse_sizes(args.sizes), intervals=args.intervals)
        path = write_rows_csv(rows, out / "bench_runtime.csv")
        print(f"wrote {path}")
        print(json.dumps(rows, indent=2))

    return 0


if __name__ == "__main__":
    sys.exit(main())
