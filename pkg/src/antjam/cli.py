"""Command line front end: run, sweep, and compare subcommands.

Exit codes: 0 success, 2 configuration error, 3 I/O error. The only
environment variable read is ANTJAM_WORKERS (sweep/compare worker count).
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .config import ConfigError, ScenarioConfig, parse_config
from .engine import run_scenario
from .reporting import compare_csv_bytes, emit_report, sweep_csv_bytes, write_bytes

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def _parse_seed_range(text: str) -> list[int]:
    if ".." not in text:
        raise ValueError(f"expected <a>..<b>, got {text!r}")
    lo_text, hi_text = text.split("..", 1)
    lo, hi = int(lo_text, 10), int(hi_text, 10)
    if lo < 0 or hi < lo:
        raise ValueError(f"need 0 <= a <= b, got {text!r}")
    return list(range(lo, hi + 1))


def _load_config(path: str) -> ScenarioConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _worker_count() -> int:
    raw = os.environ.get("ANTJAM_WORKERS", "1")
    try:
        count = int(raw, 10)
    except ValueError:
        raise ValueError(f"ANTJAM_WORKERS must be an integer, got {raw!r}")
    return max(1, count)


def _run_one(job: tuple[ScenarioConfig, int]):
    config, seed = job
    return run_scenario(config, seed)


def _run_batch(config: ScenarioConfig, seeds: list[int]):
    workers = _worker_count()
    jobs = [(config, seed) for seed in seeds]
    if workers == 1 or len(jobs) == 1:
        return [_run_one(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(_run_one, jobs))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antjam",
        description="Jamming-aware sensor network simulator with ant route search",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one seeded scenario")
    run_p.add_argument("--config", required=True)
    run_p.add_argument("--seed", required=True, type=int)
    run_p.add_argument("--format", choices=("json", "csv"), default=None)
    run_p.add_argument("--out", default=None)

    sweep_p = sub.add_parser("sweep", help="run a seed range, one CSV row per seed")
    sweep_p.add_argument("--config", required=True)
    sweep_p.add_argument("--seeds", required=True, help="inclusive range a..b")
    sweep_p.add_argument("--out", default=None)

    cmp_p = sub.add_parser(
        "compare", help="paired runs with rerouting on and off per seed"
    )
    cmp_p.add_argument("--config", required=True)
    cmp_p.add_argument("--seeds", required=True, help="inclusive range a..b")
    cmp_p.add_argument("--out", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _load_config(args.config)
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as exc:
        for key, reason in exc.errors:
            print(f"config error: {key}: {reason}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "run":
            report = run_scenario(config, args.seed)
            fmt = args.format or config.output_format
            destination = args.out or config.output_path
            emit_report(report, fmt, destination)
        elif args.command == "sweep":
            seeds = _parse_seed_range(args.seeds)
            reports = _run_batch(config, seeds)
            write_bytes(sweep_csv_bytes(reports), args.out or config.output_path)
        else:
            seeds = _parse_seed_range(args.seeds)
            enabled_cfg = dataclasses.replace(config, reroute=True)
            baseline_cfg = dataclasses.replace(config, reroute=False)
            enabled = _run_batch(enabled_cfg, seeds)
            baseline = _run_batch(baseline_cfg, seeds)
            pairs = list(zip(enabled, baseline))
            write_bytes(compare_csv_bytes(pairs), args.out or config.output_path)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
