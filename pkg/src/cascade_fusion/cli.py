"""Command-line front end.

    cascade-fusion run --spec fig1.toml [--seed N] [--runs N] [--out DIR] [--set key=value ...] [--jobs N]
    cascade-fusion sweep ...            (same as run)
    cascade-fusion oracle-check [--n-max 10] [--trials 1000] [--seed 0]

Exit codes: 0 success, 2 configuration error, 3 runtime failure, 4 oracle check failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .engine import RunConfig, monte_carlo
from .experiment import ConfigError, ExperimentSpec, load_spec, parse_override
from .metrics import DECILE_RULE, NodeStats, SweepRow, asymptotic_sweep, md_fa_curves
from .oracle import MAX_ENUM_LENGTH, oracle_check

log = logging.getLogger("cascade_fusion")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME, EXIT_ORACLE = 0, 2, 3, 4
INCOMPLETE = "INCOMPLETE"
NODE_COLUMNS = ["node_index", "md_rate", "md_stderr", "fa_rate", "fa_stderr", "md_worst_decile"]
SUMMARY_COLUMNS = ["q", "r", "tau", "n_star", "md_rate", "md_stderr", "fa_rate", "fa_stderr", "md_worst_decile"]


def fmt(value) -> str:
    """Shortest round-trip decimal; locale independent."""
    return repr(float(value)) if isinstance(value, float) else str(value)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def point_filename(row: SweepRow) -> str:
    return f"nodes_q{row.q!r}_r{row.r!r}_tau{row.tau!r}_nstar{row.n_star}.csv"


def node_rows(stats: Sequence[NodeStats]) -> list[list]:
    return [[s.node_index, s.md_rate, s.stderr_md, s.fa_rate, s.stderr_fa, s.md_worst_decile] for s in stats]


def summary_rows(rows: Sequence[SweepRow]) -> list[list]:
    return [
        [r.q, r.r, r.tau, r.n_star, r.md_rate, r.md_stderr, r.fa_rate, r.fa_stderr, r.md_worst_decile]
        for r in rows
    ]


def run_experiment(spec: ExperimentSpec, out: Path, jobs: int = 1) -> list[SweepRow]:
    out.mkdir(parents=True, exist_ok=True)
    marker = out / INCOMPLETE
    marker.write_text("output directory is being written; do not trust its contents\n")
    (out / "points").mkdir(exist_ok=True)

    require = tuple(sorted({"w0": {0}, "w1": {1}, "both": {0, 1}}[spec["hypothesis"]]))
    results: list[tuple[RunConfig, list[NodeStats]]] = []
    points = spec.points()
    for i, config in enumerate(points, start=1):
        log.info("point %d/%d: q=%r r=%r tau=%r n_star=%d", i, len(points),
                 config.sensor.q, config.sensor.r, config.tau, config.n_star)
        raw = monte_carlo(config, jobs=jobs)
        stats = md_fa_curves(raw, fraction=spec["worst_fraction"], require=require)
        results.append((config, stats))
    rows = asymptotic_sweep(results)

    for row, (_, stats) in zip(rows, results):
        _write_csv(out / "points" / point_filename(row), NODE_COLUMNS, node_rows(stats))
    _write_csv(out / "summary.csv", SUMMARY_COLUMNS, summary_rows(rows))
    if "svg" in spec["output.formats"]:
        from .plots import write_svgs

        write_svgs(out, rows, [s for _, s in results])

    manifest = {
        "version": __version__,
        "source": spec.source,
        "overrides": spec.overrides,
        "config": spec.values,
        "seed": spec["seed"],
        "runs_per_point": spec["runs"],
        "n_points": len(rows),
        "seeding": "PCG64(SeedSequence(seed, spawn_key=(w, run_index))); random attack sets from spawn_key=(2,)",
        "worst_decile_rule": DECILE_RULE,
        "worst_fraction": spec["worst_fraction"],
        "cdf_semantics": "F_w(a) = P{Lambda_S < a} (strict); decision ties emit 1",
        "files": {"summary": "summary.csv", "points": [f"points/{point_filename(r)}" for r in rows]},
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    marker.unlink()
    return rows


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        overrides = dict(parse_override(item) for item in args.set)
        for key, value in (("seed", args.seed), ("runs", args.runs), ("output.dir", args.out)):
            if value is not None:
                overrides[key] = value
        spec = load_spec(args.spec, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out = Path(spec["output.dir"])
    try:
        rows = run_experiment(spec, out, jobs=args.jobs)
    except (OSError, MemoryError, RuntimeError, ValueError) as exc:
        print(f"runtime failure: {exc!r}; partial output left in {out} (marked {INCOMPLETE})", file=sys.stderr)
        return EXIT_RUNTIME
    for row in rows:
        print(f"q={row.q!r} r={row.r!r} tau={row.tau!r} n_star={row.n_star}: "
              f"md[N]={row.md_rate:.4f} fa[N]={row.fa_rate:.4f} worst10%={row.md_worst_decile:.4f}")
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace) -> int:
    if not 1 <= args.n_max <= MAX_ENUM_LENGTH:
        print(f"config error: --n-max must lie in 1..{MAX_ENUM_LENGTH}", file=sys.stderr)
        return EXIT_CONFIG
    if args.trials < 0:
        print("config error: --trials must be non-negative", file=sys.stderr)
        return EXIT_CONFIG
    report = oracle_check(args.n_max, args.trials, args.seed)
    for line in report.lines():
        print(line)
    if not report.passed and report.worst_case:
        print(f"worst case: {report.worst_case}")
    return EXIT_OK if report.passed else EXIT_ORACLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cascade-fusion", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "sweep"):
        p = sub.add_parser(name, help="run a Monte Carlo experiment (sweep axes allowed)")
        p.add_argument("--spec", required=True, help="TOML experiment file")
        p.add_argument("--seed", type=int)
        p.add_argument("--runs", type=int)
        p.add_argument("--out")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
        p.add_argument("--jobs", type=int, default=1)
        p.set_defaults(func=_cmd_run)
    p = sub.add_parser("oracle-check", help="compare the recursion against brute-force enumeration")
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_oracle)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
