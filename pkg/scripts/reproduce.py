"""Run the figure experiments and print the headline numbers.

    python scripts/reproduce.py            # both figures, outputs under out/
    python scripts/reproduce.py fig1 --jobs 4
"""

import argparse
import csv
import sys
from collections import defaultdict
from pathlib import Path

from cascade_fusion.cli import main as cli_main

HERE = Path(__file__).resolve().parent


def read_summary(out: Path) -> list[dict]:
    with (out / "summary.csv").open(newline="") as fh:
        return list(csv.DictReader(fh))


def fig1(jobs: int) -> None:
    out = Path("out/fig1")
    if cli_main(["run", "--spec", str(HERE / "fig1.toml"), "--out", str(out), "--jobs", str(jobs)]):
        sys.exit("fig1 run failed")
    print("\nN*   md[200]   worst-10% md[200]   fa[200]")
    for row in read_summary(out):
        print(f"{row['n_star']:>3}  {float(row['md_rate']):8.4f}  {float(row['md_worst_decile']):18.4f}  "
              f"{float(row['fa_rate']):8.4f}")


def fig2(jobs: int) -> None:
    out = Path("out/fig2")
    if cli_main(["run", "--spec", str(HERE / "fig2.toml"), "--out", str(out), "--jobs", str(jobs)]):
        sys.exit("fig2 run failed")
    curves = defaultdict(list)
    for row in read_summary(out):
        curves[float(row["q"]), float(row["r"])].append((int(row["n_star"]), float(row["md_rate"])))
    print("\n   q      r    md(N*=0)   first N* with md>0.5")
    for (q, r), pts in sorted(curves.items()):
        pts.sort()
        cross = next((k for k, md in pts if md > 0.5), None)
        print(f"{q:6g}  {r:5.2f}  {pts[0][1]:9.4f}   {cross}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("which", nargs="*", help="fig1 and/or fig2 (default: both)")
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()
    runners = {"fig1": fig1, "fig2": fig2}
    for name in args.which or list(runners):
        if name not in runners:
            parser.error(f"unknown figure {name!r}")
        runners[name](args.jobs)
