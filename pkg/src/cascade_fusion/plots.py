"""Static SVG renderings of the per-node miss-detection curves."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .metrics import NodeStats, SweepRow


def write_svgs(out: Path, rows: Sequence[SweepRow], stats: Sequence[Sequence[NodeStats]]) -> list[Path]:
    groups = defaultdict(list)
    for row, node_stats in zip(rows, stats):
        groups[(row.q, row.r, row.tau)].append((row.n_star, node_stats))
    paths = []
    plt.rcParams["svg.hashsalt"] = "cascade-fusion"
    for (q, r, tau), curves in groups.items():
        fig, (top, bottom) = plt.subplots(2, 1, figsize=(6, 7), sharex=True)
        for n_star, node_stats in sorted(curves):
            nodes = [s.node_index for s in node_stats]
            top.semilogy(nodes, [max(s.md_rate, 1e-5) for s in node_stats], label=f"N*={n_star}")
            bottom.semilogy(nodes, [max(s.md_worst_decile, 1e-5) for s in node_stats])
        top.set_ylabel("P(MD), average")
        bottom.set_ylabel("P(MD), worst 10% runs")
        bottom.set_xlabel("node index")
        top.set_title(f"q={q!r}, r={r!r}, tau={tau!r}")
        top.legend(fontsize="small")
        path = out / f"md_q{q!r}_r{r!r}_tau{tau!r}.svg"
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        paths.append(path)
    return paths
