"""Per-node miss-detection / false-alarm curves and sweep summaries.

Every node is a candidate collection point, so rates are reported for all of
them.  "Most unfavorable" runs are the W=1 runs with the lowest final
log-likelihood, ties broken by run index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .engine import RawResults, RunConfig

DECILE_RULE = "lowest final log-likelihood L_N among W=1 runs; ties by run index"


@dataclass(frozen=True)
class NodeStats:
    node_index: int
    md_rate: float
    fa_rate: float
    md_worst_decile: float
    stderr_md: float
    stderr_fa: float


def _binomial_stderr(p: np.ndarray, n: int) -> np.ndarray:
    return np.sqrt(p * (1.0 - p) / n)


def md_curve(raw: RawResults) -> np.ndarray:
    raw.require(1)
    return (raw.bits[1] == 0).mean(axis=0)


def fa_curve(raw: RawResults) -> np.ndarray:
    raw.require(0)
    return raw.bits[0].mean(axis=0)


def worst_runs(raw: RawResults, fraction: float = 0.10) -> np.ndarray:
    """Indices of the ceil(fraction * runs) W=1 runs with the least evidence for W=1."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must lie in (0, 1]")
    raw.require(1)
    final = raw.final_loglik[1]
    keep = math.ceil(fraction * len(final))
    order = np.lexsort((np.arange(len(final)), final))
    return order[:keep]


def worst_decile_curve(raw: RawResults, fraction: float = 0.10) -> np.ndarray:
    idx = worst_runs(raw, fraction)
    subset = raw.bits[1][idx]
    return (subset == 0).mean(axis=0)


def md_fa_curves(
    raw: RawResults, fraction: float = 0.10, require: Iterable[int] = (0, 1)
) -> list[NodeStats]:
    """NodeStats per node.  Hypotheses listed in ``require`` must be present;
    rates for an absent, non-required hypothesis are NaN."""
    for w in require:
        raw.require(w)
    n_nodes = raw.config.n_nodes
    nan = np.full(n_nodes, np.nan)
    if 1 in raw.bits:
        md = md_curve(raw)
        md_se = _binomial_stderr(md, raw.bits[1].shape[0])
        worst = worst_decile_curve(raw, fraction)
    else:
        md = md_se = worst = nan
    if 0 in raw.bits:
        fa = fa_curve(raw)
        fa_se = _binomial_stderr(fa, raw.bits[0].shape[0])
    else:
        fa = fa_se = nan
    return [
        NodeStats(k + 1, float(md[k]), float(fa[k]), float(worst[k]), float(md_se[k]), float(fa_se[k]))
        for k in range(n_nodes)
    ]


def last_honest_node(raw: RawResults) -> int:
    """Highest 1-based index outside the Byzantine set (0 if every node is compromised)."""
    honest = np.flatnonzero(~raw.plan.mask())
    return int(honest[-1]) + 1 if honest.size else 0


def md_at_last_honest(raw: RawResults) -> tuple[int, float, float]:
    """(node, md_rate, stderr) at the last uncompromised node.

    A random attack set can contain node N itself, which pins its miss rate to
    1 regardless of how the network learned; this is the fair collection point
    when comparing attack placements.
    """
    node = last_honest_node(raw)
    if node == 0:
        raise ValueError("every node is compromised")
    md = float(md_curve(raw)[node - 1])
    return node, md, float(_binomial_stderr(np.float64(md), raw.bits[1].shape[0]))


@dataclass(frozen=True)
class SweepRow:
    q: float
    r: float
    tau: float
    n_star: int
    md_rate: float
    md_stderr: float
    fa_rate: float
    fa_stderr: float
    md_worst_decile: float


def asymptotic_sweep(results: Sequence[tuple[RunConfig, Sequence[NodeStats]]]) -> list[SweepRow]:
    """One row per sweep point: the rates at the last node N."""
    if not results:
        return []
    sizes = {c.n_nodes for c, _ in results}
    if len(sizes) != 1:
        raise ValueError(f"inconsistent network sizes across sweep: {sorted(sizes)}")
    rows = []
    seen = set()
    for c, stats in results:
        if len(stats) != c.n_nodes:
            raise ValueError("node statistics do not match the configured network size")
        key = (c.sensor.q, c.sensor.r, c.tau, c.n_star)
        if key in seen:
            raise ValueError(f"duplicate sweep point {key}")
        seen.add(key)
        last = stats[-1]
        rows.append(SweepRow(*key, last.md_rate, last.stderr_md, last.fa_rate, last.stderr_fa, last.md_worst_decile))
    return rows


def first_crossing(rows: Sequence[SweepRow], level: float = 0.5) -> float:
    """Smallest swept N* whose asymptotic MD exceeds ``level`` (inf if none does)."""
    hits = [row.n_star for row in sorted(rows, key=lambda r: r.n_star) if row.md_rate > level]
    return float(hits[0]) if hits else math.inf
