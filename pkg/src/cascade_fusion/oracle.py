"""Exhaustive chain-rule oracle for the broadcast-history log-likelihood.

Enumerates every signal vector of an all-honest network and keeps those that
reproduce the given bit string, where node j's decision uses the history
log-likelihood obtained from the same enumeration.  Shares no code with the
recursion in :mod:`cascade_fusion.fusion`.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .adversary import plan_attack
from .engine import RunConfig, run_trace
from .fusion import social_loglik
from .sensor import SensorSpec

log = logging.getLogger(__name__)

MAX_ENUM_LENGTH = 16
TOLERANCE = 1e-9


def _history_prob(weights: np.ndarray, consistent: np.ndarray) -> float:
    return float(weights[consistent].sum())


def brute_force_loglik(x_seq: Sequence[int], tau: float, spec: SensorSpec) -> Optional[float]:
    """log P{X^n=x^n | W=1} - log P{X^n=x^n | W=0}, or None if either is zero."""
    n = len(x_seq)
    if not 1 <= n <= MAX_ENUM_LENGTH:
        raise ValueError(f"string length must lie in 1..{MAX_ENUM_LENGTH}")
    q, r = spec.q, spec.r
    p_one = {0: q, 1: r + q - 2 * r * q}
    sig_ll = {0: math.log((1 - p_one[1]) / (1 - p_one[0])), 1: math.log(p_one[1] / p_one[0])}

    signals = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.uint8)
    weights = {
        w: np.prod(np.where(signals == 1, p_one[w], 1 - p_one[w]), axis=1) for w in (0, 1)
    }
    consistent = np.ones(len(signals), dtype=bool)
    for j, x in enumerate(x_seq):
        p1 = _history_prob(weights[1], consistent)
        p0 = _history_prob(weights[0], consistent)
        history_ll = math.log(p1) - math.log(p0)
        lam = np.where(signals[:, j] == 1, sig_ll[1], sig_ll[0])
        emitted = (lam + history_ll >= tau).astype(np.uint8)
        consistent &= emitted == x
        if not consistent.any():
            return None
    p1 = _history_prob(weights[1], consistent)
    p0 = _history_prob(weights[0], consistent)
    if p1 == 0.0 or p0 == 0.0:
        return None
    return math.log(p1) - math.log(p0)


@dataclass
class OracleReport:
    trials: int
    checked: int
    skipped: int
    max_deviation: float
    worst_case: Optional[dict]

    @property
    def passed(self) -> bool:
        return self.max_deviation < TOLERANCE

    def lines(self) -> list[str]:
        return [
            f"trials={self.trials} checked={self.checked} skipped_infeasible={self.skipped}",
            f"max_abs_deviation={self.max_deviation!r} tolerance={TOLERANCE!r}",
            f"result={'PASS' if self.passed else 'FAIL'}",
        ]


def random_case(rng: np.random.Generator, n_max: int) -> tuple[SensorSpec, float, list[int]]:
    spec = SensorSpec(q=float(rng.uniform(0.01, 0.45)), r=float(rng.uniform(0.05, 1.0)))
    tau = float(rng.uniform(-2.0, 2.0))
    n = int(rng.integers(1, n_max + 1))
    if rng.random() < 0.5:
        bits = [int(b) for b in rng.integers(0, 2, size=n)]
    else:
        # honest realizations are feasible under both hypotheses
        cfg = RunConfig(n_nodes=n, sensor=spec, tau=tau, n_star=0, n_runs=1)
        trace = run_trace(cfg, int(rng.integers(0, 2)), plan_attack("none", n, 0), rng)
        bits = [int(b) for b in trace.bits]
    return spec, tau, bits


def oracle_check(n_max: int = 10, trials: int = 1000, seed: int = 0) -> OracleReport:
    if not 1 <= n_max <= MAX_ENUM_LENGTH:
        raise ValueError(f"n_max must lie in 1..{MAX_ENUM_LENGTH}")
    if trials < 0:
        raise ValueError("trials must be non-negative")
    rng = np.random.default_rng(seed)
    checked = skipped = 0
    max_dev = 0.0
    worst = None
    for _ in range(trials):
        spec, tau, bits = random_case(rng, n_max)
        expected = brute_force_loglik(bits, tau, spec)
        if expected is None:
            skipped += 1
            continue
        got = social_loglik(bits, tau, spec.model())[-1]
        dev = abs(got - expected)
        checked += 1
        if worst is None or dev > max_dev:
            max_dev = dev
            worst = {"q": spec.q, "r": spec.r, "tau": tau, "bits": bits, "recursion": got, "oracle": expected}
    if checked == 0:
        log.warning("oracle check compared no strings; passing vacuously")
    return OracleReport(trials, checked, skipped, max_dev, worst)
