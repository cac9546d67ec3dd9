"""Single network realizations and Monte Carlo batches.

Seeding: run ``i`` under hypothesis ``w`` draws from
``PCG64(SeedSequence(seed, spawn_key=(w, i)))``.  Every node consumes exactly
one uniform per run (compromised nodes too, their reading is simply
discarded), so the stream is aligned by node index and the result of a run
depends on nothing but ``(seed, w, i)``.  Batches are therefore identical for
any chunking or worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .adversary import AttackPlan, Strategy, plan_attack
from .fusion import FusionState, decide, increment_from_cdf, social_loglik
from .sensor import SensorSpec, SignalModel

HYPOTHESES = {"w0": (0,), "w1": (1,), "both": (0, 1)}
CHUNK = 2048
_PLAN_KEY = (2,)


@dataclass(frozen=True)
class RunConfig:
    n_nodes: int = 200
    sensor: SensorSpec = field(default_factory=lambda: SensorSpec(q=1e-4, r=0.05))
    tau: float = 0.0
    strategy: Strategy = Strategy.LEADING
    n_star: int = 0
    forced_bit: int = 0
    n_runs: int = 10_000
    seed: int = 0
    hypothesis: str = "both"

    def __post_init__(self) -> None:
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.n_nodes < 1:
            raise ValueError("n_nodes must be at least 1")
        if self.n_runs < 1:
            raise ValueError("n_runs must be at least 1")
        if not 0 <= self.n_star <= self.n_nodes:
            raise ValueError(f"n_star={self.n_star} outside 0..{self.n_nodes}")
        if self.hypothesis not in HYPOTHESES:
            raise ValueError(f"hypothesis must be one of {sorted(HYPOTHESES)}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a non-negative 64-bit integer")

    @property
    def model(self) -> SignalModel:
        return self.sensor.model()

    @property
    def hypotheses(self) -> tuple[int, ...]:
        return HYPOTHESES[self.hypothesis]

    def plan(self) -> AttackPlan:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=_PLAN_KEY)))
        return plan_attack(self.strategy, self.n_nodes, self.n_star, self.forced_bit, rng)


@dataclass
class Trace:
    w: int
    bits: np.ndarray  # uint8, length N
    loglik: np.ndarray  # float64, L_1..L_N
    byzantine_mask: np.ndarray  # bool, length N


@dataclass
class RawResults:
    config: RunConfig
    plan: AttackPlan
    bits: dict[int, np.ndarray]  # w -> (n_runs, N) uint8
    final_loglik: dict[int, np.ndarray]  # w -> (n_runs,) float64

    def require(self, w: int) -> None:
        if w not in self.bits:
            raise MissingHypothesisError(f"no runs simulated under W={w}")


class MissingHypothesisError(LookupError):
    pass


def run_rng(seed: int, run_index: int, w: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(w, run_index))))


def run_trace(config: RunConfig, w: int, plan: AttackPlan, rng: np.random.Generator) -> Trace:
    """One realization, node by node, through the scalar fusion functions."""
    model = config.model
    n = config.n_nodes
    bits = np.zeros(n, dtype=np.uint8)
    loglik = np.zeros(n)
    state = FusionState(tau=config.tau)
    for k in range(1, n + 1):
        s = model.sample_signal(w, rng)
        forced = plan.forced_emission(k)
        x = decide(s, state, model) if forced is None else forced
        state = state.advance(x, model)
        bits[k - 1] = x
        loglik[k - 1] = state.l
    return Trace(w=w, bits=bits, loglik=loglik, byzantine_mask=plan.mask())


def _increment_table(model: SignalModel, w_free_cdf: np.ndarray) -> np.ndarray:
    # Rows: up-cascade (a <= lam0), informative, down-cascade (a > lam1).
    table = np.empty((3, 2))
    for region in range(3):
        f1, f0 = w_free_cdf[region]
        table[region] = [increment_from_cdf(0, f1, f0), increment_from_cdf(1, f1, f0)]
    return table


def simulate_block(
    model: SignalModel,
    tau: float,
    mask: np.ndarray,
    forced_bit: int,
    w: int,
    uniforms: np.ndarray,
    keep_loglik: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized over runs (rows of ``uniforms``); sequential over nodes.

    Returns ``(bits, loglik)`` where ``loglik`` is the final value per run, or
    the full ``(runs, N)`` trajectory when ``keep_loglik`` is set.
    """
    n_runs, n_nodes = uniforms.shape
    signals = uniforms < model.p_one(w)
    cdf = np.array([[0.0, 0.0], [1.0 - model.p_d, 1.0 - model.p_fa], [1.0, 1.0]])
    table = _increment_table(model, cdf)
    bits = np.empty((n_runs, n_nodes), dtype=np.uint8)
    traj = np.empty((n_runs, n_nodes)) if keep_loglik else None
    L = np.zeros(n_runs)
    forced_row = np.full(n_runs, forced_bit, dtype=np.uint8)
    for k in range(n_nodes):
        a = tau - L
        if mask[k]:
            x = forced_row
        else:
            lam = np.where(signals[:, k], model.lam1, model.lam0)
            x = (lam >= a).astype(np.uint8)
        region = (a > model.lam0).astype(np.intp) + (a > model.lam1)
        L = L + table[region, x]
        bits[:, k] = x
        if traj is not None:
            traj[:, k] = L
    return bits, (traj if traj is not None else L)


def _draw_uniforms(seed: int, w: int, runs: range, n_nodes: int) -> np.ndarray:
    out = np.empty((len(runs), n_nodes))
    for row, i in enumerate(runs):
        out[row] = run_rng(seed, i, w).random(n_nodes)
    return out


def _chunk_job(args) -> tuple[np.ndarray, np.ndarray]:
    config, mask, w, start, stop = args
    u = _draw_uniforms(config.seed, w, range(start, stop), config.n_nodes)
    return simulate_block(config.model, config.tau, mask, config.forced_bit, w, u)


def monte_carlo(config: RunConfig, jobs: int = 1) -> RawResults:
    plan = config.plan()
    mask = plan.mask()
    bits: dict[int, np.ndarray] = {}
    final: dict[int, np.ndarray] = {}
    for w in config.hypotheses:
        tasks = [
            (config, mask, w, start, min(start + CHUNK, config.n_runs))
            for start in range(0, config.n_runs, CHUNK)
        ]
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(_chunk_job, tasks))
        else:
            parts = [_chunk_job(t) for t in tasks]
        bits[w] = np.concatenate([p[0] for p in parts])
        final[w] = np.concatenate([p[1] for p in parts])
    return RawResults(config=config, plan=plan, bits=bits, final_loglik=final)


def trace_of(raw: RawResults, w: int, run_index: int) -> Trace:
    """Rebuild one run of a batch as a Trace (log-likelihood recomputed from its bits)."""
    raw.require(w)
    x = raw.bits[w][run_index]
    loglik = np.asarray(social_loglik(x, raw.config.tau, raw.config.model))
    return Trace(w=w, bits=x.copy(), loglik=loglik, byzantine_mask=raw.plan.mask())
