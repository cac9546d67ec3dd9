"""Bayesian social-learning fusion rule.

Each honest node adds its own reading's log-likelihood to the log-likelihood
of the public broadcast history and emits 1 unless the sum falls below the
threshold ``tau``.  The history log-likelihood is tracked recursively, one
broadcast at a time, using only the honest emission law; a node cannot tell
falsified bits apart from honest ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from .sensor import SignalModel, _log_ratio


@dataclass(frozen=True)
class FusionState:
    l: float = 0.0
    n: int = 0
    tau: float = 0.0

    def advance(self, x: int, model: SignalModel) -> "FusionState":
        return replace(self, l=self.l + increment(x, self, model), n=self.n + 1)


def decide(s: int, state: FusionState, model: SignalModel) -> int:
    # Compared as Lambda_S < tau - l rather than Lambda_S + l < tau so the
    # decision event coincides bit-for-bit with loglik_cdf(tau - l).
    return 0 if model.signal_loglik(s) < state.tau - state.l else 1


def honest_emission_prob(w: int, state: FusionState, model: SignalModel) -> float:
    """P{X = 0 | history, W=w} for an honest node."""
    return model.loglik_cdf(w, state.tau - state.l)


def increment_from_cdf(x: int, f1: float, f0: float) -> float:
    """Log-likelihood contributed by broadcast ``x`` given P{X=0|W=w} = f_w.

    Bits that are certain (1/1) or impossible (0/0) under the honest law
    contribute nothing.
    """
    if x:
        return _log_ratio(1.0 - f1, 1.0 - f0)
    return _log_ratio(f1, f0)


def increment(x: int, state: FusionState, model: SignalModel) -> float:
    a = state.tau - state.l
    return increment_from_cdf(x, model.loglik_cdf(1, a), model.loglik_cdf(0, a))


def social_loglik(x_seq: Sequence[int], tau: float, model: SignalModel) -> list[float]:
    """Trajectory L_1..L_n of the broadcast-history log-likelihood.

    Linear in ``len(x_seq)``; L_0 = 0 is implicit.
    """
    out = []
    state = FusionState(tau=tau)
    for x in x_seq:
        state = state.advance(int(x), model)
        out.append(state.l)
    return out


def cascade_threshold(model: SignalModel, tau: float = 0.0) -> int:
    """Number of leading forced zeros after which every honest node emits 0.

    Each zero seen from the informative region lowers the log-likelihood by
    exactly ``|lam0|``; the down-cascade starts once ``tau - L > lam1``.
    """
    if not (math.isfinite(model.lam0) and math.isfinite(model.lam1)):
        raise ValueError("cascade threshold needs finite signal log-likelihoods")
    state = FusionState(tau=tau)
    k = 0
    while state.tau - state.l <= model.lam1:
        if state.tau - state.l <= model.lam0:
            raise ValueError("threshold starts in the up-cascade region; zeros never cascade")
        state = state.advance(0, model)
        k += 1
    return k
