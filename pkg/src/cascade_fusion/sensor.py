"""Binary sensor model and the signal-model interface used by the fusion rule.

A sensor covers a fraction ``r`` of the surveilled area and flips its reading
with probability ``q``.  Everything downstream only needs three things from a
signal model: the log-likelihood of a reading, the conditional c.d.f. of that
log-likelihood, and a way to sample readings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def detection_prob(q: float, r: float) -> float:
    """P{S=1 | W=1}: attack in range and read correctly, or out of range and misread."""
    return r + q - 2 * r * q


def _log_ratio(num: float, den: float) -> float:
    if num == den:
        return 0.0
    if den == 0.0:
        return math.inf
    if num == 0.0:
        return -math.inf
    return math.log(num / den)


@dataclass(frozen=True)
class SensorSpec:
    q: float
    r: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.q < 0.5:
            raise ValueError(f"sensor error rate q must lie in [0, 0.5), got {self.q!r}")
        if not 0.0 < self.r <= 1.0:
            raise ValueError(f"coverage ratio r must lie in (0, 1], got {self.r!r}")

    @property
    def detection_prob(self) -> float:
        return detection_prob(self.q, self.r)

    def model(self) -> "SignalModel":
        return SignalModel.from_spec(self)


@dataclass(frozen=True)
class SignalModel:
    """Conditional law of a binary reading under both hypotheses.

    ``lam0``/``lam1`` are the log-likelihood ratios (nats) of readings 0 and 1.
    They are infinite only in the degenerate noiseless limits (``p_fa == 0``
    or ``p_d == 1``).
    """

    p_fa: float
    p_d: float
    lam0: float = field(init=False)
    lam1: float = field(init=False)

    def __post_init__(self) -> None:
        if not (0.0 <= self.p_fa <= 1.0 and 0.0 <= self.p_d <= 1.0):
            raise ValueError("signal probabilities must lie in [0, 1]")
        if self.p_d <= self.p_fa:
            raise ValueError("detection probability must exceed the false-alarm probability")
        object.__setattr__(self, "lam0", _log_ratio(1.0 - self.p_d, 1.0 - self.p_fa))
        object.__setattr__(self, "lam1", _log_ratio(self.p_d, self.p_fa))

    @classmethod
    def from_spec(cls, spec: SensorSpec) -> "SignalModel":
        return cls(p_fa=spec.q, p_d=spec.detection_prob)

    def p_one(self, w: int) -> float:
        """P{S=1 | W=w}."""
        return self.p_d if w else self.p_fa

    def signal_loglik(self, s: int) -> float:
        return self.lam1 if s else self.lam0

    def loglik_cdf(self, w: int, a: float) -> float:
        """P{Lambda_S(S) < a | W=w}; strict inequality, so the atoms belong to the right piece."""
        if a <= self.lam0:
            return 0.0
        if a <= self.lam1:
            return 1.0 - self.p_one(w)
        return 1.0

    def sample_signal(self, w: int, rng: np.random.Generator) -> int:
        return int(rng.random() < self.p_one(w))


def signal_loglik(model: SignalModel, s: int) -> float:
    return model.signal_loglik(s)


def loglik_cdf(model: SignalModel, w: int, a: float) -> float:
    return model.loglik_cdf(w, a)


def sample_signal(model: SignalModel, w: int, rng: np.random.Generator) -> int:
    return model.sample_signal(w, rng)
