"""Static Byzantine attack plans: which nodes are compromised, and what they send."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np


class Strategy(str, Enum):
    NONE = "none"
    LEADING = "leading"
    RANDOM = "random"
    TRAILING = "trailing"


@dataclass(frozen=True)
class AttackPlan:
    n_nodes: int
    byzantine_set: tuple[int, ...]  # 1-based, sorted
    forced_bit: int = 0
    strategy: Strategy = Strategy.NONE

    @property
    def n_star(self) -> int:
        return len(self.byzantine_set)

    def mask(self) -> np.ndarray:
        """Boolean array of length ``n_nodes``, 0-based, True at compromised nodes."""
        m = np.zeros(self.n_nodes, dtype=bool)
        if self.byzantine_set:
            m[np.asarray(self.byzantine_set) - 1] = True
        return m

    def forced_emission(self, node_index: int) -> Optional[int]:
        if not 1 <= node_index <= self.n_nodes:
            raise IndexError(f"node index {node_index} outside 1..{self.n_nodes}")
        return self.forced_bit if node_index in self._members else None

    @property
    def _members(self) -> frozenset[int]:
        return frozenset(self.byzantine_set)


def plan_attack(
    strategy: Strategy | str,
    n_nodes: int,
    n_star: int,
    forced_bit: int = 0,
    rng: Optional[np.random.Generator] = None,
) -> AttackPlan:
    strategy = Strategy(strategy)
    if n_nodes < 1:
        raise ValueError("n_nodes must be at least 1")
    if not 0 <= n_star <= n_nodes:
        raise ValueError(f"n_star={n_star} outside 0..{n_nodes}")
    if forced_bit not in (0, 1):
        raise ValueError("forced_bit must be 0 or 1")

    if strategy is Strategy.NONE or n_star == 0:
        members: tuple[int, ...] = ()
    elif strategy is Strategy.LEADING:
        members = tuple(range(1, n_star + 1))
    elif strategy is Strategy.TRAILING:
        members = tuple(range(n_nodes - n_star + 1, n_nodes + 1))
    else:
        if rng is None:
            raise ValueError("random-subset attack needs an rng")
        picked = rng.choice(n_nodes, size=n_star, replace=False) + 1
        members = tuple(sorted(int(i) for i in picked))
    return AttackPlan(n_nodes, members, forced_bit, strategy)


def forced_emission(plan: AttackPlan, node_index: int) -> Optional[int]:
    return plan.forced_emission(node_index)
