import numpy as np
import pytest
from hypothesis import given, strategies as st

from cascade_fusion.adversary import Strategy, forced_emission, plan_attack


def test_leading_block_thirty_percent():
    plan = plan_attack("leading", 200, 60)
    assert plan.byzantine_set == tuple(range(1, 61))
    assert plan.n_star == 60 and plan.forced_bit == 0
    assert forced_emission(plan, 17) == 0
    assert forced_emission(plan, 61) is None


def test_none_and_trailing():
    none = plan_attack(Strategy.NONE, 200, 0)
    assert none.byzantine_set == ()
    assert all(forced_emission(none, k) is None for k in range(1, 201))
    trailing = plan_attack("trailing", 10, 3, forced_bit=1)
    assert trailing.byzantine_set == (8, 9, 10)
    assert forced_emission(trailing, 9) == 1


def test_random_full_compromise():
    for seed in range(5):
        plan = plan_attack("random", 10, 10, rng=np.random.default_rng(seed))
        assert plan.byzantine_set == tuple(range(1, 11))


def test_rejections():
    with pytest.raises(ValueError):
        plan_attack("leading", 10, 11)
    with pytest.raises(ValueError):
        plan_attack("random", 10, 3)
    with pytest.raises(ValueError):
        plan_attack("sideways", 10, 3)
    with pytest.raises(IndexError):
        forced_emission(plan_attack("leading", 10, 3), 11)


@given(st.integers(1, 300), st.data(), st.integers(0, 2**32))
def test_random_subset_deterministic(n, data, seed):
    k = data.draw(st.integers(0, n))
    a = plan_attack("random", n, k, rng=np.random.default_rng(seed))
    b = plan_attack("random", n, k, rng=np.random.default_rng(seed))
    assert a == b
    assert len(set(a.byzantine_set)) == k
    assert all(1 <= i <= n for i in a.byzantine_set)
    assert a.mask().sum() == k
