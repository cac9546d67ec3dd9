import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from cascade_fusion.fusion import (
    FusionState,
    cascade_threshold,
    decide,
    honest_emission_prob,
    increment,
    social_loglik,
)
from cascade_fusion.oracle import brute_force_loglik
from cascade_fusion.sensor import SensorSpec

LAM1 = 6.216406  # log(0.05009 / 0.0001)
LAM0 = -0.05128803  # log(0.94991 / 0.9999)


def test_reference_values_against_high_precision():
    mpmath.mp.dps = 40
    assert float(mpmath.log(mpmath.mpf("0.05009") / mpmath.mpf("0.0001"))) == pytest.approx(LAM1, abs=1e-6)
    assert float(mpmath.log(mpmath.mpf("0.94991") / mpmath.mpf("0.9999"))) == pytest.approx(LAM0, abs=1e-7)


def test_decide_examples(reference_model):
    m = reference_model
    assert decide(1, FusionState(), m) == 1
    assert decide(0, FusionState(), m) == 0
    for eps in (1e-12, 1e-3, 1.0):
        assert decide(0, FusionState(l=-m.lam0 + eps), m) == 1


def test_decide_tie_goes_to_one(reference_model):
    m = reference_model
    assert decide(0, FusionState(l=0.0, tau=m.lam0), m) == 1


def test_honest_emission_examples(reference_model):
    m = reference_model
    assert honest_emission_prob(1, FusionState(), m) == pytest.approx(0.94991, abs=1e-15)
    assert honest_emission_prob(0, FusionState(l=-(m.lam1 + 0.5)), m) == 1.0
    assert honest_emission_prob(0, FusionState(l=-m.lam0), m) == 0.0


def test_increment_examples(reference_model):
    m = reference_model
    assert increment(0, FusionState(), m) == pytest.approx(LAM0, abs=1e-7)
    assert increment(0, FusionState(), m) == m.lam0
    assert increment(1, FusionState(), m) == pytest.approx(LAM1, abs=1e-6)
    assert increment(0, FusionState(l=-(m.lam1 + 1)), m) == 0.0
    # a bit that is impossible for an honest node carries no evidence
    assert increment(1, FusionState(l=-(m.lam1 + 1)), m) == 0.0
    assert increment(0, FusionState(l=10.0), m) == 0.0


def test_social_loglik_examples(reference_model):
    assert FusionState().l == 0.0
    traj = social_loglik([0, 0], 0.0, reference_model)
    assert traj[-1] == pytest.approx(2 * LAM0, abs=1e-6)
    assert traj[-1] == pytest.approx(-0.102576, abs=1e-6)
    assert social_loglik([], 0.0, reference_model) == []


def test_cascade_threshold_matches_ceiling(reference_model):
    mpmath.mp.dps = 40
    q, r = mpmath.mpf("0.0001"), mpmath.mpf("0.05")
    pd = r + q - 2 * r * q
    expected = int(mpmath.ceil(mpmath.log(pd / q) / -mpmath.log((1 - pd) / (1 - q))))
    assert expected == 122
    assert cascade_threshold(reference_model) == 122


specs = st.builds(
    SensorSpec, q=st.floats(min_value=0.01, max_value=0.45), r=st.floats(min_value=0.05, max_value=1.0)
)
taus = st.floats(min_value=-3.0, max_value=3.0)


@settings(max_examples=300, deadline=None)
@given(specs, taus, st.lists(st.integers(0, 1), min_size=1, max_size=10))
def test_matches_brute_force_enumeration(spec, tau, bits):
    m = spec.model()
    # at an atom (tau - L == lam_s) rounding decides which side a node is on
    prefix = [0.0] + social_loglik(bits, tau, m)[:-1]
    assume(all(min(abs(tau - l - m.lam0), abs(tau - l - m.lam1)) > 1e-9 for l in prefix))
    expected = brute_force_loglik(bits, tau, spec)
    if expected is None:
        return
    got = social_loglik(bits, tau, spec.model())[-1]
    assert abs(got - expected) < 1e-9


@given(specs, taus, st.lists(st.integers(0, 1), min_size=1, max_size=30))
def test_cascades_absorb(spec, tau, bits):
    m = spec.model()
    state = FusionState(tau=tau)
    for x in bits:
        a = state.tau - state.l
        if a > m.lam1 or a <= m.lam0:
            p0 = [honest_emission_prob(w, state, m) for w in (0, 1)]
            assert p0 == ([1.0, 1.0] if a > m.lam1 else [0.0, 0.0])
            assert increment(0, state, m) == 0.0 and increment(1, state, m) == 0.0
            frozen = state.l
            for y in (0, 1, 1, 0):
                state = state.advance(y, m)
                assert state.l == frozen
        state = state.advance(x, m)
        assert math.isfinite(state.l)


@given(specs, taus, st.floats(-10, 10))
def test_change_of_measure_identity(spec, tau, l):
    m = spec.model()
    state = FusionState(l=l, tau=tau)
    f0 = honest_emission_prob(0, state, m)
    f1 = honest_emission_prob(1, state, m)
    if not 0.0 < f0 < 1.0:
        return
    inc = {x: increment(x, state, m) for x in (0, 1)}
    assert f0 * math.exp(inc[0]) + (1 - f0) * math.exp(inc[1]) == pytest.approx(1.0, abs=1e-12)
    assert f1 * math.exp(-inc[0]) + (1 - f1) * math.exp(-inc[1]) == pytest.approx(1.0, abs=1e-12)


@given(specs, taus, st.floats(-10, 10), st.floats(0, 5))
def test_decide_monotone(spec, tau, l, bump):
    m = spec.model()
    for s in (0, 1):
        if decide(s, FusionState(l=l, tau=tau), m) == 1:
            assert decide(s, FusionState(l=l + bump, tau=tau), m) == 1
    if decide(0, FusionState(l=l, tau=tau), m) == 1:
        assert decide(1, FusionState(l=l, tau=tau), m) == 1


def test_noiseless_limit_stays_defined():
    m = SensorSpec(q=0.0, r=1.0).model()
    assert m.lam1 == math.inf and m.lam0 == -math.inf
    traj = social_loglik([1, 1, 1], 0.0, m)
    assert traj[0] == math.inf and traj[-1] == math.inf
    assert decide(1, FusionState(l=traj[-1]), m) == 1


def test_recursion_is_linear_and_pure(reference_model):
    rng = np.random.default_rng(0)
    bits = rng.integers(0, 2, size=5000).tolist()
    first = social_loglik(bits, 0.0, reference_model)
    assert len(first) == 5000
    assert social_loglik(bits, 0.0, reference_model) == first
