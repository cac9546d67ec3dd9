import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from cascade_fusion.sensor import SensorSpec, detection_prob, loglik_cdf, sample_signal, signal_loglik

valid_q = st.floats(min_value=1e-6, max_value=0.499)
valid_r = st.floats(min_value=1e-4, max_value=1.0)


def hp_loglik(q, r, s):
    mpmath.mp.dps = 50
    q, r = mpmath.mpf(q), mpmath.mpf(r)
    pd = r + q - 2 * r * q
    return float(mpmath.log(pd / q)) if s else float(mpmath.log((1 - pd) / (1 - q)))


def test_detection_prob_examples():
    assert detection_prob(0.0, 0.0) == 0.0
    assert detection_prob(1e-4, 0.05) == pytest.approx(0.05009, abs=1e-15)
    assert detection_prob(0.4999999, 0.3) == pytest.approx(0.5, abs=1e-6)
    assert SensorSpec(q=1e-4, r=0.05).detection_prob == pytest.approx(0.05009, abs=1e-15)


def test_signal_loglik_examples(reference_model):
    assert signal_loglik(reference_model, 1) == pytest.approx(hp_loglik(1e-4, 0.05, 1), abs=1e-12)
    assert signal_loglik(reference_model, 0) == pytest.approx(hp_loglik(1e-4, 0.05, 0), abs=1e-14)
    assert signal_loglik(reference_model, 1) == pytest.approx(6.2164, abs=5e-5)
    assert signal_loglik(reference_model, 0) == pytest.approx(-0.051288, abs=5e-7)


def test_uninformative_limit():
    m = SensorSpec(q=0.5 - 1e-12, r=0.7).model()
    assert abs(m.lam0) < 1e-9 and abs(m.lam1) < 1e-9


@pytest.mark.parametrize("q,r", [(0.5, 0.1), (0.7, 0.1), (-0.1, 0.1), (0.1, 0.0), (0.1, 1.5)])
def test_invalid_specs_rejected(q, r):
    with pytest.raises(ValueError):
        SensorSpec(q=q, r=r)


def test_loglik_cdf_examples(reference_model):
    m = reference_model
    assert loglik_cdf(m, 0, m.lam0) == 0.0
    assert loglik_cdf(m, 1, m.lam0) == 0.0
    assert loglik_cdf(m, 1, 0.0) == pytest.approx(0.94991, abs=1e-15)
    assert loglik_cdf(m, 0, 0.0) == pytest.approx(0.9999, abs=1e-15)
    assert loglik_cdf(m, 0, m.lam1) == pytest.approx(0.9999, abs=1e-15)
    for w in (0, 1):
        assert loglik_cdf(m, w, m.lam1 + 1) == 1.0


@given(valid_q, valid_r)
def test_loglik_signs(q, r):
    m = SensorSpec(q=q, r=r).model()
    assert m.lam0 < 0 < m.lam1
    assert math.isfinite(m.lam0) and math.isfinite(m.lam1)
    assert m.lam1 == pytest.approx(hp_loglik(q, r, 1), rel=1e-9, abs=1e-12)


@given(valid_q, valid_r, st.lists(st.floats(-20, 20), min_size=2, max_size=20))
def test_cdf_monotone_and_dominated(q, r, points):
    m = SensorSpec(q=q, r=r).model()
    points = sorted(points)
    for w in (0, 1):
        values = [m.loglik_cdf(w, a) for a in points]
        assert values == sorted(values)
        assert m.loglik_cdf(w, -1e300) == 0.0 and m.loglik_cdf(w, 1e300) == 1.0
    for a in points:
        assert m.loglik_cdf(1, a) <= m.loglik_cdf(0, a)


def test_sample_signal_degenerate_sensors():
    rng = np.random.default_rng(3)
    quiet = SensorSpec(q=0.0, r=0.3).model()
    assert all(sample_signal(quiet, 0, rng) == 0 for _ in range(2000))
    perfect = SensorSpec(q=0.0, r=1.0).model()
    assert all(sample_signal(perfect, 1, rng) == 1 for _ in range(2000))


@pytest.mark.parametrize("w", [0, 1])
def test_sample_signal_frequency(reference_model, w):
    n = 1_000_000
    rng = np.random.default_rng(11 + w)
    # same stream consumption as repeated sample_signal calls
    draws = rng.random(n) < reference_model.p_one(w)
    p = reference_model.p_one(w)
    assert abs(draws.mean() - p) < 4 * math.sqrt(p * (1 - p) / n)
    rng = np.random.default_rng(11 + w)
    assert [sample_signal(reference_model, w, rng) for _ in range(500)] == [int(d) for d in draws[:500]]
