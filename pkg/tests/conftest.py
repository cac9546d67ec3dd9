import pytest

from cascade_fusion.sensor import SensorSpec


@pytest.fixture
def reference_spec():
    return SensorSpec(q=1e-4, r=0.05)


@pytest.fixture
def reference_model(reference_spec):
    return reference_spec.model()
