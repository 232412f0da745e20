import numpy as np
import pytest

from tankfdi.errors import ConfigError
from tankfdi.faults import (FaultSpec, NoiseConfig, apply_fault, delivered_input, sense,
                            single_fault)
from tankfdi.plant import InputVector, PlantState


def test_multiplicative_fault_after_onset():
    f = FaultSpec("S1", gain=0.8, start_time=200)
    assert apply_fault(0.5, f, 200.0) == pytest.approx(0.4)
    assert apply_fault(0.5, f, 199.9) == 0.5


def test_identity_fault():
    f = FaultSpec("S2")
    assert all(apply_fault(v, f, t) == v for v in (0.0, 0.3) for t in (0.0, 1e3))


def test_additive_fault():
    assert apply_fault(0.30, FaultSpec("S3", bias=0.02, start_time=5), 10.0) == pytest.approx(0.32)


def test_other_channel_untouched():
    assert apply_fault(0.5, FaultSpec("S1", gain=0.8), 10.0, channel="S2") == 0.5


@pytest.mark.parametrize("kw", [dict(target="S4"), dict(target="S1", gain=1.2),
                                dict(target="A1", gain=-0.1), dict(target="A1", start_time=-1)])
def test_invalid_fault(kw):
    with pytest.raises(ConfigError):
        FaultSpec(**kw)


def test_single_fault_rule():
    f = FaultSpec("S1", 0.8)
    assert single_fault(None) is None
    assert single_fault(f) is f
    assert single_fault([f]) is f
    with pytest.raises(ConfigError):
        single_fault([f, FaultSpec("A1", 0.8)])


def test_sense_noise_free_is_truth():
    s = PlantState(0.3, 0.1, 0.2, t=5.0)
    fr = sense(s, InputVector(1e-5, 2e-5), None, NoiseConfig(0.0), np.random.default_rng(0))
    assert fr.y == s.levels and fr.u == (1e-5, 2e-5) and fr.t == 5.0


def test_actuator_fault_reports_command_delivers_less():
    f = FaultSpec("A1", gain=0.8, start_time=0)
    u = InputVector(5e-5, 2e-5)
    fr = sense(PlantState(0.3, 0.1, 0.2, 10.0), u, f, NoiseConfig(0.0), np.random.default_rng(0))
    assert fr.u == (5e-5, 2e-5)
    assert tuple(delivered_input(u, f, 10.0)) == pytest.approx((4e-5, 2e-5))


def test_sensor_fault_only_on_measurement():
    f = FaultSpec("S1", gain=0.8, start_time=0)
    s = PlantState(0.3, 0.1, 0.2, 10.0)
    fr = sense(s, InputVector(0, 0), f, NoiseConfig(0.0), np.random.default_rng(0))
    assert fr.y1s == pytest.approx(0.24)
    assert tuple(delivered_input(InputVector(1e-5, 1e-5), f, 10.0)) == (1e-5, 1e-5)


def test_zero_sigma_draws_nothing():
    rng = np.random.default_rng(3)
    state = rng.bit_generator.state
    sense(PlantState(0.3, 0.1, 0.2), InputVector(0, 0), None, NoiseConfig(0.0), rng)
    assert rng.bit_generator.state == state


def test_noise_statistics():
    rng = NoiseConfig(5e-4, seed=1).rng()
    s = PlantState(0.3, 0.1, 0.2)
    y = np.array([sense(s, InputVector(0, 0), None, NoiseConfig(5e-4), rng).y for _ in range(4000)])
    assert np.std(y - s.levels, axis=0) == pytest.approx([5e-4] * 3, rel=0.06)


def test_noise_config_scalar_and_invalid():
    assert NoiseConfig(1e-3).sigma == (1e-3,) * 3
    with pytest.raises(ConfigError):
        NoiseConfig((1e-3, 1e-3))
    with pytest.raises(ConfigError):
        NoiseConfig(-1.0)
