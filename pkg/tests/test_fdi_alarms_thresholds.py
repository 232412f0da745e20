import numpy as np
import pytest

from conftest import calibration_scenarios
from tankfdi.errors import ConfigError
from tankfdi.experiment import calibrate
from tankfdi.faults import FaultSpec, NoiseConfig
from tankfdi.fdi import (AlarmEvaluator, ThresholdSet, alarm_stream, calibrate_thresholds,
                         load_thresholds, save_thresholds, window_pattern)


def test_threshold_rule():
    run = np.array([[0.001, -2.0], [-0.0005, 1.0], [np.nan, np.nan]])
    ts = calibrate_thresholds([run], ("a", "b"))
    assert ts.values == pytest.approx((0.00105, 2.1), rel=1e-12)


def test_threshold_takes_worst_run():
    a = np.array([[0.1, 0.0005]])
    b = np.array([[-0.2, 0.0001]])
    ts = calibrate_thresholds([a, b], ("x", "y"), margin=1.0)
    assert ts.values == (0.2, 0.0005)


def test_calibration_errors():
    with pytest.raises(ConfigError):
        calibrate_thresholds([], ("a",))
    with pytest.raises(ConfigError):
        calibrate_thresholds([np.zeros((4, 2))], ("a", "b", "c"))
    with pytest.raises(ConfigError):
        calibrate_thresholds([np.zeros((4, 1))], ("a",))  # zero threshold
    with pytest.raises(ConfigError):
        calibrate([])
    sc = calibration_scenarios()
    with pytest.raises(ConfigError):
        calibrate([sc[0], sc[1].with_(fault=FaultSpec("S1", 0.8, start_time=200))])
    with pytest.raises(ConfigError):
        calibrate([sc[0], sc[1].with_(flat_outputs=("Z1",))])


def test_threshold_set_lookup():
    ts = ThresholdSet(("a", "b"), (1.0, 2.0))
    assert list(ts.as_array(("b", "a"))) == [2.0, 1.0]
    with pytest.raises(ConfigError):
        ts.as_array(("c",))
    with pytest.raises(ConfigError):
        ThresholdSet(("a",), (1.0, 2.0))


def test_threshold_csv_round_trip(tmp_path):
    ts = ThresholdSet(("Z1:R_S2", "Z1:R_A1"), (0.0109224123456789, 2.27435e-06))
    save_thresholds(ts, tmp_path / "th.csv")
    assert load_thresholds(tmp_path / "th.csv") == ts
    (tmp_path / "bad.csv").write_text("channel,threshold\nx,abc\n")
    with pytest.raises(ConfigError):
        load_thresholds(tmp_path / "bad.csv")


def test_calibrated_thresholds(thresholds):
    assert thresholds.channels == ("Z1:R_S2", "Z1:R_A1", "Z1:R_A2", "Z2:R_S1", "Z2:R_A1", "Z2:R_A2")
    assert all(v > 0 for v in thresholds.values)
    # level thresholds sit above the 5e-4 noise level
    assert thresholds.as_array(("Z1:R_S2",))[0] > 5e-4


def test_noise_free_calibration_is_nonzero_floor(thresholds):
    scs = [s.with_(noise=NoiseConfig(0.0)) for s in calibration_scenarios()]
    ts = calibrate(scs)
    assert all(v > 0 for v in ts.values)
    # estimator bias alone is a small share of the noisy thresholds
    assert np.all(ts.as_array() < 0.1 * thresholds.as_array(ts.channels))


def test_below_threshold_never_alarms():
    r = np.full((50, 2), 0.5)
    assert not alarm_stream(r, [1.0, 1.0]).any()


def test_debounce_ignores_short_spikes():
    r = np.zeros((20, 1))
    r[5:9] = 2.0  # four samples
    assert not alarm_stream(r, [1.0], debounce=5).any()
    r[5:10] = -2.0  # five samples, either sign
    a = alarm_stream(r, [1.0], debounce=5)[:, 0]
    assert a[9] and a.sum() == 1
    assert alarm_stream(r, [1.0], debounce=1)[:, 0].sum() == 5


def test_nan_never_alarms():
    r = np.full((10, 1), np.nan)
    assert not alarm_stream(r, [1e-9], debounce=1).any()


def test_streaming_matches_batch():
    rng = np.random.default_rng(0)
    r = rng.normal(size=(200, 3))
    th = np.array([1.0, 1.5, 0.5])
    batch = alarm_stream(r, th, debounce=3)
    ev = AlarmEvaluator(th, debounce=3)
    assert np.array_equal(np.array([ev.push(row) for row in r]), batch)
    ev.reset()
    assert not ev.push(np.zeros(3)).any()


def test_window_pattern():
    alarms = np.zeros((10, 2), dtype=bool)
    alarms[2, 0] = alarms[8, 1] = True
    t = np.arange(10.0)
    assert list(window_pattern(alarms, t)) == [True, True]
    assert list(window_pattern(alarms, t, 3, 9)) == [False, True]
    assert list(window_pattern(alarms, t, 2, 2)) == [True, False]


def test_debounce_must_be_positive():
    with pytest.raises(ConfigError):
        alarm_stream(np.zeros((3, 1)), [1.0], debounce=0)
    with pytest.raises(ConfigError):
        AlarmEvaluator([1.0], debounce=0)
