import numpy as np
import pytest

from pynlkf.errors import OutOfBlendRange
from pynlkf.filter_types import InitialEstimatePolicy, NoiseChannel
from pynlkf.systems.battery import build_battery, current_profile, ocv, ocv_coefficients, A_100, A_80, \
    CURRENT_NOISE_STD, DECAY, R1, R2


@pytest.mark.parametrize('k,current', [(0, 0.0), (15, 0.0), (16, -2.0), (20, -2.0), (75, -2.0), (76, 0.0),
                                       (105, 0.0), (106, 2.0), (165, 2.0), (166, 0.0), (180, 0.0)])
def test_current_profile(k, current):
    assert current_profile(k) == current


def test_ocv_end_points():
    assert ocv(1.0, 1.0) == pytest.approx(4.21, abs=1e-9)
    assert ocv(1.0, 0.8) == pytest.approx(4.21, abs=1e-9)
    assert ocv(0.0, 0.9) == pytest.approx(2.96, abs=1e-12)


def test_ocv_blend():
    np.testing.assert_allclose(ocv_coefficients(1.0), A_100, rtol=1e-12, atol=1e-9)
    np.testing.assert_allclose(ocv_coefficients(0.8), A_80, rtol=1e-12, atol=1e-9)
    np.testing.assert_allclose(ocv_coefficients(0.9), 0.5 * (A_100 + A_80), rtol=1e-12, atol=1e-9)


def test_ocv_warns_outside_blend_range():
    with pytest.warns(OutOfBlendRange):
        ocv(0.5, 0.7)


def test_rc_voltage_after_one_discharge_step():
    battery = build_battery()
    x = battery.transition([0.6, 0.0, 0.9], 20, u=np.array([-2.0]))
    np.testing.assert_allclose(x[1], -7.9681e-4, rtol=1e-4)
    np.testing.assert_allclose(x[1], (1 - DECAY) * R2 * -2.0)
    np.testing.assert_allclose(x[0], 0.6 - 2.0 / (3600 * 0.9))
    assert x[2] == 0.9


def test_terminal_voltage():
    battery = build_battery()
    z = battery.measure([1.0, 0.01, 1.0], 20)
    np.testing.assert_allclose(z, [4.21 + 0.01 + R1 * -2.0], rtol=1e-9)


def test_noise_covariances():
    battery = build_battery()
    x = np.array([0.6, 0.0, 0.9])
    G = battery.input_gain(x)
    np.testing.assert_allclose(battery.process_cov(x, 1), CURRENT_NOISE_STD ** 2 * np.outer(G, G))
    assert battery.process_cov(x, 1)[2, 2] == 0.0
    np.testing.assert_allclose(battery.measurement_cov(0.1), [[0.01 + R1 ** 2 * CURRENT_NOISE_STD ** 2]])


def test_fixed_initial_estimate():
    battery = build_battery()
    assert battery.initial_policy == InitialEstimatePolicy.FIXED
    np.testing.assert_array_equal(battery.initial_estimate([5.0, 5.0, 5.0]), [0.8, 0.0, 1.0])
    assert battery.noise_channels == {NoiseChannel.MEASUREMENT, NoiseChannel.INPUT}
