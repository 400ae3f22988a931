import warnings

import numpy as np
import pytest

from pynlkf.common.derivatives import numerical_jacobian
from pynlkf.errors import OutOfBlendRange, UnknownIdentifier
from pynlkf.filter_types import InitialEstimatePolicy
from pynlkf.systems import generator
from pynlkf.systems.registry import build_system, system_ids, BENCHMARK_SYSTEMS
from pynlkf.systems.tracking3d import sensor_position

ALL_SYSTEMS = BENCHMARK_SYSTEMS + ('linear_cv',)


def _states(system, count: int, seed: int):
    rng = np.random.default_rng(seed)
    L = np.linalg.cholesky(system.P0)
    return [system.x0_true + L @ np.clip(rng.standard_normal(system.n_x), -3, 3) for _ in range(count)]


def _assert_close(analytic, numeric):
    scale = max(1.0, float(np.max(np.abs(analytic))))
    np.testing.assert_allclose(analytic, numeric, rtol=1e-5, atol=1e-7 * scale)


@pytest.fixture(autouse=True)
def _quiet_blend_range():
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', OutOfBlendRange)
        yield


@pytest.mark.parametrize('name', ALL_SYSTEMS)
def test_dimensions(name):
    system = build_system(name)
    assert system.name == name
    assert system.x0_true.shape == (system.n_x,)
    assert system.P0.shape == (system.n_x, system.n_x)
    assert system.transition(system.x0_true, 1).shape == (system.n_x,)
    assert system.measure(system.x0_true, 1).shape == (system.n_m,)
    assert system.measurement_cov(0.1).shape == (system.n_m, system.n_m)


@pytest.mark.parametrize('name', ALL_SYSTEMS)
def test_measurement_derivatives_match_finite_differences(name):
    system = build_system(name)
    for k, x in enumerate(_states(system, 100, seed=11), start=1):
        u = system.input(k)
        numeric = numerical_jacobian(lambda v: system.h(v, u, k), x)
        _assert_close(system.measurement_jacobian(x, k), numeric)

        numeric = np.stack([numerical_jacobian(lambda v: system.jac_h(v, u, k)[i], x) for i in range(system.n_m)])
        _assert_close(system.measurement_hessians(x, k), numeric)


@pytest.mark.parametrize('name', ALL_SYSTEMS)
def test_transition_derivatives_match_finite_differences(name):
    system = build_system(name)
    for k, x in enumerate(_states(system, 100, seed=12), start=1):
        u = system.step_input(k)
        numeric = numerical_jacobian(lambda v: system.f(v, u, k), x)
        _assert_close(system.transition_jacobian(x, k), numeric)

        numeric = np.stack([numerical_jacobian(lambda v: system.jac_f(v, u, k)[i], x) for i in range(system.n_x)])
        _assert_close(system.transition_hessians(x, k), numeric)


def test_tracking3d():
    system = build_system('tracking3d')
    np.testing.assert_allclose(sensor_position(1), [40.0, 20.0, 0.0])
    np.testing.assert_allclose(sensor_position(16), [0.0, 20.0, 0.0], atol=1e-12)
    np.testing.assert_allclose(system.measure(system.x0_true, 1), [np.sqrt(2700.0), np.sqrt(4300.0)])
    np.testing.assert_allclose(system.transition(system.x0_true, 1), [11, -8, 50, 1, 2, 0])
    assert system.steps == 30


def test_terrain():
    system = build_system('terrain')
    np.testing.assert_allclose(system.measure([10.0, 10.0], 1), [np.sin(np.sqrt(0.125))])
    np.testing.assert_allclose(system.measure([10.0, 10.0], 1), [0.34688], rtol=1e-4)
    np.testing.assert_allclose(system.transition([10.0, 10.0], 1), [10.5, 10.0])
    np.testing.assert_array_equal(system.measurement_jacobian([0.0, 0.0], 1), np.zeros((1, 2)))


def test_generator():
    system = build_system('generator')
    x0 = system.x0_true
    u = system.input(1)
    expected = u[2] * x0[2] * np.sin(x0[0]) / generator.X_D + generator.SALIENCY * u[2] ** 2 * np.sin(2 * x0[0])
    np.testing.assert_allclose(system.measure(x0, 1), [expected])
    np.testing.assert_allclose(system.measure(x0, 1), [0.66369], rtol=1e-4)
    np.testing.assert_allclose(system.input(10), [0.8, 2.112, 1.002])
    np.testing.assert_array_equal(system.step_input(10), system.input(10))
    assert system.dt == 1e-4


def test_pendulum():
    system = build_system('pendulum')
    np.testing.assert_allclose(system.measure(system.x0_true, 1), [4.9])
    omega, theta = system.transition(system.x0_true, 1)
    np.testing.assert_allclose(omega, -9.8 * np.sin(np.pi / 4) * 0.01)
    np.testing.assert_allclose(omega, -0.069296, rtol=1e-5)
    np.testing.assert_allclose(theta, np.pi / 4)


def test_linear_cv():
    system = build_system('linear_cv')
    np.testing.assert_allclose(system.transition([1.0, 2.0], 1), [3.0, 2.0])
    np.testing.assert_allclose(system.measure([1.0, 2.0], 1), [1.0])
    assert system.n_u == 0


def test_default_initial_estimate_policy():
    system = build_system('terrain')
    assert system.initial_policy == InitialEstimatePolicy.SAMPLED_FROM_P0
    np.testing.assert_allclose(system.initial_estimate([1.0, -2.0]), [11.0, 8.0])


def test_registry():
    assert set(BENCHMARK_SYSTEMS) <= set(system_ids())
    with pytest.raises(UnknownIdentifier) as e:
        build_system('rocket')
    assert 'tracking3d' in str(e.value)
