import math

import numpy as np
import pytest

from pynlkf.core.belief import StateBelief
from pynlkf.errors import DegenerateScaling, UnknownIdentifier
from pynlkf.propagators.ckf import CkfPropagator, cubature_offsets
from pynlkf.propagators.ekf import EkfPropagator
from pynlkf.propagators.ekf2 import Ekf2Propagator, second_order_terms
from pynlkf.propagators.registry import create_propagator, propagator_ids, register_propagator
from pynlkf.propagators.ukf import UkfPropagator, ukf_weights, sigma_points, weighted_mean
from pynlkf.systems.pendulum import DT, GRAVITY, LENGTH, build_pendulum
from pynlkf.systems.terrain import build_terrain
from pynlkf.systems.tracking3d import build_tracking3d
from .helpers import affine_system, identity_system, scalar_system, square_system

R_SQUARE = np.array([[0.01]])


def test_ekf_moments_on_square():
    moments, _ = EkfPropagator().measurement_moments(square_system(), [1.0], np.array([[0.25]]), R_SQUARE, 1)
    np.testing.assert_allclose(moments.y_hat, [1.0])
    np.testing.assert_allclose(moments.P_y, [[1.0]])
    np.testing.assert_allclose(moments.P_xy, [[0.5]])
    np.testing.assert_allclose(moments.S, [[1.01]])


def test_ekf_predict_on_affine_dynamics():
    system = affine_system(2)
    belief = StateBelief([1.0, 2.0], np.eye(2))
    predicted = EkfPropagator().predict(system, belief, 1)
    F = np.array([[1.0, 0.1], [0.0, 1.0]])
    np.testing.assert_allclose(predicted.mean, F @ [1.0, 2.0])
    np.testing.assert_allclose(predicted.cov, F @ F.T + 0.01 * np.eye(2))


def test_ekf2_moments_on_square():
    moments, _ = Ekf2Propagator().measurement_moments(square_system(), [1.0], np.array([[0.25]]), R_SQUARE, 1)
    np.testing.assert_allclose(moments.y_hat, [1.25])
    np.testing.assert_allclose(moments.P_y, [[1.125]])
    np.testing.assert_allclose(moments.P_xy, [[0.5]])


def test_ekf2_reduces_to_ekf_without_curvature():
    system = affine_system(3)
    P = np.diag([1.0, 2.0, 0.5])
    first, _ = EkfPropagator().measurement_moments(system, [0.5, 1.0, -1.0], P, np.eye(2), 1)
    second, _ = Ekf2Propagator().measurement_moments(system, [0.5, 1.0, -1.0], P, np.eye(2), 1)
    np.testing.assert_array_equal(first.y_hat, second.y_hat)
    np.testing.assert_array_equal(first.P_y, second.P_y)


def test_second_order_terms():
    hessians = np.array([[[2.0, 0.0], [0.0, 0.0]], [[0.0, 1.0], [1.0, 0.0]]])
    mean_term, cov_term = second_order_terms(hessians, np.eye(2))
    np.testing.assert_allclose(mean_term, [1.0, 0.0])
    np.testing.assert_allclose(cov_term, [[2.0, 0.0], [0.0, 1.0]])


def test_default_ukf_weights():
    weights = ukf_weights(1)
    np.testing.assert_allclose(weights.w_mean[1:], [500000.0, 500000.0])
    np.testing.assert_allclose(weights.w_mean[0], -999999.0)
    assert math.fsum(weights.w_mean) == 1.0
    np.testing.assert_allclose(weights.w_cov[0] - weights.w_mean[0], 3 - 1e-6)


def test_two_state_ukf_weights():
    weights = ukf_weights(2)
    np.testing.assert_allclose(weights.w_mean[1:], np.full(4, 250000.0))
    assert math.fsum(weights.w_mean) == 1.0


def test_degenerate_ukf_scaling():
    with pytest.raises(DegenerateScaling):
        ukf_weights(2, alpha=1.0, kappa=-2.0)


def test_sigma_points_are_symmetric():
    points = sigma_points(np.array([1.0, -1.0]), np.diag([4.0, 1.0]), 0.0)
    np.testing.assert_allclose(points[0], [1.0, -1.0])
    np.testing.assert_allclose(points[1:3] + points[3:5], 2 * np.array([[1.0, -1.0], [1.0, -1.0]]))
    np.testing.assert_allclose(points[1], [1.0 + 2 * math.sqrt(2), -1.0])


def test_ukf_moments_on_square_with_unit_spread():
    prop = UkfPropagator(alpha=1.0)
    moments, _ = prop.measurement_moments(square_system(), [0.0], np.array([[1.0]]), R_SQUARE, 1)
    np.testing.assert_allclose(moments.y_hat, [1.0])


def test_ukf_matches_ekf_on_affine_system():
    system = affine_system(3)
    P = np.array([[1.0, 0.2, 0.0], [0.2, 2.0, 0.1], [0.0, 0.1, 0.5]])
    point = [0.5, 1.0, -1.0]
    for alpha in (1e-3, 0.5, 1.0):
        ukf, _ = UkfPropagator(alpha=alpha).measurement_moments(system, point, P, np.eye(2), 1)
        ekf, _ = EkfPropagator().measurement_moments(system, point, P, np.eye(2), 1)
        np.testing.assert_allclose(ukf.y_hat, ekf.y_hat, rtol=1e-8, atol=1e-8)
        np.testing.assert_allclose(ukf.P_xy, ekf.P_xy, rtol=1e-8, atol=1e-8)
        np.testing.assert_allclose(ukf.P_y, ekf.P_y, rtol=1e-8, atol=1e-8)


def test_ukf_terrain_covariance_close_to_second_order():
    terrain = build_terrain()
    P = np.eye(2)
    R = np.zeros((1, 1))
    ukf, _ = UkfPropagator().measurement_moments(terrain, [10.0, 10.0], P, R, 1)
    ekf2, _ = Ekf2Propagator().measurement_moments(terrain, [10.0, 10.0], P, R, 1)
    assert abs(ukf.P_y[0, 0] - ekf2.P_y[0, 0]) <= 0.1 * ekf2.P_y[0, 0]


def test_ukf_recalibration_shifts_sigma_points():
    system = identity_system()
    prop = UkfPropagator(alpha=1.0)
    P = np.array([[1.0]])
    moments, carryover = prop.measurement_moments(system, [0.0], P, R_SQUARE, 1)
    recalibrated = prop.recalibrate_moments(system, [0.5], P, carryover, np.array([[0.5]]), np.array([1.0]),
                                            R_SQUARE, 1)
    np.testing.assert_allclose(recalibrated.y_hat, [0.5])
    np.testing.assert_allclose(recalibrated.P_y, moments.P_y)
    np.testing.assert_allclose(recalibrated.P_xy, moments.P_xy)


def test_cubature_offsets():
    offsets = cubature_offsets(np.diag([4.0, 1.0]))
    np.testing.assert_allclose(offsets, math.sqrt(2) * np.array([[2.0, 0.0], [0.0, 1.0], [-2.0, 0.0], [0.0, -1.0]]))


def test_ckf_moments_on_square():
    moments, carryover = CkfPropagator().measurement_moments(square_system(), [0.0], np.array([[1.0]]),
                                                             R_SQUARE, 1)
    np.testing.assert_allclose(moments.y_hat, [1.0])
    np.testing.assert_allclose(moments.P_y, [[0.0]], atol=1e-15)
    np.testing.assert_allclose(moments.P_xy, [[0.0]], atol=1e-15)
    assert carryover.offsets.shape == (2, 1)


def test_ckf_recalibration_reuses_offsets():
    system = square_system()
    prop = CkfPropagator()
    P = np.array([[1.0]])
    _, carryover = prop.measurement_moments(system, [0.0], P, R_SQUARE, 1)
    recalibrated = prop.recalibrate_moments(system, [1.0], P, carryover, None, None, R_SQUARE, 1)
    # points 0 and 2
    np.testing.assert_allclose(recalibrated.y_hat, [2.0])
    np.testing.assert_allclose(recalibrated.P_y, [[4.0]])
    np.testing.assert_allclose(recalibrated.P_xy, [[2.0]])


def test_ckf_predict_of_identity_keeps_belief():
    belief = StateBelief([1.5], [[2.0]])
    predicted = CkfPropagator().predict(identity_system(), belief, 1)
    np.testing.assert_allclose(predicted.mean, [1.5])
    np.testing.assert_allclose(predicted.cov, [[2.0]])


def test_registry():
    assert propagator_ids()[:5] == ['ekf', 'ekf2', 'ukf', 'ckf', 'iekf']
    prop = create_propagator('ukf', {'alpha': 0.5, 'beta': 1.0, 'kappa': 1.0})
    assert (prop.alpha, prop.beta, prop.kappa) == (0.5, 1.0, 1.0)
    assert prop.name == 'ukf'


def test_unknown_propagator():
    with pytest.raises(UnknownIdentifier) as e:
        create_propagator('pf')
    assert 'ekf' in str(e.value)


def test_register_conflicting_propagator():
    register_propagator('ekf', EkfPropagator)
    with pytest.raises(ValueError):
        register_propagator('ekf', CkfPropagator)


def _square_dynamics(q: float):
    return scalar_system(lambda x, u, k: x, f=lambda x, u, k: x ** 2,
                         jac_f=lambda x, u, k: np.array([[2 * x[0]]]),
                         hess_f=lambda x, u, k: np.array([[[2.0]]]), q=q)


def test_ekf2_predict_of_square_dynamics():
    predicted = Ekf2Propagator().predict(_square_dynamics(0.1), StateBelief([0.0], [[1.0]]), 1)
    np.testing.assert_allclose(predicted.mean, [1.0])
    np.testing.assert_allclose(predicted.cov, [[2.1]])


def test_ekf2_predict_corrects_pendulum_rate():
    system = build_pendulum()
    belief = StateBelief(system.x0_true, system.P0)
    second = Ekf2Propagator().predict(system, belief, 1)
    first = EkfPropagator().predict(system, belief, 1)

    theta = np.pi / 4
    correction = 0.5 * GRAVITY / LENGTH * DT * np.sin(theta) * system.P0[1, 1]
    np.testing.assert_allclose(second.mean - first.mean, [correction, 0.0], rtol=1e-9, atol=1e-18)


def test_ukf_predict_of_square_dynamics():
    predicted = UkfPropagator(alpha=1.0).predict(_square_dynamics(0.1), StateBelief([0.0], [[1.0]]), 1)
    np.testing.assert_allclose(predicted.mean, [1.0])
    np.testing.assert_allclose(predicted.cov, [[2.1]])


def test_ukf_predict_matches_ekf_on_affine_dynamics():
    system = affine_system(2)
    belief = StateBelief([1.0, 2.0], [[1.0, 0.3], [0.3, 2.0]])
    ukf = UkfPropagator().predict(system, belief, 1)
    ekf = EkfPropagator().predict(system, belief, 1)
    np.testing.assert_allclose(ukf.mean, ekf.mean, rtol=1e-8, atol=1e-8)
    np.testing.assert_allclose(ukf.cov, ekf.cov, rtol=1e-8, atol=1e-8)


def test_ukf_predict_of_identity_keeps_belief():
    belief = StateBelief([1.5], [[2.0]])
    predicted = UkfPropagator(alpha=1.0).predict(identity_system(), belief, 1)
    np.testing.assert_allclose(predicted.mean, [1.5])
    np.testing.assert_allclose(predicted.cov, [[2.0]])


def test_propagators_agree_on_tracking_dynamics():
    system = build_tracking3d()
    belief = StateBelief(system.x0_true, system.P0)
    reference = EkfPropagator().predict(system, belief, 1)
    for prop in (Ekf2Propagator(), UkfPropagator(alpha=1.0), CkfPropagator()):
        predicted = prop.predict(system, belief, 1)
        np.testing.assert_allclose(predicted.mean, reference.mean, rtol=1e-10, atol=1e-10)
        np.testing.assert_allclose(predicted.cov, reference.cov, rtol=1e-10, atol=1e-10)


def test_sampling_predictions_agree_on_pendulum_at_small_spread():
    system = build_pendulum()
    belief = StateBelief(system.x0_true, 1e-6 * np.eye(2))
    ukf = UkfPropagator().predict(system, belief, 1)
    ckf = CkfPropagator().predict(system, belief, 1)
    np.testing.assert_allclose(ukf.mean, ckf.mean, atol=1e-6)
    np.testing.assert_allclose(ckf.mean, system.transition(system.x0_true, 1), atol=1e-6)


@pytest.mark.parametrize('alpha,center', [(1.0, [1.0, -1.0]), (0.5, [3.0, 2.0]), (1e-3, [0.0, 0.0])])
def test_weighted_sigma_points_recover_the_center(alpha, center):
    weights = ukf_weights(2, alpha=alpha)
    points = sigma_points(np.array(center), np.diag([0.04, 0.01]), weights.lam)
    np.testing.assert_allclose(points[1:3] + points[3:5], 2 * np.array([center, center]), atol=1e-12)
    np.testing.assert_allclose(weighted_mean(points, weights), center, atol=1e-12)


def test_cubature_points_recover_the_center():
    center = np.array([3.0, -2.0])
    offsets = cubature_offsets(np.array([[2.0, 0.5], [0.5, 1.0]]))
    np.testing.assert_array_equal(offsets[:2], -offsets[2:])
    np.testing.assert_allclose((center + offsets).mean(axis=0), center, atol=1e-12)


def _square_moment_oracle(samples: int = 10 ** 6):
    """
    Monte Carlo moments of x^2 for x ~ N(1, 0.25) with their standard errors.
    """
    x = 1.0 + 0.5 * np.random.default_rng(20240601).standard_normal(samples)
    y = x ** 2
    dx, dy = x - x.mean(), y - y.mean()
    terms = (y, dy ** 2, dx * dy)
    return [t.mean() for t in terms], [t.std() / np.sqrt(samples) for t in terms]


def test_moments_agree_with_monte_carlo_on_square():
    oracle, stderr = _square_moment_oracle()
    for prop in (Ekf2Propagator(), UkfPropagator(), CkfPropagator()):
        moments, _ = prop.measurement_moments(square_system(), [1.0], np.array([[0.25]]), R_SQUARE, 1)
        values = (moments.y_hat[0], moments.P_y[0, 0], moments.P_xy[0, 0])
        for index in (0, 2):
            assert abs(values[index] - oracle[index]) < 5 * stderr[index], prop.name
        if prop.name != 'ckf':
            assert abs(values[1] - oracle[1]) < 5 * stderr[1], prop.name


def test_ckf_measurement_covariance_misses_fourth_moment():
    # 2n points carry no fourth moment: P_y = 4 mu^2 sigma^2, short of the exact value by 2 sigma^4
    oracle, stderr = _square_moment_oracle()
    moments, _ = CkfPropagator().measurement_moments(square_system(), [1.0], np.array([[0.25]]), R_SQUARE, 1)
    np.testing.assert_allclose(moments.P_y, [[1.0]])
    assert abs((oracle[1] - moments.P_y[0, 0]) - 2 * 0.25 ** 2) < 5 * stderr[1]
