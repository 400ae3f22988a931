import logging

import numpy as np

from .ekf import EkfPropagator, ekf_moments
from ..core.belief import StateBelief, MeasurementMoments, StepRecord
from ..core.updates import kalman_gain, update_state, conventional_cov_update

logger = logging.getLogger('pynlkf.propagators.iekf')

MAX_ITERATIONS = 1000
RELATIVE_TOLERANCE = 1e-3
# coordinates this close to zero are compared by absolute change
ZERO_GUARD = 1e-12


def relative_change(current: np.ndarray, previous: np.ndarray) -> float:
    change = np.abs(current - previous)
    scale = np.abs(previous)
    nonzero = scale >= ZERO_GUARD
    change[nonzero] = change[nonzero] / scale[nonzero]
    return float(np.max(change)) if change.size else 0.0


def iekf_update(model, prior: StateBelief, z, R, k: int,
                max_iterations: int = MAX_ITERATIONS,
                tolerance: float = RELATIVE_TOLERANCE) -> StepRecord:
    """
    Iterated EKF measurement update with the conventional covariance update.

    Each iteration relinearizes h about the latest iterate x_i:
    y = h(x_i) + H (x_pred - x_i). The loop stops when the largest relative change
    of the iterate falls below tolerance, or withdraws the latest iterate when the
    step length grows (divergence guard).
    """
    z = np.asarray(z, dtype=float).reshape(-1)
    x_pred = prior.mean
    P = prior.cov

    first = ekf_moments(model, x_pred, P, R, k)
    residual = z - first.y_hat
    K = kalman_gain(first.P_xy, first.S)
    S = first.S
    previous = x_pred
    current = update_state(x_pred, K, residual)
    last_step = np.linalg.norm(current - previous)

    iterations = 1
    guard_fired = False
    while iterations < max_iterations:
        if relative_change(current, previous) < tolerance:
            break

        H = model.measurement_jacobian(current, k)
        y_lin = model.measure(current, k) + H @ (x_pred - current)
        P_xy = P @ H.T
        moments = MeasurementMoments.from_parts(y_lin, H @ P_xy, P_xy, R)
        K_next = kalman_gain(moments.P_xy, moments.S)
        candidate = update_state(x_pred, K_next, z - moments.y_hat)
        iterations += 1

        step = np.linalg.norm(candidate - current)
        if step > last_step:
            guard_fired = True
            logger.debug('[IEKF] divergence guard at iteration %d (step %.3e > %.3e)', iterations, step, last_step)
            break

        previous, current = current, candidate
        K, S = K_next, moments.S
        last_step = step

    logger.debug('[IEKF] finished after %d iterations', iterations)
    posterior = StateBelief(current, conventional_cov_update(P, K, S))
    return StepRecord(prior, posterior, K, residual, first,
                      iterations=iterations, guard_fired=guard_fired)


class IteratedEkfPropagator(EkfPropagator):
    """
    EKF prediction with an iterated measurement update. Supports the conventional
    framework only: the relinearized moments are not independent of the gain.
    """

    __NAME__ = 'iekf'
    iterated = True

    def __init__(self, max_iterations: int = MAX_ITERATIONS, tolerance: float = RELATIVE_TOLERANCE):
        self._max_iterations = max_iterations
        self._tolerance = tolerance

    def iterated_update(self, model, prior: StateBelief, z, R, k: int) -> StepRecord:
        return iekf_update(model, prior, z, R, k, self._max_iterations, self._tolerance)
