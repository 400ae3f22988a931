from collections import namedtuple
from typing import Tuple

import numpy as np

from .base import MomentPropagator, Carryover, propagate_points
from ..common.linalg import robust_cholesky
from ..core.belief import StateBelief, MeasurementMoments
from ..errors import DegenerateScaling

DEFAULT_ALPHA = 1e-3
DEFAULT_BETA = 2.0
DEFAULT_KAPPA = 0.0

UkfWeights = namedtuple('UkfWeights', 'lam,w_mean,w_cov')


def ukf_weights(n_x: int, alpha: float = DEFAULT_ALPHA, beta: float = DEFAULT_BETA,
                kappa: float = DEFAULT_KAPPA) -> UkfWeights:
    """
    Scaled unscented transform weights for 2 n_x + 1 sigma points.

    Args:
        n_x: state dimension
        alpha: spread of the points around the mean
        beta: prior knowledge of the distribution, 2 is optimal for Gaussians
        kappa: secondary scaling parameter
    Returns:
        UkfWeights with lambda, mean weights and covariance weights
    Raises:
        DegenerateScaling if n_x + lambda is not positive
    """
    assert n_x >= 1, 'state dimension must be positive'
    assert alpha != 0, 'alpha must be nonzero'

    lam = alpha ** 2 * (n_x + kappa) - n_x
    spread = n_x + lam
    if not spread > 0:
        raise DegenerateScaling(f"n_x + lambda = {spread} for n_x={n_x}, alpha={alpha}, kappa={kappa}")

    w_mean = np.full(2 * n_x + 1, 1.0 / (2 * spread))
    # same value as lambda / (n_x + lambda), written so the weights sum to one
    w_mean[0] = 1.0 - 2 * n_x * w_mean[1]
    w_cov = w_mean.copy()
    w_cov[0] += 1 - alpha ** 2 + beta
    return UkfWeights(lam, w_mean, w_cov)


def sigma_points(point, P, lam: float) -> np.ndarray:
    """
    Center followed by point + c L_i and point - c L_i, with c = sqrt(n + lambda).
    """
    point = np.asarray(point, dtype=float)
    offsets = np.sqrt(point.size + lam) * robust_cholesky(P).T
    return np.vstack([point, point + offsets, point - offsets])


def weighted_mean(values: np.ndarray, weights: UkfWeights) -> np.ndarray:
    # the weights sum to one, so the center weight is folded into the differences
    return values[0] + weights.w_mean[1:] @ (values[1:] - values[0])


def _moments_from_points(offsets, values, y_hat, weights: UkfWeights, R) -> MeasurementMoments:
    dy = values - y_hat
    dx = offsets
    P_y = (weights.w_cov * dy.T) @ dy
    P_xy = (weights.w_cov * dx.T) @ dy
    return MeasurementMoments.from_parts(y_hat, P_y, P_xy, R)


def ukf_predict(model, belief: StateBelief, k: int, weights: UkfWeights) -> StateBelief:
    points = sigma_points(belief.mean, belief.cov, weights.lam)
    propagated = propagate_points(lambda p: model.transition(p, k), points)

    mean = weighted_mean(propagated, weights)
    dx = propagated - mean
    cov = (weights.w_cov * dx.T) @ dx + model.process_cov(belief.mean, k)
    return StateBelief(mean, cov)


def ukf_moments(model, point, P, R, k: int, weights: UkfWeights) -> Tuple[MeasurementMoments, Carryover]:
    point = np.asarray(point, dtype=float)
    points = sigma_points(point, P, weights.lam)
    values = propagate_points(lambda p: model.measure(p, k), points)

    y_hat = weighted_mean(values, weights)
    offsets = points - point
    moments = _moments_from_points(offsets, values, y_hat, weights, R)
    return moments, Carryover(points=points, y_hat=y_hat, offsets=offsets)


def ukf_recalibrate(model, carryover: Carryover, K, residual, weights: UkfWeights, x_upd, R, k: int) -> MeasurementMoments:
    """
    Shifts the update-step sigma set by the state correction K residual and
    recomputes the measurement moments about the updated mean x_upd, without a new
    factorization. The shift moves the center onto x_upd, so the offsets from it
    are those of the update step.
    """
    points = carryover.points + np.asarray(K) @ np.asarray(residual)
    values = propagate_points(lambda p: model.measure(p, k), points)

    y_hat = weighted_mean(values, weights)
    return _moments_from_points(carryover.offsets, values, y_hat, weights, R)


class UkfPropagator(MomentPropagator):
    __NAME__ = 'ukf'

    def __init__(self, alpha: float = DEFAULT_ALPHA, beta: float = DEFAULT_BETA, kappa: float = DEFAULT_KAPPA):
        self._alpha = alpha
        self._beta = beta
        self._kappa = kappa

    @classmethod
    def from_options(cls, options: dict) -> 'UkfPropagator':
        return cls(options.get('alpha', DEFAULT_ALPHA),
                   options.get('beta', DEFAULT_BETA),
                   options.get('kappa', DEFAULT_KAPPA))

    @property
    def alpha(self) -> float:
        return self._alpha

    @property
    def beta(self) -> float:
        return self._beta

    @property
    def kappa(self) -> float:
        return self._kappa

    def weights(self, n_x: int) -> UkfWeights:
        return ukf_weights(n_x, self._alpha, self._beta, self._kappa)

    def predict(self, model, belief: StateBelief, k: int) -> StateBelief:
        return ukf_predict(model, belief, k, self.weights(belief.dim))

    def measurement_moments(self, model, point, P, R, k: int) -> Tuple[MeasurementMoments, Carryover]:
        return ukf_moments(model, point, P, R, k, self.weights(np.size(point)))

    def recalibrate_moments(self, model, point, P, carryover: Carryover, K, residual, R, k: int) -> MeasurementMoments:
        return ukf_recalibrate(model, carryover, K, residual, self.weights(np.size(point)), point, R, k)
