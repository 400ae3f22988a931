from typing import Tuple

import numpy as np

from .base import MomentPropagator, Carryover, propagate_points
from ..common.linalg import robust_cholesky
from ..core.belief import StateBelief, MeasurementMoments


def cubature_offsets(P) -> np.ndarray:
    """
    The 2n offsets +sqrt(n) L_i and -sqrt(n) L_i, one per row.
    """
    L = robust_cholesky(P)
    scaled = np.sqrt(L.shape[0]) * L.T
    return np.vstack([scaled, -scaled])


def _moments(points, values, center, R) -> MeasurementMoments:
    y_hat = values.mean(axis=0)
    dy = values - y_hat
    dx = points - center
    count = points.shape[0]
    return MeasurementMoments.from_parts(y_hat, dy.T @ dy / count, dx.T @ dy / count, R)


def ckf_predict(model, belief: StateBelief, k: int) -> StateBelief:
    points = belief.mean + cubature_offsets(belief.cov)
    propagated = propagate_points(lambda p: model.transition(p, k), points)

    mean = propagated.mean(axis=0)
    dx = propagated - mean
    cov = dx.T @ dx / points.shape[0] + model.process_cov(belief.mean, k)
    return StateBelief(mean, cov)


def ckf_moments(model, point, P, R, k: int) -> Tuple[MeasurementMoments, Carryover]:
    point = np.asarray(point, dtype=float)
    offsets = cubature_offsets(P)
    points = point + offsets
    values = propagate_points(lambda p: model.measure(p, k), points)

    moments = _moments(points, values, point, R)
    return moments, Carryover(points=points, y_hat=moments.y_hat, offsets=offsets)


def ckf_recalibrate(model, carryover: Carryover, x_upd, R, k: int) -> MeasurementMoments:
    """
    Cubature points about the updated mean, reusing the offsets of the predicted
    covariance factor.
    """
    x_upd = np.asarray(x_upd, dtype=float)
    points = x_upd + carryover.offsets
    values = propagate_points(lambda p: model.measure(p, k), points)
    return _moments(points, values, x_upd, R)


class CkfPropagator(MomentPropagator):
    __NAME__ = 'ckf'

    def predict(self, model, belief: StateBelief, k: int) -> StateBelief:
        return ckf_predict(model, belief, k)

    def measurement_moments(self, model, point, P, R, k: int) -> Tuple[MeasurementMoments, Carryover]:
        return ckf_moments(model, point, P, R, k)

    def recalibrate_moments(self, model, point, P, carryover: Carryover, K, residual, R, k: int) -> MeasurementMoments:
        if carryover.offsets is None:
            return super().recalibrate_moments(model, point, P, carryover, K, residual, R, k)
        return ckf_recalibrate(model, carryover, point, R, k)
