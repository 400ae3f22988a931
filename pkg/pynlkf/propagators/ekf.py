from typing import Tuple

import numpy as np

from .base import MomentPropagator, Carryover, EMPTY_CARRYOVER
from ..core.belief import StateBelief, MeasurementMoments


def ekf_predict(model, belief: StateBelief, k: int) -> StateBelief:
    x = belief.mean
    F = model.transition_jacobian(x, k)
    mean = model.transition(x, k)
    cov = F @ belief.cov @ F.T + model.process_cov(x, k)
    return StateBelief(mean, cov)


def ekf_moments(model, point, P, R, k: int) -> MeasurementMoments:
    point = np.asarray(point, dtype=float)
    H = model.measurement_jacobian(point, k)
    P_xy = P @ H.T
    return MeasurementMoments.from_parts(model.measure(point, k), H @ P_xy, P_xy, R)


class EkfPropagator(MomentPropagator):
    __NAME__ = 'ekf'

    def predict(self, model, belief: StateBelief, k: int) -> StateBelief:
        return ekf_predict(model, belief, k)

    def measurement_moments(self, model, point, P, R, k: int) -> Tuple[MeasurementMoments, Carryover]:
        return ekf_moments(model, point, P, R, k), EMPTY_CARRYOVER
