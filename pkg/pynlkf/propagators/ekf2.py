from typing import Tuple

import numpy as np

from .base import MomentPropagator, Carryover, EMPTY_CARRYOVER
from ..core.belief import StateBelief, MeasurementMoments


def second_order_terms(hessians: np.ndarray, P: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Args:
        hessians: (m, n, n) stack of component Hessians
        P: n x n covariance
    Returns:
        (mean correction 1/2 tr(H_i P), covariance correction 1/2 tr(H_i P H_j P))
    """
    weighted = hessians @ P
    mean_term = 0.5 * np.einsum('iaa->i', weighted)
    cov_term = 0.5 * np.einsum('iab,jba->ij', weighted, weighted)
    return mean_term, cov_term


def ekf2_predict(model, belief: StateBelief, k: int) -> StateBelief:
    x = belief.mean
    F = model.transition_jacobian(x, k)
    mean_term, cov_term = second_order_terms(model.transition_hessians(x, k), belief.cov)

    mean = model.transition(x, k) + mean_term
    cov = F @ belief.cov @ F.T + cov_term + model.process_cov(x, k)
    return StateBelief(mean, cov)


def ekf2_moments(model, point, P, R, k: int) -> MeasurementMoments:
    point = np.asarray(point, dtype=float)
    H = model.measurement_jacobian(point, k)
    mean_term, cov_term = second_order_terms(model.measurement_hessians(point, k), P)

    P_xy = P @ H.T
    return MeasurementMoments.from_parts(model.measure(point, k) + mean_term, H @ P_xy + cov_term, P_xy, R)


class Ekf2Propagator(MomentPropagator):
    __NAME__ = 'ekf2'

    def predict(self, model, belief: StateBelief, k: int) -> StateBelief:
        return ekf2_predict(model, belief, k)

    def measurement_moments(self, model, point, P, R, k: int) -> Tuple[MeasurementMoments, Carryover]:
        return ekf2_moments(model, point, P, R, k), EMPTY_CARRYOVER
