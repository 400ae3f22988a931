from abc import abstractmethod
from collections import namedtuple
from typing import Tuple

import numpy as np

from ..core.belief import StateBelief, MeasurementMoments
from ..util import Named

# step-local payload handed from the update to the recalibration of one step
# points: sigma set used for the update, y_hat: its predicted measurement,
# offsets: point offsets from the linearization point
Carryover = namedtuple('Carryover', 'points,y_hat,offsets', defaults=(None, None, None))
EMPTY_CARRYOVER = Carryover()


class MomentPropagator(Named):
    """
    Approximates the Gaussian moments that a filter step needs: the predicted state
    belief and the measurement moments about an arbitrary linearization point.
    """

    iterated = False

    @classmethod
    def from_options(cls, options: dict) -> 'MomentPropagator':
        return cls()

    @abstractmethod
    def predict(self, model, belief: StateBelief, k: int) -> StateBelief:
        pass

    @abstractmethod
    def measurement_moments(self, model, point, P, R, k: int) -> Tuple[MeasurementMoments, Carryover]:
        pass

    def recalibrate_moments(self, model, point, P, carryover: Carryover, K, residual, R, k: int) -> MeasurementMoments:
        """
        Measurement moments at the updated state. The default re-approximates at
        point with the predicted covariance and ignores the carryover.
        """
        moments, _ = self.measurement_moments(model, point, P, R, k)
        return moments


def propagate_points(fn, points: np.ndarray) -> np.ndarray:
    return np.array([np.atleast_1d(fn(p)) for p in points], dtype=float)
