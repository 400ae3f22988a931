from collections import namedtuple

import numpy as np

from ..common.linalg import symmetrize, condition_covariance
from ..errors import DimensionMismatch


class StateBelief(object):
    """
    Gaussian state estimate. The covariance is symmetrized on construction and
    clipped to positive semidefinite when an eigenvalue falls below
    -1e-10 trace.
    """

    def __init__(self, mean, cov):
        self._mean = np.array(mean, dtype=float).reshape(-1)
        self._cov = symmetrize(cov)

        n = self._mean.size
        if self._cov.shape != (n, n):
            raise DimensionMismatch(f"covariance shape {self._cov.shape} does not fit a state of size {n}")
        self._cov = condition_covariance(self._cov)

    @property
    def mean(self) -> np.ndarray:
        return self._mean

    @property
    def cov(self) -> np.ndarray:
        return self._cov

    @property
    def dim(self) -> int:
        return self._mean.size

    def trace(self) -> float:
        return float(np.trace(self._cov))

    def std(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diagonal(self._cov), 0.0, None))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self._mean)) and np.all(np.isfinite(self._cov)))

    def __eq__(self, other):
        if not isinstance(other, StateBelief):
            return NotImplemented
        return np.array_equal(self._mean, other._mean) and np.array_equal(self._cov, other._cov)

    def __repr__(self):
        return f"StateBelief(mean={self._mean}, trace={self.trace():.6e})"


class MeasurementMoments(object):
    """
    Predicted measurement mean, its covariance, the state-measurement cross covariance
    and the innovation covariance S = P_y + R.
    """

    def __init__(self, y_hat, P_y, P_xy, S):
        self._y_hat = np.array(y_hat, dtype=float).reshape(-1)
        self._P_y = symmetrize(P_y)
        self._P_xy = np.atleast_2d(np.asarray(P_xy, dtype=float))
        self._S = symmetrize(S)

        m = self._y_hat.size
        if self._P_y.shape != (m, m) or self._S.shape != (m, m) or self._P_xy.shape[1] != m:
            raise DimensionMismatch(f"inconsistent measurement moments for a measurement of size {m}")

    @classmethod
    def from_parts(cls, y_hat, P_y, P_xy, R) -> 'MeasurementMoments':
        P_y = symmetrize(P_y)
        return cls(y_hat, P_y, P_xy, P_y + symmetrize(R))

    @property
    def y_hat(self) -> np.ndarray:
        return self._y_hat

    @property
    def P_y(self) -> np.ndarray:
        return self._P_y

    @property
    def P_xy(self) -> np.ndarray:
        return self._P_xy

    @property
    def S(self) -> np.ndarray:
        return self._S


StepRecord = namedtuple('StepRecord',
                        'prior,posterior,gain,residual,moments_pred,moments_recal,backed_out,iterations,guard_fired',
                        defaults=(None, False, 1, False))
