import numpy as np

from .base import SystemSpec

DT = 1.0
STEPS = 100
# white acceleration intensity
ACCELERATION_PSD = 1e-2


class ConstantVelocity(SystemSpec):
    """
    1D constant velocity motion with a direct position measurement, state (p, v).
    Every filter reduces to the linear Kalman filter on it.
    """

    __NAME__ = 'linear_cv'

    def __init__(self, steps: int = STEPS):
        super().__init__(
            n_x=2, n_m=1, n_u=0,
            steps=steps, dt=DT,
            x0_true=[0.0, 1.0],
            P0=np.diag([1.0, 0.1]),
            Q=ACCELERATION_PSD * np.array([[DT ** 3 / 3, DT ** 2 / 2], [DT ** 2 / 2, DT]]))
        self._F = np.array([[1.0, DT], [0.0, 1.0]])
        self._H = np.array([[1.0, 0.0]])

    @property
    def F(self) -> np.ndarray:
        return self._F

    @property
    def H(self) -> np.ndarray:
        return self._H

    def f(self, x, u, k):
        return self._F @ x

    def jac_f(self, x, u, k):
        return self._F

    def hess_f(self, x, u, k):
        return np.zeros((2, 2, 2))

    def h(self, x, u, k):
        return self._H @ x

    def jac_h(self, x, u, k):
        return self._H

    def hess_h(self, x, u, k):
        return np.zeros((1, 2, 2))


def build_constant_velocity(steps: int = STEPS) -> ConstantVelocity:
    return ConstantVelocity(steps)
