import numpy as np

from .base import SystemSpec

DT = 1.0
STEPS = 30


def sensor_position(k: int) -> np.ndarray:
    """
    Position of the second sensor, which circles with period 30 steps.
    """
    angle = (k - 1) * np.pi / 15
    return np.array([20 + 20 * np.cos(angle), 20 + 20 * np.sin(angle), 0.0])


def _range_hessian(offset: np.ndarray) -> np.ndarray:
    distance = np.linalg.norm(offset)
    unit = offset / distance
    return (np.eye(3) - np.outer(unit, unit)) / distance


class Tracking3d(SystemSpec):
    """
    Constant velocity target in 3D, ranged from the origin and from a moving sensor.
    State (x1, x2, x3, v1, v2, v3).
    """

    __NAME__ = 'tracking3d'

    def __init__(self):
        super().__init__(
            n_x=6, n_m=2, n_u=0,
            steps=STEPS, dt=DT,
            x0_true=[10, -10, 50, 1, 2, 0],
            P0=np.diag([100, 100, 100, 0.01, 0.01, 0.01]),
            Q=np.diag([0, 0, 0, 1e-6, 1e-6, 1e-6]))
        self._F = np.block([[np.eye(3), DT * np.eye(3)], [np.zeros((3, 3)), np.eye(3)]])

    def f(self, x, u, k):
        return self._F @ x

    def jac_f(self, x, u, k):
        return self._F

    def hess_f(self, x, u, k):
        return np.zeros((6, 6, 6))

    def h(self, x, u, k):
        position = x[:3]
        return np.array([np.linalg.norm(position), np.linalg.norm(position - sensor_position(k))])

    def jac_h(self, x, u, k):
        J = np.zeros((2, 6))
        for row, offset in enumerate((x[:3], x[:3] - sensor_position(k))):
            J[row, :3] = offset / np.linalg.norm(offset)
        return J

    def hess_h(self, x, u, k):
        hessians = np.zeros((2, 6, 6))
        for row, offset in enumerate((x[:3], x[:3] - sensor_position(k))):
            hessians[row, :3, :3] = _range_hessian(offset)
        return hessians


def build_tracking3d() -> Tracking3d:
    return Tracking3d()
