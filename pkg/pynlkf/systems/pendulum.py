import numpy as np

from .base import SystemSpec

DT = 0.01
STEPS = 100
MASS = 1.0
LENGTH = 1.0
GRAVITY = 9.8


class Pendulum(SystemSpec):
    """
    Pendulum on a rope, state (omega, theta), measuring the horizontal rope tension.
    """

    __NAME__ = 'pendulum'

    def __init__(self):
        spread = (np.pi / 18) ** 2
        super().__init__(
            n_x=2, n_m=1, n_u=0,
            steps=STEPS, dt=DT,
            x0_true=[0.0, np.pi / 4],
            P0=np.diag([spread, spread]),
            Q=np.diag([1e-10, 0.0]))

    def f(self, x, u, k):
        omega, theta = x
        return np.array([omega - GRAVITY / LENGTH * np.sin(theta) * DT, theta + omega * DT])

    def jac_f(self, x, u, k):
        _, theta = x
        return np.array([[1.0, -GRAVITY / LENGTH * np.cos(theta) * DT], [DT, 1.0]])

    def hess_f(self, x, u, k):
        _, theta = x
        hessians = np.zeros((2, 2, 2))
        hessians[0, 1, 1] = GRAVITY / LENGTH * np.sin(theta) * DT
        return hessians

    def h(self, x, u, k):
        omega, theta = x
        return np.array([MASS * GRAVITY * np.cos(theta) * np.sin(theta)
                         + MASS * LENGTH * omega ** 2 * np.sin(theta)])

    def jac_h(self, x, u, k):
        omega, theta = x
        return np.array([[2 * MASS * LENGTH * omega * np.sin(theta),
                          MASS * GRAVITY * np.cos(2 * theta) + MASS * LENGTH * omega ** 2 * np.cos(theta)]])

    def hess_h(self, x, u, k):
        omega, theta = x
        cross = 2 * MASS * LENGTH * omega * np.cos(theta)
        return np.array([[[2 * MASS * LENGTH * np.sin(theta), cross],
                          [cross, -2 * MASS * GRAVITY * np.sin(2 * theta)
                           - MASS * LENGTH * omega ** 2 * np.sin(theta)]]])


def build_pendulum() -> Pendulum:
    return Pendulum()
