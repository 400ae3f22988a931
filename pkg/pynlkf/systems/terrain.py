import numpy as np

from .base import SystemSpec

DT = 1.0
STEPS = 100
SPEED = np.array([0.5, 0.0])
# horizontal scale of the terrain in km
SCALE = 40.0


class Terrain(SystemSpec):
    """
    Plane flying at constant speed, measuring terrain elevation sin(|x| / 40).
    Distances in km.
    """

    __NAME__ = 'terrain'

    def __init__(self):
        super().__init__(
            n_x=2, n_m=1, n_u=0,
            steps=STEPS, dt=DT,
            x0_true=[10, 10],
            P0=np.diag([1.0, 1.0]),
            # 0.25 m^2
            Q=np.diag([2.5e-7, 2.5e-7]))

    def f(self, x, u, k):
        return x + SPEED * DT

    def jac_f(self, x, u, k):
        return np.eye(2)

    def hess_f(self, x, u, k):
        return np.zeros((2, 2, 2))

    def h(self, x, u, k):
        return np.array([np.sin(np.linalg.norm(x / SCALE))])

    def jac_h(self, x, u, k):
        r = np.linalg.norm(x / SCALE)
        if r == 0:
            return np.zeros((1, 2))
        return (np.cos(r) * x / (SCALE ** 2 * r)).reshape(1, 2)

    def hess_h(self, x, u, k):
        r = np.linalg.norm(x / SCALE)
        if r == 0:
            return np.zeros((1, 2, 2))

        grad_r = x / (SCALE ** 2 * r)
        hess_r = np.eye(2) / (SCALE ** 2 * r) - np.outer(x, x) / (SCALE ** 4 * r ** 3)
        return (np.cos(r) * hess_r - np.sin(r) * np.outer(grad_r, grad_r)).reshape(1, 2, 2)


def build_terrain() -> Terrain:
    return Terrain()
