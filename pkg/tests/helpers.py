import numpy as np

from pynlkf.systems.base import FunctionalSystem


def scalar_system(h, jac_h=None, hess_h=None, f=None, jac_f=None, hess_f=None, q=0.0):
    """
    One dimensional system, identity dynamics unless f is given.
    """
    if f is None:
        f = lambda x, u, k: x
        jac_f = lambda x, u, k: np.eye(1)
        hess_f = lambda x, u, k: np.zeros((1, 1, 1))

    return FunctionalSystem(f=f, h=h, n_x=1, n_m=1, x0_true=[0.0], P0=[[1.0]], Q=[[q]],
                            jac_f=jac_f, jac_h=jac_h, hess_f=hess_f, hess_h=hess_h)


def square_system():
    return scalar_system(lambda x, u, k: x ** 2,
                         jac_h=lambda x, u, k: np.array([[2 * x[0]]]),
                         hess_h=lambda x, u, k: np.array([[[2.0]]]))


def identity_system():
    return scalar_system(lambda x, u, k: x,
                         jac_h=lambda x, u, k: np.eye(1),
                         hess_h=lambda x, u, k: np.zeros((1, 1, 1)))


def affine_system(n_x: int = 2):
    """
    Linear dynamics and an affine two channel measurement.
    """
    F = np.eye(n_x) + 0.1 * np.eye(n_x, k=1)
    H = np.vstack([np.arange(1, n_x + 1, dtype=float), np.ones(n_x)])
    offset = np.array([0.5, -1.0])
    return FunctionalSystem(
        f=lambda x, u, k: F @ x,
        h=lambda x, u, k: H @ x + offset,
        n_x=n_x, n_m=2,
        x0_true=np.zeros(n_x), P0=np.eye(n_x), Q=0.01 * np.eye(n_x),
        jac_f=lambda x, u, k: F, jac_h=lambda x, u, k: H,
        hess_f=lambda x, u, k: np.zeros((n_x, n_x, n_x)),
        hess_h=lambda x, u, k: np.zeros((2, n_x, n_x)))
