from abc import abstractmethod
from collections import namedtuple
from typing import Callable, FrozenSet, Optional

import numpy as np

from ..common.derivatives import numerical_jacobian, numerical_hessians
from ..common.linalg import robust_cholesky, symmetrize
from ..filter_types import InitialEstimatePolicy, NoiseChannel
from ..util import Named

TruthTrajectory = namedtuple('TruthTrajectory', 'states,measurements,inputs')

DEFAULT_NOISE_CHANNELS = frozenset({NoiseChannel.INIT, NoiseChannel.PROCESS, NoiseChannel.MEASUREMENT})


class SystemSpec(Named):
    """
    A discrete time system x_k = f(x_{k-1}, u, k) + w, z_k = h(x_k, u_k, k) + v.

    Subclasses implement f and h and may override the derivative hooks. A hook that
    returns None makes the filter fall back to central finite differences.
    """

    def __init__(self,
                 n_x: int, n_m: int, n_u: int,
                 steps: int, dt: float,
                 x0_true, P0, Q,
                 initial_policy: InitialEstimatePolicy = InitialEstimatePolicy.SAMPLED_FROM_P0,
                 x0_estimate=None,
                 noise_channels: FrozenSet[NoiseChannel] = DEFAULT_NOISE_CHANNELS,
                 input_noise_std: float = 0.0):
        self._n_x = n_x
        self._n_m = n_m
        self._n_u = n_u
        self._steps = steps
        self._dt = dt
        self._x0_true = np.array(x0_true, dtype=float)
        self._P0 = symmetrize(P0)
        self._Q = symmetrize(Q)
        self._initial_policy = initial_policy
        self._x0_estimate = None if x0_estimate is None else np.array(x0_estimate, dtype=float)
        self._noise_channels = frozenset(noise_channels)
        self._input_noise_std = input_noise_std

        assert self._x0_true.shape == (n_x,), 'x0_true does not match n_x'
        assert self._P0.shape == (n_x, n_x), 'P0 does not match n_x'
        assert self._Q.shape == (n_x, n_x), 'Q does not match n_x'
        assert initial_policy != InitialEstimatePolicy.FIXED or self._x0_estimate is not None, \
            'fixed initial policy requires an estimate'

    @property
    def n_x(self) -> int:
        return self._n_x

    @property
    def n_m(self) -> int:
        return self._n_m

    @property
    def n_u(self) -> int:
        return self._n_u

    @property
    def steps(self) -> int:
        return self._steps

    @property
    def dt(self) -> float:
        return self._dt

    @property
    def x0_true(self) -> np.ndarray:
        return self._x0_true.copy()

    @property
    def P0(self) -> np.ndarray:
        return self._P0.copy()

    @property
    def Q(self) -> np.ndarray:
        return self._Q.copy()

    @property
    def initial_policy(self) -> InitialEstimatePolicy:
        return self._initial_policy

    @property
    def noise_channels(self) -> FrozenSet[NoiseChannel]:
        return self._noise_channels

    @property
    def input_noise_std(self) -> float:
        return self._input_noise_std

    @abstractmethod
    def f(self, x: np.ndarray, u: np.ndarray, k: int) -> np.ndarray:
        pass

    @abstractmethod
    def h(self, x: np.ndarray, u: np.ndarray, k: int) -> np.ndarray:
        pass

    def jac_f(self, x: np.ndarray, u: np.ndarray, k: int) -> Optional[np.ndarray]:
        return None

    def jac_h(self, x: np.ndarray, u: np.ndarray, k: int) -> Optional[np.ndarray]:
        return None

    def hess_f(self, x: np.ndarray, u: np.ndarray, k: int) -> Optional[np.ndarray]:
        return None

    def hess_h(self, x: np.ndarray, u: np.ndarray, k: int) -> Optional[np.ndarray]:
        return None

    def input(self, k: int) -> np.ndarray:
        return np.zeros(self._n_u)

    def step_input(self, k: int) -> np.ndarray:
        """
        Input applied while transitioning into step k.
        """
        return self.input(k - 1)

    def transition(self, x, k: int, u=None) -> np.ndarray:
        u = self.step_input(k) if u is None else u
        return np.atleast_1d(np.asarray(self.f(np.asarray(x, dtype=float), u, k), dtype=float))

    def measure(self, x, k: int, u=None) -> np.ndarray:
        u = self.input(k) if u is None else u
        return np.atleast_1d(np.asarray(self.h(np.asarray(x, dtype=float), u, k), dtype=float))

    def transition_jacobian(self, x, k: int) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = self.step_input(k)
        J = self.jac_f(x, u, k)
        if J is None:
            return numerical_jacobian(lambda v: self.f(v, u, k), x)
        return np.atleast_2d(np.asarray(J, dtype=float))

    def measurement_jacobian(self, x, k: int) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = self.input(k)
        J = self.jac_h(x, u, k)
        if J is None:
            return numerical_jacobian(lambda v: self.h(v, u, k), x)
        return np.atleast_2d(np.asarray(J, dtype=float))

    def transition_hessians(self, x, k: int) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = self.step_input(k)
        hessians = self.hess_f(x, u, k)
        if hessians is None:
            analytic = None if self.jac_f(x, u, k) is None else (lambda v: self.jac_f(v, u, k))
            return numerical_hessians(lambda v: self.f(v, u, k), x, analytic)
        return np.asarray(hessians, dtype=float)

    def measurement_hessians(self, x, k: int) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        u = self.input(k)
        hessians = self.hess_h(x, u, k)
        if hessians is None:
            analytic = None if self.jac_h(x, u, k) is None else (lambda v: self.jac_h(v, u, k))
            return numerical_hessians(lambda v: self.h(v, u, k), x, analytic)
        return np.asarray(hessians, dtype=float)

    def process_cov(self, x, k: int) -> np.ndarray:
        return self._Q

    def measurement_cov(self, sigma: float) -> np.ndarray:
        """
        Measurement noise covariance assumed by the filter for noise level sigma.
        """
        return sigma ** 2 * np.eye(self._n_m)

    def initial_estimate(self, unit_draw) -> np.ndarray:
        if self._initial_policy == InitialEstimatePolicy.FIXED:
            return self._x0_estimate.copy()

        L = robust_cholesky(self._P0)
        return self._x0_true + L @ np.asarray(unit_draw, dtype=float)


class FunctionalSystem(SystemSpec):
    """
    A system assembled from plain callables f(x, u, k) and h(x, u, k), for models
    that do not warrant their own class. Derivatives are optional.
    """

    __NAME__ = 'functional'

    def __init__(self,
                 f: Callable, h: Callable,
                 n_x: int, n_m: int,
                 x0_true, P0, Q,
                 steps: int = 1, dt: float = 1.0,
                 jac_f: Optional[Callable] = None, jac_h: Optional[Callable] = None,
                 hess_f: Optional[Callable] = None, hess_h: Optional[Callable] = None,
                 **kwargs):
        super().__init__(n_x, n_m, 0, steps, dt, x0_true, P0, Q, **kwargs)
        self._f = f
        self._h = h
        self._jac_f = jac_f
        self._jac_h = jac_h
        self._hess_f = hess_f
        self._hess_h = hess_h

    def f(self, x, u, k):
        return self._f(x, u, k)

    def h(self, x, u, k):
        return self._h(x, u, k)

    def jac_f(self, x, u, k):
        return None if self._jac_f is None else self._jac_f(x, u, k)

    def jac_h(self, x, u, k):
        return None if self._jac_h is None else self._jac_h(x, u, k)

    def hess_f(self, x, u, k):
        return None if self._hess_f is None else self._hess_f(x, u, k)

    def hess_h(self, x, u, k):
        return None if self._hess_h is None else self._hess_h(x, u, k)
