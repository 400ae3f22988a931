from collections import namedtuple
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from ..core.belief import StateBelief
from ..core.framework import run_step
from ..filter_types import FrameworkMode
from ..propagators.registry import create_propagator, FRAMEWORK_PROPAGATORS
from ..systems.base import FunctionalSystem

CUBIC_OFFSET = 1.5383
PRIOR_MEAN = 0.0
PRIOR_STD = 1.5
SIGMA_Y = 0.01

DemoRow = namedtuple('DemoRow', 'filter,framework,mean,std,backed_out,error')


def cubic(x):
    return x ** 3 / 3 - x ** 2 / 8 - x + CUBIC_OFFSET


def cubic_true_state() -> float:
    """
    The state whose noise free measurement is zero: the real root of the cubic,
    left of the prior mean.
    """
    return brentq(cubic, -3.0, 0.0, xtol=1e-14)


def build_cubic_system(prior_std: float = PRIOR_STD) -> FunctionalSystem:
    """
    Static scalar state observed through the cubic.
    """
    return FunctionalSystem(
        f=lambda x, u, k: x,
        h=lambda x, u, k: cubic(x),
        n_x=1, n_m=1,
        x0_true=[cubic_true_state()],
        P0=[[prior_std ** 2]],
        Q=[[0.0]],
        jac_f=lambda x, u, k: np.eye(1),
        jac_h=lambda x, u, k: np.array([[x[0] ** 2 - x[0] / 4 - 1]]),
        hess_f=lambda x, u, k: np.zeros((1, 1, 1)),
        hess_h=lambda x, u, k: np.array([[[2 * x[0] - 0.25]]]))


def run_cubic_demo(sigma_y: float = SIGMA_Y, prior_mean: float = PRIOR_MEAN, prior_std: float = PRIOR_STD,
                   options: Optional[dict] = None) -> Tuple[float, List[DemoRow]]:
    """
    A single filter step of every propagator under both frameworks (and the iterated
    EKF) for the cubic measurement of a zero valued state.

    Returns:
        (true state, one DemoRow per filter and framework)
    """
    system = build_cubic_system(prior_std)
    truth = float(system.x0_true[0])
    z = np.zeros(1)
    R = np.array([[sigma_y ** 2]])
    belief = StateBelief([prior_mean], [[prior_std ** 2]])

    runs = [(name, mode) for name in FRAMEWORK_PROPAGATORS for mode in FrameworkMode]
    runs.append(('iekf', FrameworkMode.CONVENTIONAL))

    rows = []
    for name, mode in runs:
        record = run_step(system, create_propagator(name, options), mode, belief, 1, z, R)
        mean = float(record.posterior.mean[0])
        rows.append(DemoRow(name, mode.value, mean, float(record.posterior.std()[0]),
                            bool(record.backed_out), mean - truth))
    return truth, rows
