import warnings

import numpy as np

from .base import SystemSpec
from ..errors import OutOfBlendRange
from ..filter_types import InitialEstimatePolicy, NoiseChannel

DT = 1.0
STEPS = 180

R1 = 0.01
R2 = 0.05
# 1 / (R2 C1)
INV_TIME_CONSTANT = 0.008
# initial maximum capacity in Ah
CAPACITY = 1.0
# standard deviation of the current sensor in A
CURRENT_NOISE_STD = 1e-3

# OCV polynomial coefficients in SOC, highest power first, for SOH 100% and 80%
A_100 = np.array([1390.38, -6961.31, 14760.31, -17230.92, 12055.71, -5162.75, 1330.60, -196.37, 15.60, 2.96])
A_80 = np.array([813.94, -4229.96, 9345.49, -11415.38, 8396.15, -3801.07, 1043.09, -165.29, 14.28, 2.96])

SOH_RANGE = (0.8, 1.0)

DECAY = np.exp(-DT * INV_TIME_CONSTANT)


def current_profile(k: int) -> float:
    """
    Three level square wave: discharge, rest, charge, rest.
    """
    if 15 < k <= 75:
        return -2.0
    if 105 < k <= 165:
        return 2.0
    return 0.0


def _blend_weights(soh: float):
    return (soh - SOH_RANGE[0]) / 0.2, (SOH_RANGE[1] - soh) / 0.2


def ocv_coefficients(soh: float) -> np.ndarray:
    if not SOH_RANGE[0] <= soh <= SOH_RANGE[1]:
        warnings.warn(OutOfBlendRange('SOH %.4f outside [%.1f, %.1f], extrapolating OCV' % (soh, *SOH_RANGE)),
                      stacklevel=3)

    w_100, w_80 = _blend_weights(soh)
    return w_100 * A_100 + w_80 * A_80


def ocv(soc: float, soh: float) -> float:
    """
    Open circuit voltage, a degree 9 polynomial in SOC whose coefficients are blended
    linearly in SOH between the 100% and 80% sets.

    Args:
        soc (float): state of charge fraction
        soh (float): state of health fraction, nominally within [0.8, 1.0]
    Returns:
        (float) volts
    """
    return float(np.polyval(ocv_coefficients(soh), soc))


def ocv_gradient(soc: float, soh: float) -> np.ndarray:
    coefficients = ocv_coefficients(soh)
    return np.array([np.polyval(np.polyder(coefficients), soc),
                     (np.polyval(A_100, soc) - np.polyval(A_80, soc)) / 0.2])


def ocv_hessian(soc: float, soh: float) -> np.ndarray:
    coefficients = ocv_coefficients(soh)
    cross = (np.polyval(np.polyder(A_100), soc) - np.polyval(np.polyder(A_80), soc)) / 0.2
    return np.array([[np.polyval(np.polyder(coefficients, 2), soc), cross], [cross, 0.0]])


class Battery(SystemSpec):
    """
    Equivalent circuit battery with one RC pair. State (SOC, U_c, SOH), input the
    charging current, measurement the terminal voltage. The only process noise is the
    current sensor noise.
    """

    __NAME__ = 'battery'

    def __init__(self):
        super().__init__(
            n_x=3, n_m=1, n_u=1,
            steps=STEPS, dt=DT,
            x0_true=[0.60, 0.0, 0.90],
            P0=np.diag([0.04, 1e-10, 0.01]),
            Q=np.zeros((3, 3)),
            initial_policy=InitialEstimatePolicy.FIXED,
            x0_estimate=[0.80, 0.0, 1.00],
            noise_channels=frozenset({NoiseChannel.MEASUREMENT, NoiseChannel.INPUT}),
            input_noise_std=CURRENT_NOISE_STD)

    def input(self, k):
        return np.array([current_profile(k)])

    def f(self, x, u, k):
        soc, u_c, soh = x
        current = u[0]
        return np.array([soc + DT * current / (3600 * CAPACITY * soh),
                         u_c * DECAY + (1 - DECAY) * R2 * current,
                         soh])

    def jac_f(self, x, u, k):
        _, _, soh = x
        current = u[0]
        return np.array([[1.0, 0.0, -DT * current / (3600 * CAPACITY * soh ** 2)],
                         [0.0, DECAY, 0.0],
                         [0.0, 0.0, 1.0]])

    def hess_f(self, x, u, k):
        _, _, soh = x
        hessians = np.zeros((3, 3, 3))
        hessians[0, 2, 2] = 2 * DT * u[0] / (3600 * CAPACITY * soh ** 3)
        return hessians

    def input_gain(self, x) -> np.ndarray:
        """
        Partial derivative of f with respect to the current.
        """
        soh = x[2]
        return np.array([DT / (3600 * CAPACITY * soh), (1 - DECAY) * R2, 0.0])

    def process_cov(self, x, k):
        G = self.input_gain(x)
        return CURRENT_NOISE_STD ** 2 * np.outer(G, G)

    def measurement_cov(self, sigma):
        return np.array([[sigma ** 2 + R1 ** 2 * CURRENT_NOISE_STD ** 2]])

    def h(self, x, u, k):
        soc, u_c, soh = x
        return np.array([ocv(soc, soh) + u_c + R1 * u[0]])

    def jac_h(self, x, u, k):
        soc, _, soh = x
        d_soc, d_soh = ocv_gradient(soc, soh)
        return np.array([[d_soc, 1.0, d_soh]])

    def hess_h(self, x, u, k):
        soc, _, soh = x
        block = ocv_hessian(soc, soh)
        hessians = np.zeros((1, 3, 3))
        hessians[0][np.ix_([0, 2], [0, 2])] = block
        return hessians


def build_battery() -> Battery:
    return Battery()
