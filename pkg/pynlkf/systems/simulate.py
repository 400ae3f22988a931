import numpy as np

from .base import SystemSpec, TruthTrajectory
from ..common.linalg import psd_sqrt
from ..errors import NonFiniteState
from ..filter_types import NoiseChannel


def simulate_truth(system: SystemSpec, bank, sigma: float) -> TruthTrajectory:
    """
    Ground truth states and measurements for steps 1..steps.

    Process noise is Q^(1/2) times the bank's unit draws, measurement noise is sigma
    times the bank's unit draws. Systems with a noisy input channel apply the noisy
    input u_k + n_k both in the measurement of step k and in the transition out of it.

    Args:
        system: the system to simulate
        bank: NoiseBank of one run
        sigma: measurement noise standard deviation
    Returns:
        (TruthTrajectory) states, measurements and applied inputs, one row per step
    Raises:
        NonFiniteState if the trajectory leaves the finite range
    """
    channels = system.noise_channels
    steps = system.steps
    process_root = psd_sqrt(system.Q)

    def applied_input(k: int, nominal: np.ndarray) -> np.ndarray:
        if NoiseChannel.INPUT in channels and system.n_u:
            return nominal + system.input_noise_std * bank.input_noise[k]
        return nominal

    states = np.zeros((steps, system.n_x))
    measurements = np.zeros((steps, system.n_m))
    inputs = np.zeros((steps, system.n_u))

    x = system.x0_true
    for k in range(1, steps + 1):
        x = system.transition(x, k, applied_input(k - 1, system.step_input(k)))
        if NoiseChannel.PROCESS in channels:
            x = x + process_root @ bank.process_noise[k - 1]

        u = applied_input(k, system.input(k))
        z = system.measure(x, k, u)
        if NoiseChannel.MEASUREMENT in channels:
            z = z + sigma * bank.measurement_noise_unit[k - 1]

        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(z))):
            raise NonFiniteState(f"{system.name} truth left the finite range at step {k}")

        states[k - 1] = x
        measurements[k - 1] = z
        inputs[k - 1] = u

    return TruthTrajectory(states, measurements, inputs)
