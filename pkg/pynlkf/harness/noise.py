from collections import namedtuple

import numpy as np

from .random import CounterStream
from ..filter_types import NoiseChannel

# all draws are unit variance; the consumer applies P0, Q, sigma and the input noise scale
# input_noise has steps + 1 rows, one per input sample k = 0 .. steps
NoiseBank = namedtuple('NoiseBank', 'initial_state_draw,process_noise,measurement_noise_unit,input_noise')


def _draw(master_seed: int, system_id: str, run_index: int, channel: NoiseChannel, shape) -> np.ndarray:
    stream = CounterStream.for_coordinates(master_seed, system_id, run_index, channel.value)
    return stream.normals(int(np.prod(shape))).reshape(shape)


def noise_bank_for_run(master_seed: int, system, run_index: int) -> NoiseBank:
    """
    Noise realizations of one run. Every channel has its own stream so a bank does
    not depend on the shapes of the other channels.
    """
    system_id = system.name
    return NoiseBank(
        initial_state_draw=_draw(master_seed, system_id, run_index, NoiseChannel.INIT, (system.n_x,)),
        process_noise=_draw(master_seed, system_id, run_index, NoiseChannel.PROCESS, (system.steps, system.n_x)),
        measurement_noise_unit=_draw(master_seed, system_id, run_index, NoiseChannel.MEASUREMENT,
                                     (system.steps, system.n_m)),
        input_noise=_draw(master_seed, system_id, run_index, NoiseChannel.INPUT, (system.steps + 1, system.n_u)))


def make_noise_bank(spec, system, run_index: int) -> NoiseBank:
    assert 0 <= run_index < spec.runs, 'run index %d outside %d runs' % (run_index, spec.runs)
    return noise_bank_for_run(spec.master_seed, system, run_index)


def zero_noise_bank(system) -> NoiseBank:
    return NoiseBank(
        initial_state_draw=np.zeros(system.n_x),
        process_noise=np.zeros((system.steps, system.n_x)),
        measurement_noise_unit=np.zeros((system.steps, system.n_m)),
        input_noise=np.zeros((system.steps + 1, system.n_u)))
