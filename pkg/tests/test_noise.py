import numpy as np
import pytest

from pynlkf.harness.experiment import ExperimentSpec
from pynlkf.harness.noise import noise_bank_for_run, make_noise_bank, zero_noise_bank
from pynlkf.systems.registry import build_system


def test_bank_shapes():
    system = build_system('battery')
    bank = noise_bank_for_run(0, system, 0)
    assert bank.initial_state_draw.shape == (3,)
    assert bank.process_noise.shape == (180, 3)
    assert bank.measurement_noise_unit.shape == (180, 1)
    assert bank.input_noise.shape == (181, 1)


def test_bank_is_reproducible():
    system = build_system('tracking3d')
    first = noise_bank_for_run(5, system, 3)
    second = noise_bank_for_run(5, system, 3)
    for a, b in zip(first, second):
        np.testing.assert_array_equal(a, b)


def test_runs_have_distinct_streams():
    system = build_system('tracking3d')
    first = noise_bank_for_run(5, system, 0)
    second = noise_bank_for_run(5, system, 1)
    for a, b in zip(first[:3], second[:3]):
        assert not np.array_equal(a, b)


def test_systems_have_distinct_streams():
    first = noise_bank_for_run(5, build_system('terrain'), 0)
    second = noise_bank_for_run(5, build_system('pendulum'), 0)
    assert not np.array_equal(first.initial_state_draw, second.initial_state_draw)


def test_bank_from_experiment():
    system = build_system('terrain')
    spec = ExperimentSpec('terrain', sigmas=[0.1], runs=2, master_seed=9)
    bank = make_noise_bank(spec, system, 1)
    np.testing.assert_array_equal(bank.process_noise, noise_bank_for_run(9, system, 1).process_noise)
    with pytest.raises(AssertionError):
        make_noise_bank(spec, system, 2)


def test_zero_bank():
    system = build_system('generator')
    bank = zero_noise_bank(system)
    assert not np.any(bank.process_noise)
    assert bank.input_noise.shape == (101, 3)
