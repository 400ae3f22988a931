import logging
import time
import warnings
from collections import namedtuple
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Dict, Optional, Tuple

import numpy as np

from .experiment import ExperimentSpec
from .noise import NoiseBank, make_noise_bank
from .stats import ConfigStats, SweepResult
from ..core.belief import StateBelief
from ..core.framework import run_step
from ..errors import FilterError, NonFiniteEstimate, NonFiniteState, OutOfBlendRange
from ..filter_types import FrameworkMode
from ..propagators.registry import create_propagator
from ..systems.base import SystemSpec, TruthTrajectory
from ..systems.registry import build_system
from ..systems.simulate import simulate_truth

logger = logging.getLogger('pynlkf.harness.runner')

RunRecord = namedtuple('RunRecord',
                       'diverged,final_error,final_cov_diag,squared_error_by_step,backouts,guard_count,'
                       'mean_step_time_ns,steps_completed')


def _diverged_before_start(system: SystemSpec) -> RunRecord:
    return RunRecord(True, None, None, np.full((system.steps, system.n_x), np.nan), 0, 0, 0.0, 0)


def run_filter_once(system: SystemSpec, propagator, mode: FrameworkMode, bank: NoiseBank, sigma: float,
                    truth: Optional[TruthTrajectory] = None) -> RunRecord:
    """
    Filters one truth trajectory and records the final error, the final covariance
    diagonal, the squared error after every step and the mean wall clock step time.
    A filter failure ends the run and marks it diverged, as does a truth trajectory
    that leaves the finite range.
    """
    if truth is None:
        try:
            truth = simulate_truth(system, bank, sigma)
        except NonFiniteState as e:
            logger.debug('[Run] %s truth diverged: %s', system.name, e)
            return _diverged_before_start(system)

    R = system.measurement_cov(sigma)
    belief = StateBelief(system.initial_estimate(bank.initial_state_draw), system.P0)
    squared_errors = np.full((system.steps, system.n_x), np.nan)
    backouts = 0
    guards = 0
    elapsed = 0
    completed = 0

    try:
        with np.errstate(all='ignore'), warnings.catch_warnings():
            warnings.simplefilter('ignore', OutOfBlendRange)
            for index in range(system.steps):
                k = index + 1
                start = time.perf_counter_ns()
                record = run_step(system, propagator, mode, belief, k, truth.measurements[index], R)
                elapsed += time.perf_counter_ns() - start

                belief = record.posterior
                if not belief.is_finite():
                    raise NonFiniteEstimate(f"non-finite posterior at step {k}")

                squared_errors[index] = (belief.mean - truth.states[index]) ** 2
                backouts += int(record.backed_out)
                guards += int(record.guard_fired)
                completed += 1
    except (FilterError, np.linalg.LinAlgError, FloatingPointError) as e:
        logger.debug('[Run] %s-%s diverged at step %d: %s', propagator.name, mode.value, completed + 1, e)
        return RunRecord(True, None, None, squared_errors, backouts, guards,
                         elapsed / max(completed, 1), completed)

    final_error = belief.mean - truth.states[-1]
    return RunRecord(False, final_error, np.diagonal(belief.cov).copy(), squared_errors, backouts, guards,
                     elapsed / system.steps, completed)


def _run_index(spec: ExperimentSpec, run_index: int) -> Tuple[int, Dict[Tuple[int, int], RunRecord]]:
    system = build_system(spec.system_id)
    bank = make_noise_bank(spec, system, run_index)
    propagators = {c.propagator: create_propagator(c.propagator, spec.propagator_options) for c in spec.filters}

    records = {}
    for sigma_index, sigma in enumerate(spec.sigmas):
        try:
            truth = simulate_truth(system, bank, sigma)
        except NonFiniteState as e:
            logger.debug('[Run] run %d truth diverged at sigma=%g: %s', run_index, sigma, e)
            for config_index in range(len(spec.filters)):
                records[(config_index, sigma_index)] = _diverged_before_start(system)
            continue

        for config_index, config in enumerate(spec.filters):
            records[(config_index, sigma_index)] = run_filter_once(
                system, propagators[config.propagator], config.mode, bank, sigma, truth)
    return run_index, records


class _Accumulator(object):

    def __init__(self, runs: int, steps: int, n_x: int):
        self.final_errors = np.full((runs, n_x), np.nan)
        self.squared_final = np.zeros(n_x)
        self.cov_diag = np.zeros(n_x)
        self.squared_by_step = np.zeros((steps, n_x))
        self.step_time = 0.0
        self.backouts = 0
        self.guards = 0
        self.completed = 0
        self.diverged = 0
        self.steps = steps

    def add(self, run_index: int, record: RunRecord):
        if record.diverged:
            self.diverged += 1
            return

        self.final_errors[run_index] = record.final_error
        self.squared_final += record.final_error ** 2
        self.cov_diag += record.final_cov_diag
        self.squared_by_step += record.squared_error_by_step
        self.step_time += record.mean_step_time_ns
        self.backouts += record.backouts
        self.guards += record.guard_count
        self.completed += 1

    def stats(self, runs: int) -> ConfigStats:
        n = self.completed
        if n == 0:
            nan = np.full_like(self.squared_final, np.nan)
            return ConfigStats(nan, nan, np.full_like(self.squared_by_step, np.nan), np.nan, np.nan,
                               self.diverged, 0, runs, np.nan)

        return ConfigStats(
            rmse_final=np.sqrt(self.squared_final / n),
            estimated_rmse=np.sqrt(np.clip(self.cov_diag / n, 0.0, None)),
            rmse_by_iteration=np.sqrt(self.squared_by_step / n),
            mean_step_time_ns=self.step_time / n,
            backout_rate=self.backouts / (n * self.steps),
            divergence_count=self.diverged,
            completed=n,
            runs=runs,
            iekf_guard_rate=self.guards / (n * self.steps))


def run_sweep(spec: ExperimentSpec) -> SweepResult:
    """
    Runs every filter configuration at every sigma over spec.runs shared noise banks.

    Runs are distributed over spec.parallel_workers processes. Results are folded in
    run index order, so everything except the timings is independent of the worker
    count.
    """
    system = build_system(spec.system_id)
    accumulators = {(c, s): _Accumulator(spec.runs, system.steps, system.n_x)
                    for c in range(len(spec.filters)) for s in range(len(spec.sigmas))}

    logger.info('[Sweep] %s: %d filters x %d sigmas x %d runs on %d worker(s)',
                spec.system_id, len(spec.filters), len(spec.sigmas), spec.runs, spec.parallel_workers)

    progress_every = max(1, spec.runs // 10)

    def fold(run_index: int, records: Dict[Tuple[int, int], RunRecord]):
        for key, record in records.items():
            accumulators[key].add(run_index, record)
        if (run_index + 1) % progress_every == 0:
            logger.info('[Sweep] %s: %d/%d runs', spec.system_id, run_index + 1, spec.runs)

    if spec.parallel_workers == 1:
        for run_index in range(spec.runs):
            fold(*_run_index(spec, run_index))
    else:
        pending = {}
        next_index = 0
        with ProcessPoolExecutor(max_workers=spec.parallel_workers) as executor:
            futures = [executor.submit(_run_index, spec, i) for i in range(spec.runs)]
            for future in as_completed(futures):
                run_index, records = future.result()
                pending[run_index] = records
                while next_index in pending:
                    fold(next_index, pending.pop(next_index))
                    next_index += 1

    stats = {}
    final_errors = {}
    for (config_index, sigma_index), accumulator in accumulators.items():
        key = (spec.filters[config_index], spec.sigmas[sigma_index])
        stats[key] = accumulator.stats(spec.runs)
        final_errors[key] = accumulator.final_errors
        if accumulator.diverged:
            logger.warning('[Sweep] %s %s-%s sigma=%g: %d of %d runs diverged', spec.system_id,
                           key[0].propagator, key[0].mode.value, key[1], accumulator.diverged, spec.runs)

    return SweepResult(spec.system_id, spec.master_seed, spec.runs, spec.sigmas, spec.filters, stats, final_errors)
