from collections import namedtuple
from typing import Dict, List, Tuple

import numpy as np

from .experiment import FilterConfig
from ..errors import InsufficientSamples
from ..filter_types import FrameworkMode

# per state vectors: rmse_final, estimated_rmse; per step and state: rmse_by_iteration
ConfigStats = namedtuple('ConfigStats',
                         'rmse_final,estimated_rmse,rmse_by_iteration,mean_step_time_ns,backout_rate,'
                         'divergence_count,completed,runs,iekf_guard_rate')

MIN_CONSISTENCY_SAMPLES = 30
TIMING_REFERENCE = FilterConfig('ekf', FrameworkMode.CONVENTIONAL)


class SweepResult(object):

    def __init__(self,
                 system_id: str,
                 seed: int,
                 runs: int,
                 sigmas: List[float],
                 filters: List[FilterConfig],
                 stats: Dict[Tuple[FilterConfig, float], ConfigStats],
                 final_errors: Dict[Tuple[FilterConfig, float], np.ndarray]):
        self._system_id = system_id
        self._seed = seed
        self._runs = runs
        self._sigmas = list(sigmas)
        self._filters = list(filters)
        self._stats = stats
        self._final_errors = final_errors

    @property
    def system_id(self) -> str:
        return self._system_id

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def runs(self) -> int:
        return self._runs

    @property
    def sigmas(self) -> List[float]:
        return list(self._sigmas)

    @property
    def filters(self) -> List[FilterConfig]:
        return list(self._filters)

    def stats(self, config: FilterConfig, sigma: float) -> ConfigStats:
        return self._stats[(config, sigma)]

    def final_errors(self, config: FilterConfig, sigma: float) -> np.ndarray:
        """
        Final error vector of every run, NaN rows for diverged runs.
        """
        return self._final_errors[(config, sigma)]

    def items(self):
        for config in self._filters:
            for sigma in self._sigmas:
                yield config, sigma, self._stats[(config, sigma)]


def rmse(errors: np.ndarray, axis: int = 0) -> np.ndarray:
    errors = np.asarray(errors, dtype=float)
    if errors.shape[axis] == 0:
        return np.full(np.delete(errors.shape, axis), np.nan)
    return np.sqrt(np.mean(errors ** 2, axis=axis))


def consistency_stats(result: SweepResult,
                      min_samples: int = MIN_CONSISTENCY_SAMPLES,
                      skip_insufficient: bool = False) -> Dict[Tuple[FilterConfig, float], np.ndarray]:
    """
    Ratio of the filter's own RMSE estimate (from its final covariance) to the actual
    RMSE, per state. Ratios well below one mean the filter is overconfident.

    Raises:
        InsufficientSamples if a configuration has fewer than min_samples completed runs
            (unless skip_insufficient, which reports NaN for it instead)
    """
    ratios = {}
    for config, sigma, stats in result.items():
        if stats.completed < min_samples:
            if not skip_insufficient:
                raise InsufficientSamples(
                    f"{config.propagator}-{config.mode.value} at sigma={sigma:g}: "
                    f"{stats.completed} completed runs, {min_samples} required")
            ratios[(config, sigma)] = np.full_like(stats.rmse_final, np.nan)
            continue
        with np.errstate(divide='ignore', invalid='ignore'):
            ratios[(config, sigma)] = stats.estimated_rmse / stats.rmse_final
    return ratios


def timing_profile(result: SweepResult, reference: FilterConfig = TIMING_REFERENCE) -> Dict[FilterConfig, float]:
    """
    Mean step time of every configuration, averaged over the sigma grid and divided by
    that of the conventional EKF on the same system.
    """
    if reference not in result.filters:
        raise ValueError('timing profile needs the %s-%s configuration in the sweep'
                         % (reference.propagator, reference.mode.value))

    def mean_time(config: FilterConfig) -> float:
        times = [result.stats(config, sigma).mean_step_time_ns for sigma in result.sigmas]
        return float(np.nanmean(times))

    baseline = mean_time(reference)
    return {config: mean_time(config) / baseline for config in result.filters}


def convergence_curve(result: SweepResult, config: FilterConfig, sigma: float) -> np.ndarray:
    """
    RMSE of every state after every step, shape (steps, n_x).
    """
    return result.stats(config, sigma).rmse_by_iteration
