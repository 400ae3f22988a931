from collections import namedtuple
from typing import Iterable, List, Optional

import numpy as np

from ..filter_types import FrameworkMode
from ..propagators.registry import FRAMEWORK_PROPAGATORS
from ..propagators.ukf import DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_KAPPA

DEFAULT_RUNS = 500
DEFAULT_SEED = 0


def default_sigmas() -> List[float]:
    return list(np.logspace(-4, 1, 11))


FilterConfig = namedtuple('FilterConfig', 'propagator,mode')


def filter_label(config: FilterConfig) -> str:
    return f"{config.propagator}-{config.mode.value}"


def filter_configs(propagators: Iterable[str], modes: Iterable[FrameworkMode]) -> List[FilterConfig]:
    """
    Cross product of propagators and frameworks. The iterated EKF only runs under the
    conventional framework and is listed once.
    """
    modes = list(modes)
    configs = []
    for propagator in propagators:
        if propagator == 'iekf':
            configs.append(FilterConfig(propagator, FrameworkMode.CONVENTIONAL))
            continue
        for mode in modes:
            configs.append(FilterConfig(propagator, mode))
    return configs


def default_filters(include_iekf: bool = True) -> List[FilterConfig]:
    propagators = list(FRAMEWORK_PROPAGATORS) + (['iekf'] if include_iekf else [])
    return filter_configs(propagators, list(FrameworkMode))


class ExperimentSpec(object):

    def __init__(self,
                 system_id: str,
                 filters: Optional[List[FilterConfig]] = None,
                 sigmas: Optional[Iterable[float]] = None,
                 runs: int = DEFAULT_RUNS,
                 master_seed: int = DEFAULT_SEED,
                 parallel_workers: int = 1,
                 ukf_alpha: float = DEFAULT_ALPHA,
                 ukf_beta: float = DEFAULT_BETA,
                 ukf_kappa: float = DEFAULT_KAPPA):
        self.system_id = system_id
        self.filters = list(filters) if filters is not None else default_filters()
        self.sigmas = [float(s) for s in sigmas] if sigmas is not None else default_sigmas()
        self.runs = int(runs)
        self.master_seed = int(master_seed)
        self.parallel_workers = max(1, int(parallel_workers))
        self.ukf_alpha = ukf_alpha
        self.ukf_beta = ukf_beta
        self.ukf_kappa = ukf_kappa

        if self.runs < 1:
            raise ValueError(f"runs must be at least 1, got {self.runs}")
        if not self.sigmas or any(not s > 0 for s in self.sigmas):
            raise ValueError(f"sigmas must be a nonempty list of positive values, got {self.sigmas}")
        if not self.filters:
            raise ValueError('at least one filter is required')

    @property
    def propagator_options(self) -> dict:
        return {'alpha': self.ukf_alpha, 'beta': self.ukf_beta, 'kappa': self.ukf_kappa}

    def with_runs(self, runs: int) -> 'ExperimentSpec':
        return ExperimentSpec(self.system_id, self.filters, self.sigmas, runs, self.master_seed,
                              self.parallel_workers, self.ukf_alpha, self.ukf_beta, self.ukf_kappa)

    def __repr__(self):
        return (f"ExperimentSpec(system={self.system_id}, filters={len(self.filters)}, "
                f"sigmas={len(self.sigmas)}, runs={self.runs}, seed={self.master_seed})")
