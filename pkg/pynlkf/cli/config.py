import os
from typing import Any, Dict, List, Optional

import numpy as np
import yaml

from ..filter_types import FRAMEWORK_MODE_BY_STR
from ..harness.experiment import ExperimentSpec, DEFAULT_RUNS, DEFAULT_SEED, filter_configs, default_sigmas
from ..propagators.registry import propagator_ids, FRAMEWORK_PROPAGATORS
from ..propagators.ukf import DEFAULT_ALPHA, DEFAULT_BETA, DEFAULT_KAPPA
from ..systems.registry import system_ids, BENCHMARK_SYSTEMS

WORKERS_ENV = 'PYNLKF_WORKERS'


class ConfigError(ValueError):
    pass


def parse_sigma_grid(text: str) -> List[float]:
    """
    Sigma grid from "lo..hi:log:n", "lo..hi:lin:n" or a comma separated list.
    """
    try:
        if '..' in text:
            parts = text.strip().split(':')
            if len(parts) != 3 or parts[1] not in ('log', 'lin'):
                raise ConfigError(f"sigma grid must read lo..hi:log:n or lo..hi:lin:n, got \"{text}\"")
            bounds = parts[0].split('..')
            if len(bounds) != 2:
                raise ConfigError(f"invalid sigma range \"{parts[0]}\"")
            lo, hi, n = float(bounds[0]), float(bounds[1]), int(parts[2])
            if n < 1:
                raise ConfigError(f"sigma grid needs at least one point: {text}")
            if parts[1] == 'log':
                if lo <= 0 or hi <= 0:
                    raise ConfigError(f"log grid bounds must be positive: {text}")
                values = np.logspace(np.log10(lo), np.log10(hi), n)
            else:
                values = np.linspace(lo, hi, n)
        else:
            values = [float(v) for v in text.split(',') if v.strip()]
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"invalid sigma grid \"{text}\"") from e

    values = [float(v) for v in values]
    if not values or any(not v > 0 for v in values):
        raise ConfigError(f"sigmas must be positive: {text}")
    return values


def _split_list(value) -> List[str]:
    if isinstance(value, (list, tuple)):
        return [str(v).strip() for v in value if str(v).strip()]
    return [v.strip() for v in str(value).split(',') if v.strip()]


def load_config_file(path: str) -> Dict[str, Any]:
    """
    YAML mapping whose keys mirror the long command line flags.
    """
    with open(path, 'r') as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"config file {path} is not valid YAML: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must contain a mapping")
    return {str(key).replace('-', '_'): value for key, value in data.items()}


def default_workers() -> int:
    value = os.environ.get(WORKERS_ENV)
    if not value:
        return 1
    try:
        return max(1, int(value))
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got \"{value}\"")


class CliConfig(object):

    def __init__(self,
                 subcommand: str,
                 system_id: str = 'tracking3d',
                 filters: Optional[List[str]] = None,
                 frameworks: Optional[List[str]] = None,
                 sigmas: Optional[List[float]] = None,
                 runs: int = DEFAULT_RUNS,
                 seed: int = DEFAULT_SEED,
                 workers: int = 1,
                 output: Optional[str] = None,
                 plot: Optional[str] = None,
                 ukf_alpha: float = DEFAULT_ALPHA,
                 ukf_beta: float = DEFAULT_BETA,
                 ukf_kappa: float = DEFAULT_KAPPA,
                 extra: Optional[Dict[str, Any]] = None):
        self.subcommand = subcommand
        self.system_id = system_id
        self.filters = filters if filters is not None else list(FRAMEWORK_PROPAGATORS)
        self.frameworks = frameworks if frameworks is not None else ['old', 'new']
        self.sigmas = sigmas
        self.runs = runs
        self.seed = seed
        self.workers = workers
        self.output = output
        self.plot = plot
        self.ukf_alpha = ukf_alpha
        self.ukf_beta = ukf_beta
        self.ukf_kappa = ukf_kappa
        self.extra = extra or {}

    @property
    def plot_enabled(self) -> bool:
        return self.plot is not None

    def system_list(self) -> List[str]:
        if self.system_id == 'all':
            return list(BENCHMARK_SYSTEMS)
        return [self.system_id]

    def validate(self):
        valid_systems = system_ids()
        for system_id in self.system_list():
            if system_id not in valid_systems:
                raise ConfigError(f"unknown system \"{system_id}\" (valid: {', '.join(valid_systems + ['all'])})")

        valid_filters = propagator_ids()
        for name in self.filters:
            if name not in valid_filters:
                raise ConfigError(f"unknown filter \"{name}\" (valid: {', '.join(valid_filters)})")

        for name in self.frameworks:
            if name not in FRAMEWORK_MODE_BY_STR:
                raise ConfigError(f"unknown framework \"{name}\" (valid: {', '.join(FRAMEWORK_MODE_BY_STR)})")

        if self.runs < 1:
            raise ConfigError(f"runs must be at least 1, got {self.runs}")
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")

    def experiment(self, system_id: str) -> ExperimentSpec:
        modes = [FRAMEWORK_MODE_BY_STR[name] for name in self.frameworks]
        try:
            return ExperimentSpec(system_id,
                                  filters=filter_configs(self.filters, modes),
                                  sigmas=self.sigmas if self.sigmas is not None else default_sigmas(),
                                  runs=self.runs,
                                  master_seed=self.seed,
                                  parallel_workers=self.workers,
                                  ukf_alpha=self.ukf_alpha,
                                  ukf_beta=self.ukf_beta,
                                  ukf_kappa=self.ukf_kappa)
        except ValueError as e:
            raise ConfigError(str(e)) from e


# flag name -> converter from a flag or config file value
_CONVERTERS = {
    'system': str,
    'filters': _split_list,
    'frameworks': _split_list,
    'sigmas': lambda v: parse_sigma_grid(str(v)) if not isinstance(v, (list, tuple)) else [float(x) for x in v],
    'runs': int,
    'seed': int,
    'workers': int,
    'output': str,
    'plot': str,
    'ukf_alpha': float,
    'ukf_beta': float,
    'ukf_kappa': float,
}


def build_config(subcommand: str, flags: Dict[str, Any]) -> CliConfig:
    """
    Merges defaults, the optional config file (flags['config']) and explicit flags,
    in increasing precedence. Flags left at None count as not given.
    """
    values: Dict[str, Any] = {}
    config_path = flags.get('config')
    if config_path:
        values.update(load_config_file(config_path))
    values.update({key: value for key, value in flags.items() if value is not None and key != 'config'})

    converted: Dict[str, Any] = {}
    extra: Dict[str, Any] = {}
    for key, value in values.items():
        if key in _CONVERTERS:
            try:
                converted[key] = _CONVERTERS[key](value)
            except ConfigError:
                raise
            except (TypeError, ValueError) as e:
                raise ConfigError(f"invalid value for {key}: {value!r}") from e
        else:
            extra[key] = value

    config = CliConfig(subcommand,
                       system_id=converted.get('system', 'tracking3d'),
                       filters=converted.get('filters'),
                       frameworks=converted.get('frameworks'),
                       sigmas=converted.get('sigmas'),
                       runs=converted.get('runs', DEFAULT_RUNS),
                       seed=converted.get('seed', DEFAULT_SEED),
                       workers=converted['workers'] if 'workers' in converted else default_workers(),
                       output=converted.get('output'),
                       plot=converted.get('plot'),
                       ukf_alpha=converted.get('ukf_alpha', DEFAULT_ALPHA),
                       ukf_beta=converted.get('ukf_beta', DEFAULT_BETA),
                       ukf_kappa=converted.get('ukf_kappa', DEFAULT_KAPPA),
                       extra=extra)
    config.validate()
    return config
