import argparse
import logging
import os
import sys
from typing import List, Optional

import numpy as np

from .config import CliConfig, ConfigError, build_config
from .demo import run_cubic_demo, SIGMA_Y, PRIOR_MEAN, PRIOR_STD
from .output import sweep_frame, convergence_frame, timing_frame, write_frame, plot_sweep
from ..harness.runner import run_sweep
from ..harness.stats import consistency_stats, TIMING_REFERENCE
from ..harness.theorems import theorem1_check, theorem2_check, random_moments
from ..systems.registry import SYSTEMS

logger = logging.getLogger('pynlkf.cli.main')

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_THEOREM = 3

# absolute slack on the theorem decisions for rounding in the exact cases
EQUALITY_TOLERANCE = 1e-12
DEFAULT_DOF = 8
DEFAULT_NOISE_SCALE = 0.3
DEFAULT_SAMPLES = 100000


def _plot_path(base: str, system_id: str, many: bool) -> str:
    if not many:
        return base
    root, ext = os.path.splitext(base)
    return f"{root}_{system_id}{ext or '.svg'}"


def _print_consistency(result):
    ratios = consistency_stats(result, skip_insufficient=True)
    print(f"consistency (estimated / actual RMSE) for {result.system_id}")
    for (config, sigma), ratio in ratios.items():
        values = ' '.join(f"{r:10.3e}" for r in ratio)
        print(f"  {config.propagator:>5} {config.mode.value:>3} sigma={sigma:9.3e}  {values}")


def cmd_sweep(config: CliConfig) -> int:
    try:
        experiments = [config.experiment(system_id) for system_id in config.system_list()]
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    results = [run_sweep(experiment) for experiment in experiments]

    try:
        write_frame(sweep_frame(results), config.output)
        if config.plot_enabled:
            for result in results:
                plot_sweep(result, _plot_path(config.plot, result.system_id, len(results) > 1),
                           show_estimated=bool(config.extra.get('plot_estimated')))
        if config.extra.get('convergence'):
            write_frame(convergence_frame(results), config.extra['convergence'])
        if config.extra.get('timing'):
            if all(TIMING_REFERENCE in r.filters for r in results):
                write_frame(timing_frame(results), config.extra['timing'])
            else:
                logger.warning('[Sweep] timing table needs the conventional EKF in the sweep, skipped')
    except OSError as e:
        logger.error('[Sweep] failed writing results: %s', e)
        return EXIT_IO

    if config.extra.get('consistency'):
        for result in results:
            _print_consistency(result)

    return EXIT_OK


def _theorem_moments(n_x: int, n_m: int, seed: int):
    if n_x == 1 and n_m == 1:
        return np.ones((1, 1)), np.ones((1, 1))
    return random_moments(n_x, n_m, seed)


def cmd_theorem(config: CliConfig) -> int:
    extra = config.extra
    try:
        which = int(extra.get('which', 1))
        samples = int(extra.get('samples', DEFAULT_SAMPLES))
        noise_scale = float(extra.get('noise_scale', DEFAULT_NOISE_SCALE))
        n_x = int(extra.get('nx', 1))
        n_m = int(extra.get('nm', 1))
        dof = extra.get('dof')
        # zero noise means exact moments unless a dof is asked for explicitly
        dof = int(dof) if dof is not None else (DEFAULT_DOF if noise_scale else None)
        correlated = bool(extra.get('correlated', False))
    except (TypeError, ValueError) as e:
        print(f"error: invalid theorem parameter: {e}", file=sys.stderr)
        return EXIT_CONFIG

    if which not in (1, 2) or samples < 2 or n_x < 1 or n_m < 1 or noise_scale < 0 \
            or (dof is not None and dof <= n_m - 1):
        print('error: need which in {1, 2}, samples >= 2, nx, nm >= 1, noise-scale >= 0 and dof > nm - 1',
              file=sys.stderr)
        return EXIT_CONFIG

    P_xy, S = _theorem_moments(n_x, n_m, config.seed)
    if which == 1:
        _, min_eig, stderr = theorem1_check(n_x, n_m, P_xy, S, noise_scale, dof, samples, config.seed)
        holds = min_eig >= -(3 * stderr + EQUALITY_TOLERANCE)
        print(f"theorem 1: min eigenvalue of mean (P_actual - P_estimated) = {min_eig:.6e}, stderr = {stderr:.3e}")
    else:
        _, norm, stderr = theorem2_check(n_x, n_m, P_xy, S, noise_scale, dof, samples, config.seed, correlated)
        holds = norm <= 3 * stderr + EQUALITY_TOLERANCE
        print(f"theorem 2: spectral norm of mean (P_new - P_actual) = {norm:.6e}, stderr = {stderr:.3e}"
              f"{' (correlated draws)' if correlated else ''}")

    print('holds at 3 standard errors' if holds else 'does NOT hold at 3 standard errors')
    return EXIT_OK if holds else EXIT_THEOREM


def cmd_demo_cubic(config: CliConfig) -> int:
    extra = config.extra
    try:
        sigma_y = float(extra.get('sigma_y', SIGMA_Y))
        prior_mean = float(extra.get('prior_mean', PRIOR_MEAN))
        prior_std = float(extra.get('prior_std', PRIOR_STD))
    except (TypeError, ValueError) as e:
        print(f"error: invalid demo parameter: {e}", file=sys.stderr)
        return EXIT_CONFIG
    if not (sigma_y > 0 and prior_std > 0):
        print('error: sigma-y and prior-std must be positive', file=sys.stderr)
        return EXIT_CONFIG

    options = {'alpha': config.ukf_alpha, 'beta': config.ukf_beta, 'kappa': config.ukf_kappa}
    truth, rows = run_cubic_demo(sigma_y, prior_mean, prior_std, options)

    print(f"prior N({prior_mean}, {prior_std}^2), true state {truth:.6f}, sigma_y {sigma_y:g}")
    print(f"{'filter':>6} {'framework':>9} {'mean':>12} {'std':>12} {'error':>12} backed_out")
    for row in rows:
        print(f"{row.filter:>6} {row.framework:>9} {row.mean:12.6f} {row.std:12.6f} {row.error:12.6f} {row.backed_out}")
    return EXIT_OK


def cmd_systems(config: CliConfig) -> int:
    print(f"{'id':>12} {'n_x':>4} {'n_m':>4} {'n_u':>4} {'steps':>6} {'dt':>8}")
    for name, builder in SYSTEMS:
        system = builder()
        print(f"{name:>12} {system.n_x:>4} {system.n_m:>4} {system.n_u:>4} {system.steps:>6} {system.dt:>8g}")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument('--config', help='YAML file with flag values, flags take precedence')
    parser.add_argument('--seed', type=int, help='master seed')
    parser.add_argument('--ukf-alpha', type=float)
    parser.add_argument('--ukf-beta', type=float)
    parser.add_argument('--ukf-kappa', type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='pynlkf', description='Nonlinear Kalman filter benchmarks')
    parser.add_argument('-v', '--verbose', action='count', default=0)
    parser.add_argument('-q', '--quiet', action='store_true')
    commands = parser.add_subparsers(dest='command', required=True)

    sweep = commands.add_parser('sweep', help='Monte Carlo RMSE sweep over measurement noise levels')
    _add_common(sweep)
    sweep.add_argument('--system', help='system id or "all"')
    sweep.add_argument('--filters', help='comma separated propagators (ekf,ekf2,ukf,ckf,iekf)')
    sweep.add_argument('--frameworks', help='comma separated frameworks (old,new)')
    sweep.add_argument('--sigmas', help='lo..hi:log:n, lo..hi:lin:n or a comma separated list')
    sweep.add_argument('--runs', type=int)
    sweep.add_argument('--workers', type=int)
    sweep.add_argument('--output', help='CSV path, stdout when omitted')
    sweep.add_argument('--plot', help='SVG path for a log-log RMSE plot')
    sweep.add_argument('--plot-estimated', action='store_true', default=None,
                       help='overlay the estimated RMSE on the plot')
    sweep.add_argument('--convergence', help='CSV path for RMSE after every step')
    sweep.add_argument('--timing', help='CSV path for step times normalized to the conventional EKF')
    sweep.add_argument('--consistency', action='store_true', default=None,
                       help='print estimated / actual RMSE ratios')
    sweep.set_defaults(handler=cmd_sweep)

    theorem = commands.add_parser('theorem', help='Monte Carlo check of the covariance theorems')
    _add_common(theorem)
    theorem.add_argument('--which', type=int, choices=(1, 2))
    theorem.add_argument('--samples', type=int)
    theorem.add_argument('--noise-scale', type=float)
    theorem.add_argument('--dof', type=int, help='Wishart degrees of freedom')
    theorem.add_argument('--nx', type=int)
    theorem.add_argument('--nm', type=int)
    theorem.add_argument('--correlated', action='store_true', default=None,
                         help='recalibrate with the gain forming draw (theorem 2)')
    theorem.set_defaults(handler=cmd_theorem)

    demo = commands.add_parser('demo', help='single step on the cubic measurement')
    _add_common(demo)
    demo.add_argument('--sigma-y', type=float)
    demo.add_argument('--prior-mean', type=float)
    demo.add_argument('--prior-std', type=float)
    demo.set_defaults(handler=cmd_demo_cubic)

    systems = commands.add_parser('systems', help='list the benchmark systems')
    systems.set_defaults(handler=cmd_systems)

    return parser


def _log_level(verbose: int, quiet: bool) -> int:
    if quiet:
        return logging.ERROR
    if verbose >= 2:
        return logging.DEBUG
    if verbose == 1:
        return logging.INFO
    return logging.WARNING


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(level=_log_level(args.verbose, args.quiet),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    flags = {key: value for key, value in vars(args).items()
             if key not in ('command', 'verbose', 'quiet', 'handler')}
    try:
        config = build_config(args.command, flags)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError) as e:
        print(f"error: cannot load configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG

    return args.handler(config)
