import logging
import sys
from typing import Iterable, List

import pandas as pd

from ..harness.experiment import FilterConfig
from ..harness.stats import SweepResult, timing_profile
from ..filter_types import FrameworkMode

logger = logging.getLogger('pynlkf.cli.output')

SWEEP_COLUMNS = ['system', 'filter', 'framework', 'sigma', 'state_index', 'rmse_actual', 'rmse_estimated',
                 'mean_step_time_ns', 'backout_rate', 'divergence_count', 'runs', 'seed']
CONVERGENCE_COLUMNS = ['system', 'filter', 'framework', 'sigma', 'iteration', 'state_index', 'rmse_actual']
TIMING_COLUMNS = ['system', 'filter', 'framework', 'normalized_time']

FLOAT_FORMAT = '%.17e'


def sweep_frame(results: Iterable[SweepResult]) -> pd.DataFrame:
    rows = []
    for result in results:
        for config, sigma, stats in result.items():
            for state_index in range(stats.rmse_final.size):
                rows.append((result.system_id, config.propagator, config.mode.value, float(sigma), state_index,
                             float(stats.rmse_final[state_index]), float(stats.estimated_rmse[state_index]),
                             float(stats.mean_step_time_ns), float(stats.backout_rate),
                             int(stats.divergence_count), int(result.runs), int(result.seed)))
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def convergence_frame(results: Iterable[SweepResult]) -> pd.DataFrame:
    rows = []
    for result in results:
        for config, sigma, stats in result.items():
            curve = stats.rmse_by_iteration
            for step in range(curve.shape[0]):
                for state_index in range(curve.shape[1]):
                    rows.append((result.system_id, config.propagator, config.mode.value, float(sigma),
                                 step + 1, state_index, float(curve[step, state_index])))
    return pd.DataFrame(rows, columns=CONVERGENCE_COLUMNS)


def timing_frame(results: Iterable[SweepResult]) -> pd.DataFrame:
    rows = []
    for result in results:
        for config, normalized in timing_profile(result).items():
            rows.append((result.system_id, config.propagator, config.mode.value, float(normalized)))
    return pd.DataFrame(rows, columns=TIMING_COLUMNS)


def write_frame(frame: pd.DataFrame, path) -> None:
    """
    Writes a result table as CSV, floats in full precision scientific notation.
    A path of None or '-' writes to stdout.
    """
    if path is None or path == '-':
        frame.to_csv(sys.stdout, index=False, float_format=FLOAT_FORMAT)
        return

    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info('[Output] wrote %d rows to %s', len(frame), path)


def _line_style(config: FilterConfig) -> str:
    return '-' if config.mode == FrameworkMode.RECALIBRATED else ':'


def plot_sweep(result: SweepResult, path: str, show_estimated: bool = False) -> None:
    """
    Log-log SVG of the actual RMSE against sigma, one panel per state. Each filter
    has its own colour; the conventional framework is dotted, the recalibrated solid.
    """
    import matplotlib
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt

    filters = result.filters
    n_states = result.stats(filters[0], result.sigmas[0]).rmse_final.size
    propagators: List[str] = list(dict.fromkeys(c.propagator for c in filters))
    colours = {name: plt.get_cmap('tab10')(i % 10) for i, name in enumerate(propagators)}

    figure, axes = plt.subplots(1, n_states, figsize=(4 * n_states, 3.5), squeeze=False)
    for state_index, ax in enumerate(axes[0]):
        for config in filters:
            actual = [result.stats(config, s).rmse_final[state_index] for s in result.sigmas]
            ax.loglog(result.sigmas, actual, _line_style(config), color=colours[config.propagator],
                      label=f"{config.propagator.upper()} ({config.mode.value})")
            if show_estimated:
                estimated = [result.stats(config, s).estimated_rmse[state_index] for s in result.sigmas]
                ax.loglog(result.sigmas, estimated, _line_style(config), color=colours[config.propagator],
                          alpha=0.4, linewidth=0.8)
        ax.set_title(f"{result.system_id} state {state_index}")
        ax.set_xlabel('measurement noise sigma')
        ax.set_ylabel('RMSE')
    axes[0][0].legend(fontsize='small')

    figure.tight_layout()
    figure.savefig(path, format='svg')
    plt.close(figure)
    logger.info('[Output] wrote plot %s', path)
