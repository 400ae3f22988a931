import logging
from typing import List

import numpy as np

from .belief import StateBelief, StepRecord
from .updates import kalman_gain, update_state, conventional_cov_update, general_cov_update, backout_if_worse
from ..errors import NonFiniteEstimate
from ..filter_types import FrameworkMode

logger = logging.getLogger('pynlkf.core.framework')


def run_step(model, prop, mode: FrameworkMode, belief: StateBelief, k: int, z, R) -> StepRecord:
    """
    One predict/update step into step k.

    The conventional framework updates the covariance with the gain-forming moments.
    The recalibrated framework re-approximates the measurement moments at the updated
    mean, evaluates the general covariance update with them and backs out of the
    update when the covariance trace grows.

    Args:
        model: the SystemSpec being filtered
        prop: the MomentPropagator
        mode: framework selection
        belief: posterior of step k - 1
        k: index of the step being estimated
        z: measurement of step k
        R: filter measurement noise covariance
    Returns:
        (StepRecord) prior, posterior and the intermediate quantities of the step
    """
    z = np.asarray(z, dtype=float).reshape(-1)
    R = np.atleast_2d(np.asarray(R, dtype=float))

    prior = prop.predict(model, belief, k)

    if prop.iterated:
        if mode != FrameworkMode.CONVENTIONAL:
            raise ValueError(f"{prop.name} supports the conventional framework only")
        return prop.iterated_update(model, prior, z, R, k)

    moments, carryover = prop.measurement_moments(model, prior.mean, prior.cov, R, k)
    K = kalman_gain(moments.P_xy, moments.S)
    residual = z - moments.y_hat
    mean = update_state(prior.mean, K, residual)

    if mode == FrameworkMode.CONVENTIONAL:
        posterior = StateBelief(mean, conventional_cov_update(prior.cov, K, moments.S))
        return StepRecord(prior, posterior, K, residual, moments)

    recalibrated = prop.recalibrate_moments(model, mean, prior.cov, carryover, K, residual, R, k)
    candidate = StateBelief(mean, general_cov_update(prior.cov, K, recalibrated.S, recalibrated.P_xy))
    posterior, backed_out = backout_if_worse(prior, candidate)
    if backed_out:
        logger.debug('[%s] back out at step %d (trace %.6e > %.6e)', prop.name, k, candidate.trace(), prior.trace())

    return StepRecord(prior, posterior, K, residual, moments, recalibrated, backed_out)


def run_filter(model, prop, mode: FrameworkMode, x0_estimate, P0, measurements, sigma: float) -> List[StepRecord]:
    """
    Filters a whole measurement sequence; measurements[i] belongs to step i + 1.

    Raises:
        NonFiniteEstimate when a posterior leaves the finite range
    """
    R = model.measurement_cov(sigma)
    belief = StateBelief(x0_estimate, P0)

    records = []
    for index, z in enumerate(measurements):
        k = index + 1
        record = run_step(model, prop, mode, belief, k, z, R)
        if not record.posterior.is_finite():
            raise NonFiniteEstimate(f"{prop.name} ({mode.value}) diverged at step {k}")
        records.append(record)
        belief = record.posterior

    return records
