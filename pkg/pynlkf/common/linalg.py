import logging
from typing import Iterator, Tuple, Type

import numpy as np
import scipy.linalg

from ..errors import CholeskyFailure

logger = logging.getLogger('pynlkf.common.linalg')

# multiples of trace(P)/n added to the diagonal when a factorization fails
JITTER_LEVELS = (1e-12, 1e-9, 1e-6)
# eigenvalues below -PSD_TOLERANCE * |trace| are clipped when a covariance is stored
PSD_TOLERANCE = 1e-10


def symmetrize(P) -> np.ndarray:
    P = np.atleast_2d(np.asarray(P, dtype=float))
    return 0.5 * (P + P.T)


def condition_covariance(P, tolerance: float = PSD_TOLERANCE) -> np.ndarray:
    """
    Symmetrized covariance, projected onto the positive semidefinite cone when its
    smallest eigenvalue is below -tolerance * |trace(P)|. Matrices within the
    tolerance are returned unchanged apart from symmetrization.
    """
    P = symmetrize(P)
    if not np.all(np.isfinite(P)):
        return P

    values, vectors = scipy.linalg.eigh(P, check_finite=False)
    if values[0] >= -tolerance * abs(np.trace(P)):
        return P

    logger.debug('[Covariance] clipping eigenvalue %.6e (trace %.6e)', values[0], np.trace(P))
    return symmetrize((vectors * np.clip(values, 0.0, None)) @ vectors.T)


def _jitter_schedule(P: np.ndarray) -> Iterator[float]:
    yield 0.0

    # jitter is relative to the mean variance, nothing to scale by at zero trace
    scale = np.trace(P) / P.shape[0]
    if not np.isfinite(scale) or scale <= 0:
        return
    for level in JITTER_LEVELS:
        yield level * scale


def robust_cholesky(P, error: Type[Exception] = CholeskyFailure) -> np.ndarray:
    """
    Lower triangular Cholesky factor of a covariance matrix, escalating diagonal
    jitter when the plain factorization fails.

    Args:
        P: symmetric positive (semi)definite matrix
        error: exception type raised when every jitter level fails
    Returns:
        (ndarray) L with L @ L.T == P (+ jitter)
    Raises:
        error if P is non-finite or cannot be factorized
    """
    P = symmetrize(P)
    if not np.all(np.isfinite(P)):
        raise error('Matrix contains non-finite entries')
    if not np.any(P):
        return np.zeros_like(P)

    eye = np.eye(P.shape[0])
    for jitter in _jitter_schedule(P):
        try:
            L = scipy.linalg.cholesky(P + jitter * eye, lower=True, check_finite=False)
        except np.linalg.LinAlgError:
            continue
        if jitter > 0:
            logger.debug('[Cholesky] factorized with jitter %.3e', jitter)
        return L

    raise error('Matrix is not positive definite after jitter escalation (trace=%.6e)' % np.trace(P))


def spd_factor(S, error: Type[Exception] = CholeskyFailure) -> Tuple[np.ndarray, bool]:
    """
    Factorization of a symmetric positive definite matrix for use with cho_solve.
    """
    S = symmetrize(S)
    if not np.all(np.isfinite(S)):
        raise error('Matrix contains non-finite entries')

    eye = np.eye(S.shape[0])
    for jitter in _jitter_schedule(S):
        try:
            return scipy.linalg.cho_factor(S + jitter * eye, lower=True, check_finite=False)
        except np.linalg.LinAlgError:
            continue

    raise error('Matrix is not positive definite after jitter escalation (trace=%.6e)' % np.trace(S))


def psd_sqrt(P) -> np.ndarray:
    """
    A square root A of a positive semidefinite matrix, A @ A.T == P.
    Diagonal matrices (possibly with zero entries) take the elementwise root.
    """
    P = symmetrize(P)
    diagonal = np.diag(np.diagonal(P))
    if np.array_equal(P, diagonal):
        return np.diag(np.sqrt(np.clip(np.diagonal(P), 0.0, None)))

    try:
        return scipy.linalg.cholesky(P, lower=True, check_finite=False)
    except np.linalg.LinAlgError:
        values, vectors = scipy.linalg.eigh(P)
        return vectors * np.sqrt(np.clip(values, 0.0, None))
