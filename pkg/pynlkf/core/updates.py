from typing import Tuple

import numpy as np
import scipy.linalg

from .belief import StateBelief
from ..common.linalg import spd_factor, symmetrize
from ..errors import DimensionMismatch, SingularInnovation


def _as_matrix(value) -> np.ndarray:
    return np.atleast_2d(np.asarray(value, dtype=float))


def kalman_gain(P_xy, S) -> np.ndarray:
    """
    Solves K S = P_xy through a Cholesky factorization of S.

    Args:
        P_xy: n_x x n_m cross covariance
        S: n_m x n_m innovation covariance
    Returns:
        (ndarray) n_x x n_m gain
    Raises:
        SingularInnovation if S cannot be factorized after jitter
    """
    P_xy = _as_matrix(P_xy)
    S = _as_matrix(S)
    if S.shape[0] != S.shape[1] or P_xy.shape[1] != S.shape[0]:
        raise DimensionMismatch(f"gain from P_xy {P_xy.shape} and S {S.shape}")

    factor = spd_factor(S, error=SingularInnovation)
    return scipy.linalg.cho_solve(factor, P_xy.T, check_finite=False).T


def update_state(x_pred, K, residual) -> np.ndarray:
    x_pred = np.asarray(x_pred, dtype=float).reshape(-1)
    K = _as_matrix(K)
    residual = np.asarray(residual, dtype=float).reshape(-1)
    if K.shape != (x_pred.size, residual.size):
        raise DimensionMismatch(f"gain {K.shape} against state {x_pred.size} and residual {residual.size}")

    return x_pred + K @ residual


def _check_cov_shapes(P_pred: np.ndarray, K: np.ndarray, S: np.ndarray):
    n, m = K.shape
    if P_pred.shape != (n, n) or S.shape != (m, m):
        raise DimensionMismatch(f"covariance update with P {P_pred.shape}, K {K.shape}, S {S.shape}")


def conventional_cov_update(P_pred, K, S_pred) -> np.ndarray:
    P_pred, K, S_pred = _as_matrix(P_pred), _as_matrix(K), _as_matrix(S_pred)
    _check_cov_shapes(P_pred, K, S_pred)

    return symmetrize(P_pred - K @ S_pred @ K.T)


def general_cov_update(P_pred, K, S_eval, P_xy_eval) -> np.ndarray:
    """
    Covariance after a state update with an arbitrary gain K, given measurement
    moments S_eval and P_xy_eval (not necessarily the ones K was formed from).
    """
    P_pred, K, S_eval, P_xy_eval = _as_matrix(P_pred), _as_matrix(K), _as_matrix(S_eval), _as_matrix(P_xy_eval)
    _check_cov_shapes(P_pred, K, S_eval)
    if P_xy_eval.shape != K.shape:
        raise DimensionMismatch(f"cross covariance {P_xy_eval.shape} against gain {K.shape}")

    cross = P_xy_eval @ K.T
    return symmetrize(P_pred + K @ S_eval @ K.T - cross - cross.T)


def backout_if_worse(prior: StateBelief, candidate: StateBelief) -> Tuple[StateBelief, bool]:
    if prior.dim != candidate.dim:
        raise DimensionMismatch(f"beliefs of size {prior.dim} and {candidate.dim}")

    if candidate.trace() > prior.trace():
        return prior, True
    return candidate, False
