import logging
from typing import Optional, Tuple

import numpy as np
import scipy.linalg

logger = logging.getLogger('pynlkf.harness.theorems')

JACKKNIFE_GROUPS = 100


def _generators(seed: int, count: int):
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def random_moments(n_x: int, n_m: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    A random cross covariance and a well conditioned positive definite S.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    A = rng.standard_normal((n_m, n_m))
    S = A @ A.T + n_m * np.eye(n_m)
    P_xy = rng.standard_normal((n_x, n_m))
    return P_xy, S


def sample_wishart(S: np.ndarray, dof: Optional[int], samples: int, rng: np.random.Generator) -> np.ndarray:
    """
    Wishart draws with mean S via the Bartlett decomposition: L A A^T L^T with L the
    Cholesky factor of S / dof, A lower triangular with chi distributed diagonal and
    standard normal entries below it. dof=None returns S itself for every sample.
    """
    p = S.shape[0]
    if dof is None:
        return np.broadcast_to(S, (samples, p, p)).copy()
    assert dof > p - 1, 'Wishart needs dof > n_m - 1'

    L = scipy.linalg.cholesky(S / dof, lower=True)
    A = np.zeros((samples, p, p))
    rows, cols = np.tril_indices(p, -1)
    A[:, rows, cols] = rng.standard_normal((samples, rows.size))
    A[:, np.arange(p), np.arange(p)] = np.sqrt(rng.chisquare(dof - np.arange(p), size=(samples, p)))
    LA = L @ A
    return LA @ np.swapaxes(LA, 1, 2)


def sample_cross(P_xy: np.ndarray, noise_scale: float, samples: int, rng: np.random.Generator) -> np.ndarray:
    noise = rng.standard_normal((samples,) + P_xy.shape) if noise_scale else np.zeros((samples,) + P_xy.shape)
    return P_xy + noise_scale * noise


def _gains(P_draws: np.ndarray, S_draws: np.ndarray) -> np.ndarray:
    # K = P S^-1, solved as S K^T = P^T
    return np.swapaxes(np.linalg.solve(S_draws, np.swapaxes(P_draws, 1, 2)), 1, 2)


def _covariance_shift(K: np.ndarray, S: np.ndarray, P_xy: np.ndarray) -> np.ndarray:
    """
    K S K^T - P_xy K^T - K P_xy^T for stacks of gains and moments.
    """
    KS = K @ S
    cross = P_xy @ np.swapaxes(K, 1, 2)
    return KS @ np.swapaxes(K, 1, 2) - cross - np.swapaxes(cross, 1, 2)


def _group_means(values: np.ndarray, groups: int) -> Tuple[np.ndarray, np.ndarray]:
    groups = max(2, min(groups, values.shape[0]))
    usable = values.shape[0] - values.shape[0] % groups
    batched = values[:usable].reshape((groups, -1) + values.shape[1:])
    totals = batched.sum(axis=1)
    full_total = totals.sum(axis=0)
    leave_one_out = (full_total - totals) / (usable - usable // groups)
    return full_total / usable, leave_one_out


def jackknife_stderr(statistic, values: np.ndarray, groups: int = JACKKNIFE_GROUPS) -> float:
    """
    Grouped jackknife standard error of statistic(mean of values).
    """
    _, leave_one_out = _group_means(values, groups)
    estimates = np.array([statistic(m) for m in leave_one_out])
    g = estimates.shape[0]
    return float(np.sqrt((g - 1) / g * np.sum((estimates - estimates.mean()) ** 2)))


def _min_eigenvalue(M: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(0.5 * (M + M.T))[0])


def theorem1_check(n_x: int, n_m: int, P_xy, S, noise_scale: float, dof: Optional[int], samples: int,
                   seed: int) -> Tuple[np.ndarray, float, float]:
    """
    Monte Carlo check that the conventional covariance update is overconfident on average.

    Draws estimated moments S~ (Wishart, mean S) and P~ = P_xy + noise_scale G, forms
    K = P~ S~^-1 and compares the covariance the filter reports, P - K S~ K^T, with the
    actual one, P + K S K^T - P_xy K^T - K P_xy^T.

    Args:
        n_x, n_m: state and measurement sizes
        P_xy: true cross covariance (n_x x n_m)
        S: true innovation covariance (n_m x n_m)
        noise_scale: standard deviation of the cross covariance perturbation
        dof: Wishart degrees of freedom, None for S~ = S
        samples: number of draws
        seed: generator seed
    Returns:
        (mean of P_actual - P_estimated, its minimum eigenvalue, jackknife stderr of that eigenvalue)
    """
    P_xy = np.asarray(P_xy, dtype=float).reshape(n_x, n_m)
    S = np.asarray(S, dtype=float).reshape(n_m, n_m)
    rng_s, rng_p = _generators(seed, 2)

    S_draws = sample_wishart(S, dof, samples, rng_s)
    P_draws = sample_cross(P_xy, noise_scale, samples, rng_p)
    K = _gains(P_draws, S_draws)

    # (P + shift(true moments)) - (P - K S~ K^T)
    gaps = _covariance_shift(K, S, P_xy) + K @ S_draws @ np.swapaxes(K, 1, 2)
    mean_gap = gaps.mean(axis=0)
    min_eig = _min_eigenvalue(mean_gap)
    stderr = jackknife_stderr(_min_eigenvalue, gaps)

    logger.info('[Theorem1] n_x=%d n_m=%d scale=%g dof=%s: min eig %.6e (stderr %.3e)',
                n_x, n_m, noise_scale, dof, min_eig, stderr)
    return mean_gap, min_eig, stderr


def theorem2_check(n_x: int, n_m: int, P_xy, S, noise_scale: float, dof: Optional[int], samples: int,
                   seed: int, correlated: bool = False) -> Tuple[np.ndarray, float, float]:
    """
    Monte Carlo check that the recalibrated covariance update is unbiased when the
    recalibration moments are drawn independently of the gain.

    The gain comes from one draw of estimated moments, the general covariance update is
    evaluated with a second draw (the same draw when correlated).

    Returns:
        (mean of P_new - P_actual, its spectral norm, standard error of the mean matrix)
        The standard error is the root of the summed jackknife variances of all entries.
    """
    P_xy = np.asarray(P_xy, dtype=float).reshape(n_x, n_m)
    S = np.asarray(S, dtype=float).reshape(n_m, n_m)
    rng_s, rng_p, rng_s2, rng_p2 = _generators(seed, 4)

    S_draws = sample_wishart(S, dof, samples, rng_s)
    P_draws = sample_cross(P_xy, noise_scale, samples, rng_p)
    K = _gains(P_draws, S_draws)

    if correlated:
        S_eval, P_eval = S_draws, P_draws
    else:
        S_eval = sample_wishart(S, dof, samples, rng_s2)
        P_eval = sample_cross(P_xy, noise_scale, samples, rng_p2)

    biases = _covariance_shift(K, S_eval, P_eval) - _covariance_shift(K, S, P_xy)
    mean_bias = biases.mean(axis=0)
    norm = float(np.linalg.norm(mean_bias, ord=2))

    _, leave_one_out = _group_means(biases, JACKKNIFE_GROUPS)
    g = leave_one_out.shape[0]
    variances = (g - 1) / g * np.sum((leave_one_out - leave_one_out.mean(axis=0)) ** 2, axis=0)
    stderr = float(np.sqrt(np.sum(variances)))

    logger.info('[Theorem2] n_x=%d n_m=%d scale=%g dof=%s correlated=%s: norm %.6e (stderr %.3e)',
                n_x, n_m, noise_scale, dof, correlated, norm, stderr)
    return mean_bias, norm, stderr
