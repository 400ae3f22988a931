from typing import Callable, Optional

import numpy as np

from ..errors import JacobianUnavailable, HessianUnavailable

# central difference step h_j = max(FLOOR, REL * |x_j|)
JACOBIAN_STEP = 1e-6
# second differences of function values need a wider step
HESSIAN_STEP = 1e-4


def _steps(x: np.ndarray, scale: float) -> np.ndarray:
    return np.maximum(scale, scale * np.abs(x))


def numerical_jacobian(fn: Callable[[np.ndarray], np.ndarray], x) -> np.ndarray:
    """
    Central finite-difference Jacobian of fn at x.

    Args:
        fn: vector valued function of one vector argument
        x: evaluation point
    Returns:
        (ndarray) m x n matrix of partial derivatives
    Raises:
        JacobianUnavailable if any difference quotient is not finite
    """
    x = np.asarray(x, dtype=float)
    steps = _steps(x, JACOBIAN_STEP)

    columns = []
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = steps[j]
        upper = np.atleast_1d(np.asarray(fn(x + e), dtype=float))
        lower = np.atleast_1d(np.asarray(fn(x - e), dtype=float))
        columns.append((upper - lower) / (2 * steps[j]))

    J = np.column_stack(columns)
    if not np.all(np.isfinite(J)):
        raise JacobianUnavailable('Finite-difference Jacobian is not finite at %s' % x)
    return J


def numerical_hessians(fn: Callable[[np.ndarray], np.ndarray], x,
                       jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None) -> np.ndarray:
    """
    Hessians of every output component of fn at x, shaped (m, n, n).

    When an analytic Jacobian is given the Hessian is the central difference of it,
    otherwise second differences of fn itself are used.
    """
    x = np.asarray(x, dtype=float)
    n = x.size

    if jacobian is not None:
        steps = _steps(x, JACOBIAN_STEP)
        slices = []
        for j in range(n):
            e = np.zeros_like(x)
            e[j] = steps[j]
            upper = np.atleast_2d(np.asarray(jacobian(x + e), dtype=float))
            lower = np.atleast_2d(np.asarray(jacobian(x - e), dtype=float))
            slices.append((upper - lower) / (2 * steps[j]))
        hessians = np.stack(slices, axis=-1)
    else:
        steps = _steps(x, HESSIAN_STEP)
        m = np.atleast_1d(np.asarray(fn(x), dtype=float)).size
        hessians = np.zeros((m, n, n))
        for i in range(n):
            ei = np.zeros_like(x)
            ei[i] = steps[i]
            for j in range(i, n):
                ej = np.zeros_like(x)
                ej[j] = steps[j]
                value = (np.atleast_1d(fn(x + ei + ej)) - np.atleast_1d(fn(x + ei - ej))
                         - np.atleast_1d(fn(x - ei + ej)) + np.atleast_1d(fn(x - ei - ej)))
                value = np.asarray(value, dtype=float) / (4 * steps[i] * steps[j])
                hessians[:, i, j] = value
                hessians[:, j, i] = value

    hessians = 0.5 * (hessians + np.swapaxes(hessians, 1, 2))
    if not np.all(np.isfinite(hessians)):
        raise HessianUnavailable('Finite-difference Hessian is not finite at %s' % x)
    return hessians
