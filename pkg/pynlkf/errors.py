import numpy as np


class FilterError(Exception):
    pass


class DimensionMismatch(FilterError, ValueError):
    pass


class SingularInnovation(FilterError, np.linalg.LinAlgError):
    """
    The innovation covariance could not be factorized, even after diagonal jitter.
    Usually means the measurement model is degenerate at the linearization point.
    """
    pass


class CholeskyFailure(FilterError, np.linalg.LinAlgError):
    pass


class JacobianUnavailable(FilterError):
    pass


class HessianUnavailable(FilterError):
    pass


class DegenerateScaling(FilterError, ValueError):
    pass


class NonFiniteState(FilterError):
    pass


class NonFiniteEstimate(FilterError):
    pass


class InsufficientSamples(FilterError, ValueError):
    pass


class UnknownIdentifier(FilterError, KeyError):

    def __str__(self):
        # KeyError quotes its argument
        return str(self.args[0]) if self.args else ''


class OutOfBlendRange(UserWarning):
    pass
