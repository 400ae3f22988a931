from typing import List, Optional, Tuple, Type

from .base import MomentPropagator
from .ckf import CkfPropagator
from .ekf import EkfPropagator
from .ekf2 import Ekf2Propagator
from .iekf import IteratedEkfPropagator
from .ukf import UkfPropagator
from ..errors import UnknownIdentifier

# id,propagator
PROPAGATORS: List[Tuple[str, Type[MomentPropagator]]] = [
    (EkfPropagator.__NAME__, EkfPropagator),
    (Ekf2Propagator.__NAME__, Ekf2Propagator),
    (UkfPropagator.__NAME__, UkfPropagator),
    (CkfPropagator.__NAME__, CkfPropagator),
    (IteratedEkfPropagator.__NAME__, IteratedEkfPropagator),
]

# the propagators that run under both frameworks
FRAMEWORK_PROPAGATORS = ('ekf', 'ekf2', 'ukf', 'ckf')


def register_propagator(name: str, propagator: Type[MomentPropagator]):
    for p_name, p_type in PROPAGATORS:
        if p_name == name:
            if p_type is propagator:
                return
            raise ValueError(f"another propagator \"{p_type.__name__}\" is already using the id {name}")

    PROPAGATORS.append((name, propagator))


def propagator_ids() -> List[str]:
    return [name for name, _ in PROPAGATORS]


def find_propagator(name: str) -> Optional[Type[MomentPropagator]]:
    propagators_by_name = {p[0]: p[1] for p in PROPAGATORS}
    return propagators_by_name.get(name)


def create_propagator(name: str, options: Optional[dict] = None) -> MomentPropagator:
    propagator = find_propagator(name)
    if propagator is None:
        raise UnknownIdentifier('Unsupported propagator: %s (valid: %s)' % (name, ', '.join(propagator_ids())))

    return propagator.from_options(options or {})
