from typing import Callable, List, Optional, Tuple

from .base import SystemSpec
from .battery import build_battery
from .generator import build_generator
from .linear import build_constant_velocity
from .pendulum import build_pendulum
from .terrain import build_terrain
from .tracking3d import build_tracking3d
from ..errors import UnknownIdentifier

# id,builder
SYSTEMS: List[Tuple[str, Callable[[], SystemSpec]]] = [
    ('tracking3d', build_tracking3d),
    ('terrain', build_terrain),
    ('generator', build_generator),
    ('pendulum', build_pendulum),
    ('battery', build_battery),
    ('linear_cv', build_constant_velocity),
]

# the benchmark set swept by "--system all"
BENCHMARK_SYSTEMS = ('tracking3d', 'terrain', 'generator', 'pendulum', 'battery')


def system_ids() -> List[str]:
    return [name for name, _ in SYSTEMS]


def find_system(name: str) -> Optional[Callable[[], SystemSpec]]:
    builders_by_name = {s[0]: s[1] for s in SYSTEMS}
    return builders_by_name.get(name)


def build_system(name: str) -> SystemSpec:
    builder = find_system(name)
    if builder is None:
        raise UnknownIdentifier('Unsupported system: %s (valid: %s)' % (name, ', '.join(system_ids())))

    return builder()
