import enum


class FrameworkMode(enum.Enum):
    CONVENTIONAL = 'old'
    RECALIBRATED = 'new'


class InitialEstimatePolicy(enum.Enum):
    SAMPLED_FROM_P0 = 'sampled'
    FIXED = 'fixed'


class NoiseChannel(enum.Enum):
    INIT = 'init'
    PROCESS = 'process'
    MEASUREMENT = 'measurement'
    INPUT = 'input'


FRAMEWORK_MODE_BY_STR = {e.value: e for e in list(FrameworkMode)}
NOISE_CHANNEL_BY_STR = {e.value: e for e in list(NoiseChannel)}
