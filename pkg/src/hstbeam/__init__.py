"""Location-aware multi-beam downlink simulation for high-speed trains."""

from ._backend import BACKEND
from .config import ScenarioConfig, dbm_to_watts, load_config, parse_config
from .errors import (
    CapacityError,
    ConfigError,
    DomainError,
    HstbeamError,
    InfeasibleError,
    OutOfRangeError,
)
from .geometry import TrainState, train_state
from .phased_array import ArrayModel

__all__ = [
    "BACKEND",
    "ArrayModel",
    "CapacityError",
    "ConfigError",
    "DomainError",
    "HstbeamError",
    "InfeasibleError",
    "OutOfRangeError",
    "ScenarioConfig",
    "TrainState",
    "dbm_to_watts",
    "load_config",
    "parse_config",
    "train_state",
]
