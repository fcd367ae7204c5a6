"""iqsim: exact open-system dynamics in superposed collective-spin environments."""

from .baths import BathSpec, level_energy, partition_function, thermal_weight
from .sectors import SingleQubitParams, TwoQubitParams

__version__ = "0.1.0"

__all__ = [
    "BathSpec",
    "SingleQubitParams",
    "TwoQubitParams",
    "level_energy",
    "thermal_weight",
    "partition_function",
    "__version__",
]
