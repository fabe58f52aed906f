"""Monodromy groups, minimal regular covers and end counts of periodic maps."""

from .errors import InvalidWordError, ResourceLimitError, SearchExhaustedError
from .flag_system import FlagSystem
from .periodic_map import PeriodicFlag, PeriodicMap, build_tiling
from .monodromy import MonodromyGroup, MonodromyElement

__all__ = [
    "FlagSystem", "PeriodicFlag", "PeriodicMap", "build_tiling",
    "MonodromyGroup", "MonodromyElement",
    "InvalidWordError", "ResourceLimitError", "SearchExhaustedError",
]
__version__ = "0.1.0"
