"""Exact covers of planar point sets by open unit disks."""
from .geometry import DegenerateError, Disk, Point, PredicateConfig

__version__ = "0.1.0"

__all__ = ["DegenerateError", "Disk", "Point", "PredicateConfig", "__version__"]
