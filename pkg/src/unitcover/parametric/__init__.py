"""Hexagonal disk family of radius ``rho``: areas, bounds, translations, pipeline."""
from .areas import (
    RHO_MAX,
    RHO_MIN,
    RHO_STEEP,
    RegionAreas,
    f,
    f_r,
    golden_max,
    integer_bound,
    lattice_lower_bound,
    maximize_f,
    maximize_f_r,
    region_areas,
    rho_seed,
)
from .lattice import (
    LatticeConfig,
    RegionClass,
    RegionKind,
    classify_point_region,
    find_translation,
    lens_min_slope,
    lens_tangent_slopes,
    lens_vertex,
    redundant_disk_filter,
)
from .pipeline import SearchFailed, cover_up_to_17

__all__ = [
    "RHO_MAX", "RHO_MIN", "RHO_STEEP", "RegionAreas", "f", "f_r", "golden_max", "integer_bound",
    "lattice_lower_bound", "maximize_f", "maximize_f_r", "region_areas", "rho_seed",
    "LatticeConfig", "RegionClass", "RegionKind", "classify_point_region", "find_translation",
    "lens_min_slope", "lens_tangent_slopes", "lens_vertex", "redundant_disk_filter",
    "SearchFailed", "cover_up_to_17",
]
