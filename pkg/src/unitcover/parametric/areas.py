"""Closed-form region areas of the hexagonal family and the bounds built from them.

All areas are measured inside the Voronoi hexagon ``H`` of the origin in
``A2 = Z(0,2) + Z(sqrt3,1)``, with disks of radius ``rho`` at the lattice
points.  ``R2`` is the doubly covered part, ``R0`` the uncovered part and
``R22`` the vertical lenses (one third of ``R2``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

SQRT3 = math.sqrt(3.0)
RHO_MIN = 1.0
RHO_MAX = 2.0 / SQRT3
RHO_STEEP = math.sqrt(6.0) - math.sqrt(2.0)
H_AREA = 2.0 * SQRT3
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

_RANGE_TOL = 1e-12


@dataclass(frozen=True)
class RegionAreas:
    H: float
    R0: float
    R2: float
    R22: float


def _check_rho(rho: float) -> float:
    rho = float(rho)
    if not (RHO_MIN - _RANGE_TOL <= rho <= RHO_MAX + _RANGE_TOL):
        raise ValueError(f"rho must lie in [1, 2/sqrt(3)], got {rho}")
    return min(max(rho, RHO_MIN), RHO_MAX)


def arcsec(x: float) -> float:
    return math.acos(1.0 / x)


def region_areas(rho: float) -> RegionAreas:
    rho = _check_rho(rho)
    s = math.sqrt(max(rho * rho - 1.0, 0.0))
    R2 = 6.0 * (rho * rho * arcsec(rho) - s)
    R0 = max(H_AREA - math.pi * rho * rho + R2, 0.0)
    return RegionAreas(H_AREA, R0, R2, R2 / 3.0)


def f(rho: float, k: int) -> float:
    """Density bound for ``k`` generalized boundary points at parameter ``rho``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = region_areas(rho)
    den = a.R0 + a.R2
    assert den > 0
    return (a.H - k * a.R2) / den + k


def f_r(rho: float) -> float:
    """Bound with one small-angle vertex allowed in a diagonal lens.

    The numerator drops three full overlap areas (three boundary points) and
    the vertical-lens area for the small-angle vertex.
    """
    a = region_areas(rho)
    return (a.H - 3.0 * a.R2 - a.R22) / (a.R0 + a.R2) + 4.0


def rho_seed(k: int) -> float:
    """Closed-form approximation of the maximizer, from linearizing the stationarity condition."""
    return 1.0 / math.cos(math.pi / (6 * k + 12 - SQRT3 * math.pi * k))


def golden_max(fun, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 500) -> tuple[float, float]:
    """Maximize a unimodal ``fun`` on ``[lo, hi]``; returns ``(x, fun(x))``."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = fun(d)
    x = (a + b) / 2
    return x, fun(x)


def _maximize(fun, seed: float) -> tuple[float, float]:
    width = 0.02
    lo, hi = max(RHO_MIN, seed - width), min(RHO_MAX, seed + width)
    x, fx = golden_max(fun, lo, hi)
    near_edge = (x - lo < 1e-7 and lo > RHO_MIN) or (hi - x < 1e-7 and hi < RHO_MAX)
    if near_edge:
        x, fx = golden_max(fun, RHO_MIN, RHO_MAX)
    return fx, x


def maximize_f(k: int) -> tuple[float, float]:
    """``(f_max(k), rho_max(k))`` by golden-section search near the seed."""
    seed = min(max(rho_seed(k), RHO_MIN), RHO_MAX)
    return _maximize(lambda r: f(r, k), seed)


def maximize_f_r() -> tuple[float, float]:
    return _maximize(f_r, rho_seed(4))


def integer_bound(value: float, tol: float = 1e-9) -> int:
    """``ceil(value) - 1``, treating values within ``tol`` of an integer as that integer."""
    r = round(value)
    if abs(value - r) <= tol:
        return int(r) - 1
    return math.ceil(value) - 1


def lattice_lower_bound(delta: float) -> int:
    """Exact-cover lower bound from a lattice packing of density ``delta``."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    return integer_bound(1.0 / (1.0 - delta))
