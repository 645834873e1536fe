"""Translated copies of the radius-``rho`` hexagonal disk family.

Points are classified by how many lattice disks contain them and, for two,
whether the lens is vertical (same center x) or diagonal.  Translations are
searched with a scrambled Halton sequence over the fundamental
parallelogram; every hit is rechecked with the exact predicates.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np
from scipy.stats import qmc

from .. import kernels
from ..geometry import DEFAULT, Disk, Point, PredicateConfig, as_point, as_points, power_sign
from .areas import RHO_MAX, RHO_MIN, RHO_STEEP, SQRT3

DEFAULT_BUDGET = 10**6
DEFAULT_MARGIN = 1e-9
CHUNK = 8192


class RegionKind(str, enum.Enum):
    R0 = "R0"
    R1 = "R1"
    R21 = "R21"
    R22 = "R22"


_CODE = {
    RegionKind.R0: kernels.R0,
    RegionKind.R1: kernels.R1,
    RegionKind.R21: kernels.R21,
    RegionKind.R22: kernels.R22,
}


@dataclass(frozen=True)
class LatticeConfig:
    rho: float
    translation: Point = Point(0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "translation", as_point(self.translation))
        if not (RHO_MIN - 1e-9 <= self.rho <= RHO_MAX + 1e-9):
            raise ValueError(f"rho must lie in [1, 2/sqrt(3)], got {self.rho}")


@dataclass(frozen=True)
class RegionClass:
    kind: RegionKind
    witnesses: tuple[Point, ...]


def lattice_point(i: int, j: int, t=(0.0, 0.0)) -> Point:
    return Point(float(t[0] + SQRT3 * j), float(t[1] + 2.0 * i + j))


def nearby_centers(p, cfg: LatticeConfig) -> list[Point]:
    """The 16 lattice centers around the lattice cell holding ``p``."""
    tx, ty = cfg.translation
    wx, wy = p[0] - tx, p[1] - ty
    bj = math.floor(wx / SQRT3)
    ai = math.floor((wy - wx / SQRT3) / 2.0)
    return [lattice_point(ai + di, bj + dj, (tx, ty)) for di, dj in kernels._OFFS]


def classify_point_region(p, cfg: LatticeConfig, pcfg: PredicateConfig = DEFAULT) -> RegionClass:
    wit = [c for c in nearby_centers(p, cfg) if power_sign(p, Disk(c, cfg.rho), pcfg) < 0]
    wit.sort()
    if len(wit) == 0:
        return RegionClass(RegionKind.R0, ())
    if len(wit) == 1:
        return RegionClass(RegionKind.R1, tuple(wit))
    if len(wit) == 2:
        kind = RegionKind.R22 if abs(wit[0].x - wit[1].x) < 1e-9 else RegionKind.R21
        return RegionClass(kind, tuple(wit))
    raise AssertionError(f"point in {len(wit)} lattice disks; rho={cfg.rho} exceeds the covering radius")


def _allowed_table(n: int, constraints: Mapping[int, set]) -> np.ndarray:
    table = np.zeros((n, 5), dtype=bool)
    for i in range(n):
        kinds = constraints.get(i, {RegionKind.R1})
        for k in kinds:
            table[i, _CODE[RegionKind(k)]] = True
    return table


def halton_translations(seed: int = 0, budget: int = DEFAULT_BUDGET, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """Chunks of candidate translations ``u (0,2) + v (sqrt3,1)``, ``u, v`` in ``[0,1)``."""
    gen = qmc.Halton(d=2, scramble=True, seed=seed)
    basis = np.array([[0.0, 2.0], [SQRT3, 1.0]])
    left = budget
    while left > 0:
        m = min(chunk, left)
        yield gen.random(m) @ basis
        left -= m


def iter_translations(
    X,
    rho: float,
    constraints: Mapping[int, set],
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    margin: float = DEFAULT_MARGIN,
    pcfg: PredicateConfig = DEFAULT,
) -> Iterator[tuple[Point, list[RegionClass]]]:
    """Verified translations in sequence order, each with its point classes."""
    Z = as_points(X)
    allowed = _allowed_table(len(Z), constraints)
    cols = np.arange(len(Z))
    for T in halton_translations(seed, budget):
        codes = kernels.classify_translations(T, Z, rho, margin)
        ok = np.all((codes >= 0) & allowed[cols, np.clip(codes, 0, 4)], axis=1)
        for a in np.flatnonzero(ok):
            cfg = LatticeConfig(rho, Point(float(T[a, 0]), float(T[a, 1])))
            classes = [classify_point_region(z, cfg, pcfg) for z in Z]
            if all(_CODE[c.kind] == codes[a, p] for p, c in enumerate(classes)):
                yield cfg.translation, classes


def find_translation(
    X,
    rho: float,
    constraints: Mapping[int, set] | None = None,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    margin: float = DEFAULT_MARGIN,
    pcfg: PredicateConfig = DEFAULT,
) -> Point | None:
    """First translation placing each point in an allowed region, or ``None``.

    Unlisted points must be in ``R1``.  ``None`` only means the budget ran
    out, not that no translation exists.
    """
    for t, _ in iter_translations(X, rho, constraints or {}, budget, seed, margin, pcfg):
        return t
    return None


def redundant_disk_filter(X, cfg: LatticeConfig, pcfg: PredicateConfig = DEFAULT) -> Point | None:
    """Center of the left disk to drop when the small-angle vertex sits in a diagonal lens.

    ``X`` must already be in lattice coordinates with the small-angle vertex
    leftmost and its angle bisector along +x.
    """
    if cfg.rho > RHO_STEEP + 1e-12:
        raise ValueError("slope guarantee void")
    Z = as_points(X)
    v1 = Z[int(np.argmin(Z[:, 0]))]
    cls = classify_point_region(v1, cfg, pcfg)
    if cls.kind != RegionKind.R21:
        return None
    return min(cls.witnesses, key=lambda c: c.x)


# -- diagonal lens geometry --------------------------------------------------


def lens_half_angle(rho: float) -> float:
    """Half the angular extent of each lens arc, ``arccos(1/rho)``."""
    return math.acos(1.0 / rho)


def lens_boundary(rho: float, n: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Boundary samples and unit tangents of the lens of centers (0,0) and (-sqrt3,1).

    Returns ``(points, tangents)`` with ``n`` samples on each of the two arcs.
    """
    alpha = lens_half_angle(rho)
    pts, tans = [], []
    for center, mid in (((0.0, 0.0), 5 * math.pi / 6), ((-SQRT3, 1.0), -math.pi / 6)):
        th = np.linspace(mid - alpha, mid + alpha, n)
        pts.append(np.stack([center[0] + rho * np.cos(th), center[1] + rho * np.sin(th)], axis=1))
        tans.append(np.stack([-np.sin(th), np.cos(th)], axis=1))
    return np.vstack(pts), np.vstack(tans)


def lens_tangent_slopes(rho: float, n: int = 100) -> np.ndarray:
    _, t = lens_boundary(rho, n)
    with np.errstate(divide="ignore"):
        return np.abs(t[:, 1] / t[:, 0])


def lens_vertex(rho: float) -> Point:
    """Upper crossing of the two lens circles."""
    s = math.sqrt(rho * rho - 1.0)
    return Point(0.5 * (-SQRT3 + s), 0.5 * (SQRT3 * s + 1.0))


def lens_min_slope(rho: float) -> float:
    """Smallest tangent slope magnitude on the lens, attained at its vertices."""
    s = math.sqrt(rho * rho - 1.0)
    return (SQRT3 - s) / (SQRT3 * s + 1.0)
