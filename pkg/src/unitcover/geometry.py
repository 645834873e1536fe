"""Planar primitives and predicates.

Disks are open: a point on the boundary circle is *not* inside.  Predicates
evaluate in floating point and fall back to exact rational arithmetic on the
float inputs whenever the float answer lies inside the tolerance band.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np


class DegenerateError(ValueError):
    """Raised for inputs on which a construction is undefined."""


class Point(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Disk:
    center: Point
    radius: float = 1.0

    def __post_init__(self):
        c = self.center
        object.__setattr__(self, "center", Point(float(c[0]), float(c[1])))
        object.__setattr__(self, "radius", float(self.radius))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be positive and finite, got {self.radius}")
        if not (math.isfinite(self.center.x) and math.isfinite(self.center.y)):
            raise ValueError("disk center must be finite")


@dataclass(frozen=True)
class PredicateConfig:
    tolerance: float = 1e-9
    refinement_precision: int = 50

    def __post_init__(self):
        if not self.tolerance >= 0:
            raise ValueError("tolerance must be nonnegative")


def default_config() -> PredicateConfig:
    tol = os.environ.get("UNITCOVER_TOLERANCE")
    if tol is None:
        return PredicateConfig()
    return PredicateConfig(tolerance=float(tol))


DEFAULT = default_config()


def as_points(X: Iterable[Sequence[float]]) -> np.ndarray:
    """Coerce ``X`` into an ``(n, 2)`` float array, rejecting NaN/inf."""
    arr = np.asarray(list(X) if not isinstance(X, np.ndarray) else X, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, 2)
    arr = arr.reshape(-1, 2)
    if not np.all(np.isfinite(arr)):
        raise ValueError("coordinates must be finite")
    return arr


def as_point(p) -> Point:
    return Point(float(p[0]), float(p[1]))


def disks_to_arrays(disks: Sequence[Disk]) -> tuple[np.ndarray, np.ndarray]:
    c = np.array([[d.center.x, d.center.y] for d in disks], dtype=float).reshape(-1, 2)
    r = np.array([d.radius for d in disks], dtype=float)
    return c, r


# -- exact helpers -------------------------------------------------------


def _exact_power(px, py, cx, cy, r) -> Fraction:
    dx = Fraction(px) - Fraction(cx)
    dy = Fraction(py) - Fraction(cy)
    return dx * dx + dy * dy - Fraction(r) * Fraction(r)


def _exact_orient(p, q, r) -> Fraction:
    px, py = Fraction(p[0]), Fraction(p[1])
    return (Fraction(q[0]) - px) * (Fraction(r[1]) - py) - (Fraction(q[1]) - py) * (Fraction(r[0]) - px)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


# -- predicates ----------------------------------------------------------


def power_sign(p, d: Disk, cfg: PredicateConfig = DEFAULT) -> int:
    """Sign of ``|p - c|^2 - r^2``: -1 inside, 0 on the circle, +1 outside."""
    dx = p[0] - d.center.x
    dy = p[1] - d.center.y
    r2 = d.radius * d.radius
    val = dx * dx + dy * dy - r2
    if abs(val) > cfg.tolerance * (1.0 + r2):
        return 1 if val > 0 else -1
    return _sign(_exact_power(p[0], p[1], d.center.x, d.center.y, d.radius))


def point_in_disk(p, d: Disk, cfg: PredicateConfig = DEFAULT) -> bool:
    return power_sign(p, d, cfg) < 0


def points_in_disks(X, centers, radii, cfg: PredicateConfig = DEFAULT) -> np.ndarray:
    """Membership matrix ``M[i, j] = X[i] strictly inside disk j``."""
    X = as_points(X)
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    radii = np.broadcast_to(np.asarray(radii, dtype=float), (len(centers),))
    diff = X[:, None, :] - centers[None, :, :]
    r2 = radii[None, :] ** 2
    val = np.einsum("ijk,ijk->ij", diff, diff) - r2
    inside = val < 0
    near = np.abs(val) <= cfg.tolerance * (1.0 + r2)
    for i, j in zip(*np.nonzero(near)):
        inside[i, j] = _exact_power(X[i, 0], X[i, 1], centers[j, 0], centers[j, 1], radii[j]) < 0
    return inside


def orientation(p, q, r, cfg: PredicateConfig = DEFAULT) -> int:
    """+1 for a left turn p->q->r, -1 for right, 0 for collinear."""
    a = (q[0] - p[0]) * (r[1] - p[1])
    b = (q[1] - p[1]) * (r[0] - p[0])
    det = a - b
    if abs(det) > cfg.tolerance * (abs(a) + abs(b)) + 1e-300:
        return 1 if det > 0 else -1
    return _sign(_exact_orient(p, q, r))


# -- constructions -------------------------------------------------------


def circle_intersection(d1: Disk, d2: Disk, cfg: PredicateConfig = DEFAULT) -> list[Point]:
    """Common points of the two boundary circles, sorted by (x, y)."""
    (x1, y1), r1 = d1.center, d1.radius
    (x2, y2), r2 = d2.center, d2.radius
    if x1 == x2 and y1 == y2:
        raise DegenerateError("degenerate: concentric")
    dx, dy = x2 - x1, y2 - y1
    d = math.hypot(dx, dy)
    scale = cfg.tolerance * max(1.0, r1 + r2)
    if d > r1 + r2 + scale or d < abs(r1 - r2) - scale:
        return []
    a = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    ux, uy = dx / d, dy / d
    if abs(d - (r1 + r2)) <= scale or abs(d - abs(r1 - r2)) <= scale:
        return [Point(x1 + a * ux, y1 + a * uy)]
    h = math.sqrt(max(r1 * r1 - a * a, 0.0))
    mx, my = x1 + a * ux, y1 + a * uy
    pts = [Point(mx - h * uy, my + h * ux), Point(mx + h * uy, my - h * ux)]
    return sorted(pts)


def convex_hull(X, cfg: PredicateConfig = DEFAULT) -> list[Point]:
    """Counterclockwise extreme points, starting at the lexicographically least.

    Collinear points on hull edges are dropped; a collinear input yields its
    two endpoints.
    """
    pts = sorted(set(map(as_point, as_points(X))))
    if len(pts) <= 2:
        return pts

    def chain(seq):
        out: list[Point] = []
        for p in seq:
            while len(out) >= 2 and orientation(out[-2], out[-1], p, cfg) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return hull


def circumcircle(p, q, r, cfg: PredicateConfig = DEFAULT) -> tuple[Point, float]:
    if orientation(p, q, r, cfg) == 0:
        raise DegenerateError("degenerate: collinear")
    # translate to p for conditioning
    bx, by = q[0] - p[0], q[1] - p[1]
    cx, cy = r[0] - p[0], r[1] - p[1]
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return Point(p[0] + ux, p[1] + uy), math.hypot(ux, uy)


def circumradius_sq_exact(p, q, r) -> Fraction:
    """Exact squared circumradius of the triangle on the float inputs."""
    P = [(Fraction(a[0]), Fraction(a[1])) for a in (p, q, r)]
    sq = lambda u, v: (u[0] - v[0]) ** 2 + (u[1] - v[1]) ** 2  # noqa: E731
    a2, b2, c2 = sq(P[1], P[2]), sq(P[0], P[2]), sq(P[0], P[1])
    area2 = (P[1][0] - P[0][0]) * (P[2][1] - P[0][1]) - (P[1][1] - P[0][1]) * (P[2][0] - P[0][0])
    if area2 == 0:
        raise DegenerateError("degenerate: collinear")
    # R^2 = a^2 b^2 c^2 / (16 K^2), with 2K = |area2|
    return a2 * b2 * c2 / (4 * area2 * area2)


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])
