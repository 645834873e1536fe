"""Generalized boundary points, triangle hull cases and the extension step.

A *generalized boundary point* of ``X`` is a point ``b`` admitting an open
unit disk ``D`` with ``D ∩ X = {b}``.  Hull vertices always qualify.  When
the hull is a triangle with room inside, a fourth one is found by sweeping a
"bulldozer" (a stadium of unit disks, or a single unit disk for short
triangles) upward through a side until it meets a point.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .arrangement import enumerate_cells
from .exact_cover import CoverCertificate, certificate_from_disks, verify_certificate
from .geometry import (
    DEFAULT,
    DegenerateError,
    Disk,
    Point,
    PredicateConfig,
    as_point,
    as_points,
    circumcircle,
    circumradius_sq_exact,
    convex_hull,
    disks_to_arrays,
    points_in_disks,
    rotation_matrix,
)

_MAX_HALVINGS = 80


class HullCase(str, enum.Enum):
    LONG_SIDE = "LONG_SIDE"
    MEDIUM = "MEDIUM"
    UNIT = "UNIT"
    SMALL = "SMALL"
    RIGHT_OBTUSE_SHORT = "RIGHT_OBTUSE_SHORT"
    NOT_TRIANGLE = "NOT_TRIANGLE"


@dataclass(frozen=True)
class HullClassification:
    case: HullCase
    circumradius: float
    vertices: tuple[Point, ...] = ()


@dataclass(frozen=True)
class GBPResult:
    points: tuple[Point, ...]
    certificates: tuple[Disk, ...]
    indices: tuple[int, ...] = ()


class _Frame:
    """Rigid motion ``local = R (p - origin)``."""

    def __init__(self, origin, theta: float):
        self.origin = np.asarray(origin, dtype=float)
        self.R = rotation_matrix(theta)

    def to_local(self, P) -> np.ndarray:
        return (np.asarray(P, dtype=float) - self.origin) @ self.R.T

    def to_global(self, P) -> np.ndarray:
        return np.asarray(P, dtype=float) @ self.R + self.origin


def _index_of(X: np.ndarray, p) -> int:
    hits = np.flatnonzero((X[:, 0] == p[0]) & (X[:, 1] == p[1]))
    return int(hits[0])


def _reject_duplicates(X: np.ndarray):
    if len(np.unique(X, axis=0)) != len(X):
        raise ValueError("duplicate points")


def _singleton_disk(X: np.ndarray, idx: int, center: Callable[[float], np.ndarray], eps0: float,
                    cfg: PredicateConfig) -> Disk | None:
    """Halve ``eps`` until the unit disk at ``center(eps)`` meets ``X`` only in ``X[idx]``."""
    eps = eps0
    for _ in range(_MAX_HALVINGS):
        c = np.asarray(center(eps), dtype=float)
        inside = points_in_disks(X, c[None, :], 1.0, cfg)[:, 0]
        if inside[idx] and inside.sum() == 1:
            return Disk(Point(float(c[0]), float(c[1])), 1.0)
        eps *= 0.5
    return None


def _eps0(X: np.ndarray, idx: int) -> float:
    d = np.hypot(*(X - X[idx]).T)
    d[idx] = np.inf
    m = float(d.min()) if len(X) > 1 else 1.0
    return min(0.5, 0.5 * m)


# -- classification --------------------------------------------------------


def classify_triangle_hull(X, cfg: PredicateConfig = DEFAULT) -> HullClassification:
    hull = convex_hull(as_points(X), cfg)
    if len(hull) != 3:
        return HullClassification(HullCase.NOT_TRIANGLE, math.nan, tuple(hull))
    P = [(Fraction(p.x), Fraction(p.y)) for p in hull]

    def sq(a, b):
        return (a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2

    _, R = circumcircle(*hull, cfg=cfg)
    sides = [sq(P[1], P[2]), sq(P[0], P[2]), sq(P[0], P[1])]
    if max(sides) >= 4:
        return HullClassification(HullCase.LONG_SIDE, R, tuple(hull))
    for k in range(3):
        a, b, c = P[k], P[(k + 1) % 3], P[(k + 2) % 3]
        if (b[0] - a[0]) * (c[0] - a[0]) + (b[1] - a[1]) * (c[1] - a[1]) <= 0:
            return HullClassification(HullCase.RIGHT_OBTUSE_SHORT, R, tuple(hull))
    R2 = circumradius_sq_exact(*hull)
    if abs(float(R2) - 1.0) <= 1e-9:
        case = HullCase.UNIT
    elif R2 > 1:
        case = HullCase.MEDIUM
    else:
        case = HullCase.SMALL
    return HullClassification(case, R, tuple(hull))


# -- bulldozers ------------------------------------------------------------


def _entry_times(Z: np.ndarray, v: float) -> np.ndarray:
    """Height at which the stadium of half-width ``v - 1`` first reaches each point."""
    ax = np.abs(Z[:, 0])
    flat = ax <= v - 1
    over = np.clip(ax - (v - 1), 0.0, 1.0)
    t = np.where(flat, Z[:, 1] - 1.0, Z[:, 1] - np.sqrt(1.0 - over * over))
    return np.where(ax < v, t, np.inf)


def _first_hit(Z: np.ndarray, X_orig: np.ndarray, times: np.ndarray, eligible: np.ndarray):
    tt = np.where(eligible, times, np.inf)
    tmin = float(tt.min())
    if not math.isfinite(tmin):
        return tmin, -1
    tied = np.flatnonzero(tt <= tmin + 1e-12 * max(1.0, abs(tmin)))
    best = min(tied, key=lambda i: (X_orig[i, 0], X_orig[i, 1]))
    return tmin, int(best)


def bulldozer_tmax(X, v: float | None = None, cfg: PredicateConfig = DEFAULT) -> tuple[float, Point]:
    """Sweep height and touching point for ``X`` in normalized position.

    ``X`` must already have its long side on the x-axis from ``(-v, 0)`` to
    ``(v, 0)`` with the third vertex above.  Only non-vertex points are
    eligible.  Ties go to the lexicographically least point.
    """
    Z = as_points(X)
    hull = convex_hull(Z, cfg)
    if v is None:
        base = [p for p in hull if abs(p.y) <= 1e-9 * max(1.0, abs(p.x))]
        if len(base) < 2:
            raise ValueError("X is not in normalized position")
        v = max(abs(p.x) for p in base)
    hull_set = set(hull)
    eligible = np.array([as_point(p) not in hull_set for p in Z])
    if not eligible.any():
        raise ValueError("no interior points")
    t, i = _first_hit(Z, Z, _entry_times(Z, v), eligible)
    if i < 0:
        raise ValueError("no interior points")
    return t, Point(float(Z[i, 0]), float(Z[i, 1]))


def _chord_unit_center(a: np.ndarray, b: np.ndarray, away_from: np.ndarray, ref_center=None) -> np.ndarray:
    half2 = float(np.sum((b - a) ** 2)) / 4.0
    if half2 >= 1.0:
        raise DegenerateError("no unit disk through chord")
    m = (a + b) / 2.0
    u = (b - a) / math.sqrt(4.0 * half2)
    n = np.array([-u[1], u[0]])
    side = float(np.dot(away_from - m, n))
    if ref_center is not None:
        s2 = float(np.dot(ref_center - m, n))
        if abs(s2) > 1e-12:
            side = -s2
    h = math.sqrt(1.0 - half2)
    return m - h * n if side > 0 else m + h * n


def bd_unit_disks(T: Sequence, cfg: PredicateConfig = DEFAULT) -> tuple[Disk, Disk, Disk]:
    """Unit disks through each pair of vertices, in pair order (0,1), (0,2), (1,2).

    Each center lies on the same side of its chord as the reflection of the
    circumcenter (the center of the circle through the chord and the
    orthocenter), i.e. away from the third vertex for acute triangles.
    """
    V = as_points(T)
    if len(V) != 3:
        raise ValueError("need three vertices")
    try:
        O, _ = circumcircle(*V, cfg=cfg)
        O = np.array(O)
    except DegenerateError:
        O = None
    out = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        k = 3 - i - j
        ref = None
        if O is not None:
            # reflect the circumcenter across the chord
            m = (V[i] + V[j]) / 2
            u = (V[j] - V[i]) / np.linalg.norm(V[j] - V[i])
            w = O - m
            ref = m + 2 * np.dot(w, u) * u - w
        c = _chord_unit_center(V[i], V[j], V[k], ref)
        out.append(Disk(Point(float(c[0]), float(c[1])), 1.0))
    return tuple(out)


# -- generalized boundary points -------------------------------------------


def _vertex_certificate(X: np.ndarray, hull: list[Point], k: int, cfg: PredicateConfig) -> Disk:
    v = np.array(hull[k])
    a = np.array(hull[k - 1])
    c = np.array(hull[(k + 1) % len(hull)])
    ua = (a - v) / np.linalg.norm(a - v)
    uc = (c - v) / np.linalg.norm(c - v)
    n = -(ua + uc)
    nn = np.linalg.norm(n)
    n = n / nn if nn > 1e-15 else np.array([-ua[1], ua[0]])
    idx = _index_of(X, hull[k])
    disk = _singleton_disk(X, idx, lambda e: v + (1.0 - e) * n, 0.5, cfg)
    if disk is None:
        # only near-flat hull angles get here; fall back to the arrangement
        found = _arrangement_gbp(X, [idx], cfg)
        if found is None:
            raise ValueError("vertex certificate not found")
        disk = found[1]
    return disk


def _arrangement_gbp(X: np.ndarray, candidates: Sequence[int], cfg: PredicateConfig):
    """Lexicographically least candidate owning a singleton cell, with its disk."""
    arr = enumerate_cells([Disk(Point(*map(float, p)), 1.0) for p in X], cfg)
    single = {c.members[0]: c.witness for c in arr.cells if len(c.members) == 1}
    for i in sorted(candidates, key=lambda i: (X[i, 0], X[i, 1])):
        if i in single:
            return i, Disk(single[i], 1.0)
    return None


def _long_side_gbp(X: np.ndarray, hull: list[Point], cfg: PredicateConfig):
    V = np.array(hull)
    pairs = [(0, 1), (1, 2), (2, 0)]
    i, j = max(pairs, key=lambda p: float(np.sum((V[p[1]] - V[p[0]]) ** 2)))
    k = 3 - i - j
    m = (V[i] + V[j]) / 2
    d = V[j] - V[i]
    frame = _Frame(m, -math.atan2(d[1], d[0]))
    Z = frame.to_local(X)
    if frame.to_local(V[k])[1] < 0:
        frame = _Frame(m, -math.atan2(-d[1], -d[0]))
        Z = frame.to_local(X)
    v = float(np.linalg.norm(d)) / 2
    hull_set = set(hull)
    eligible = np.array([as_point(p) not in hull_set for p in X])
    t, b = _first_hit(Z, X, _entry_times(Z, v), eligible)
    if b < 0:
        return None
    cx = float(np.clip(Z[b, 0], -(v - 1), v - 1))
    disk = _singleton_disk(X, b, lambda e: frame.to_global(np.array([cx, t + e])), _eps0(X, b), cfg)
    return (b, disk) if disk is not None else None


def _medium_gbp(X: np.ndarray, hull: list[Point], cfg: PredicateConfig):
    V = np.array(hull)
    hull_set = set(hull)
    eligible = np.array([as_point(p) not in hull_set for p in X])
    bds = bd_unit_disks(V, cfg)
    for (i, j), bd in zip(((0, 1), (0, 2), (1, 2)), bds):
        inside = points_in_disks(X, np.array([bd.center]), 1.0, cfg)[:, 0]
        if not (inside & eligible).any():
            continue
        m = (V[i] + V[j]) / 2
        c = np.array(bd.center)
        # local frame: chord on the x-axis, bulldozer center below it
        up = m - c
        frame = _Frame(m, math.pi / 2 - math.atan2(up[1], up[0]))
        Z = frame.to_local(X)
        ax = np.abs(Z[:, 0])
        times = np.where(ax < 1, Z[:, 1] - np.sqrt(np.clip(1 - Z[:, 0] ** 2, 0, None)), np.inf)
        t, b = _first_hit(Z, X, times, np.ones(len(X), dtype=bool))
        if b < 0 or not eligible[b]:
            continue
        disk = _singleton_disk(X, b, lambda e: frame.to_global(np.array([0.0, t + e])), _eps0(X, b), cfg)
        if disk is not None:
            return b, disk
    return None


def generalized_boundary_points(X, cfg: PredicateConfig = DEFAULT) -> GBPResult:
    """Hull vertices, plus a fourth point for long-side and medium triangles.

    Each point comes with a unit disk meeting ``X`` in that point alone.
    """
    X = as_points(X)
    _reject_duplicates(X)
    hull = convex_hull(X, cfg)
    if len(hull) < 3:
        raise DegenerateError("degenerate: collinear")
    idx = [_index_of(X, p) for p in hull]
    certs = [_vertex_certificate(X, hull, k, cfg) for k in range(len(hull))]
    if len(hull) == 3 and len(X) > 3:
        cls = classify_triangle_hull(X, cfg)
        extra = None
        if cls.case == HullCase.LONG_SIDE:
            extra = _long_side_gbp(X, hull, cfg)
        elif cls.case == HullCase.MEDIUM:
            extra = _medium_gbp(X, hull, cfg)
        if cls.case in (HullCase.LONG_SIDE, HullCase.MEDIUM) and extra is None:
            # the sweep can touch the third vertex first; any singleton cell also certifies
            extra = _arrangement_gbp(X, [i for i in range(len(X)) if i not in idx], cfg)
        if extra is not None:
            idx.append(extra[0])
            certs.append(extra[1])
    pts = tuple(Point(float(X[i, 0]), float(X[i, 1])) for i in idx)
    return GBPResult(pts, tuple(certs), tuple(idx))


# -- extension and small triangles -----------------------------------------


def extend_disjoint_cover(X, gbps: GBPResult, partial: Sequence[Disk],
                          cfg: PredicateConfig = DEFAULT) -> CoverCertificate:
    """Add certificate disks for the generalized boundary points left uncovered."""
    X = as_points(X)
    disks = list(partial)
    indices = gbps.indices or tuple(_index_of(X, p) for p in gbps.points)
    for i, cert in zip(indices, gbps.certificates):
        if disks:
            C, r = disks_to_arrays(disks)
            hits = int(points_in_disks(X[i:i + 1], C, r, cfg).sum())
        else:
            hits = 0
        if hits == 1:
            continue
        if hits >= 2:
            raise ValueError("extension blocked")
        disk = cert
        inside = points_in_disks(X, np.array([cert.center]), cert.radius, cfg)[:, 0]
        if inside.sum() != 1 or not inside[i]:
            d = _arrangement_gbp(X, [i], cfg)
            if d is None:
                raise ValueError("extension blocked")
            disk = d[1]
        disks.append(disk)
    cert = certificate_from_disks(X, disks, cfg)
    rep = verify_certificate(X, cert, cfg)
    if not rep.ok:
        raise ValueError(f"extended cover does not verify: {rep.violations[:3]}")
    return cert


def _single_disk(X: np.ndarray, center, cfg: PredicateConfig) -> CoverCertificate | None:
    d = Disk(Point(float(center[0]), float(center[1])), 1.0)
    cert = CoverCertificate((d,), (0,) * len(X))
    return cert if verify_certificate(X, cert, cfg).ok else None


def cover_small_triangle(X, cls: HullClassification, cfg: PredicateConfig = DEFAULT) -> CoverCertificate:
    X = as_points(X)
    if cls.case not in (HullCase.UNIT, HullCase.SMALL, HullCase.RIGHT_OBTUSE_SHORT):
        raise ValueError("case mismatch")
    V = np.array(cls.vertices)
    if cls.case == HullCase.RIGHT_OBTUSE_SHORT:
        pairs = [(0, 1), (1, 2), (2, 0)]
        i, j = max(pairs, key=lambda p: float(np.sum((V[p[1]] - V[p[0]]) ** 2)))
        cert = _single_disk(X, (V[i] + V[j]) / 2, cfg)
        if cert is None:
            raise ValueError("construction failed")
        return cert
    O, _ = circumcircle(*V, cfg=cfg)
    if cls.case == HullCase.SMALL:
        cert = _single_disk(X, O, cfg)
        if cert is not None:
            return cert
    # unit circumradius: the circumdisk takes T minus its vertices, vertices get their own disks
    hull = convex_hull(X, cfg)
    gbps = GBPResult(
        tuple(hull),
        tuple(_vertex_certificate(X, hull, k, cfg) for k in range(3)),
        tuple(_index_of(X, p) for p in hull),
    )
    try:
        return extend_disjoint_cover(X, gbps, [Disk(O, 1.0)], cfg)
    except ValueError as exc:
        raise ValueError("construction failed") from exc
