"""Constructive exact cover for any set of at most 17 points.

Dispatch:

* collinear sets get disjoint tangent unit disks along the line;
* sets in convex position get one vertex disk per point;
* small triangular hulls are covered directly (one disk, or a circumdisk
  plus vertex disks);
* otherwise the lattice ``t + A2`` with radius ``rho`` is translated so that
  every point lands in a region allowed for it, the lattice disks meeting
  the points become the partial cover, and generalized boundary points
  left uncovered get their own disks.

Working at radius ``rho`` on ``rho X`` is the same as unit disks on ``X``;
every returned certificate uses unit disks on the original points and has
been verified.
"""
from __future__ import annotations

import math

import numpy as np

from ..boundary import (
    GBPResult,
    HullCase,
    classify_triangle_hull,
    cover_small_triangle,
    extend_disjoint_cover,
    generalized_boundary_points,
    _vertex_certificate,
)
from ..exact_cover import CoverCertificate, certificate_from_disks, solve_point_instance, verify_certificate
from ..geometry import DEFAULT, Disk, Point, PredicateConfig, as_points, convex_hull, rotation_matrix
from .areas import maximize_f, maximize_f_r
from .lattice import DEFAULT_BUDGET, LatticeConfig, RegionKind, iter_translations, redundant_disk_filter

MAX_POINTS = 17


class SearchFailed(RuntimeError):
    """No verified translation within the attempt budget."""


def _round_rho(r: float) -> float:
    return math.floor(r * 1e6) / 1e6 if r > 1 else r


def _unique(X: np.ndarray):
    if len(np.unique(X, axis=0)) != len(X):
        raise ValueError("duplicate points")


def _cover_collinear(X: np.ndarray, cfg: PredicateConfig) -> CoverCertificate | None:
    i0 = int(np.lexsort((X[:, 1], X[:, 0]))[0])
    d = X - X[i0]
    far = int(np.argmax(np.hypot(d[:, 0], d[:, 1])))
    if far == i0:
        u = np.array([1.0, 0.0])
    else:
        u = d[far] / np.hypot(*d[far])
    s = d @ u
    # shift the interval grid so its breakpoints fall midway in the widest gap mod 2
    m = np.sort(np.mod(s, 2.0))
    gaps = np.diff(np.concatenate([m, [m[0] + 2.0]]))
    g = int(np.argmax(gaps))
    off = (m[g] + gaps[g] / 2.0) % 2.0
    ks = np.floor((s - off) / 2.0)
    centers = {}
    for k in np.unique(ks):
        c = X[i0] + (off + 2.0 * k + 1.0) * u
        centers[float(k)] = Disk(Point(float(c[0]), float(c[1])), 1.0)
    disks = tuple(centers[float(k)] for k in sorted(centers))
    cert = certificate_from_disks(X, disks, cfg)
    return cert if verify_certificate(X, cert, cfg).ok else None


def _nearly_collinear(X: np.ndarray, cfg: PredicateConfig) -> bool:
    c = X - X.mean(axis=0)
    _, sv, _ = np.linalg.svd(c, full_matrices=False)
    return bool(sv[-1] <= max(cfg.tolerance, 1e-12) * max(1.0, sv[0]))


def _interior_angle(hull: list[Point], k: int) -> float:
    v = np.array(hull[k])
    a = np.array(hull[k - 1]) - v
    c = np.array(hull[(k + 1) % len(hull)]) - v
    cosang = float(a @ c) / (np.linalg.norm(a) * np.linalg.norm(c))
    return math.acos(max(-1.0, min(1.0, cosang)))


def _lattice_cover(
    X: np.ndarray,
    gbps: GBPResult,
    rho: float,
    constraints: dict,
    Q: np.ndarray,
    small_vertex: int | None,
    budget: int,
    seed: int,
    cfg: PredicateConfig,
) -> CoverCertificate:
    """Translate the lattice until the induced partial cover extends to an exact cover.

    ``Q`` rotates ``X`` into the lattice frame; ``Z = rho * X Q^T``.
    """
    Z = rho * (X @ Q.T)
    for t, classes in iter_translations(Z, rho, constraints, budget, seed, pcfg=cfg):
        centers = {c for cls in classes for c in cls.witnesses}
        if small_vertex is not None and classes[small_vertex].kind == RegionKind.R21:
            y = redundant_disk_filter(Z, LatticeConfig(rho, t), cfg)
            if y is not None:
                centers.discard(y)
        partial = []
        for c in sorted(centers):
            p = (np.array(c) / rho) @ Q
            partial.append(Disk(Point(float(p[0]), float(p[1])), 1.0))
        try:
            return extend_disjoint_cover(X, gbps, partial, cfg)
        except ValueError:
            continue
    raise SearchFailed("search failed")


def cover_up_to_17(
    X,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    cfg: PredicateConfig = DEFAULT,
) -> CoverCertificate:
    """Verified exact cover of ``1 <= |X| <= 17`` distinct points by unit disks.

    Raises :class:`SearchFailed` if the translation budget runs out; a
    different ``seed`` gives a fresh sequence.
    """
    X = as_points(X)
    n = len(X)
    if n == 0:
        raise ValueError("need at least one point")
    if n > MAX_POINTS:
        raise ValueError(f"at most {MAX_POINTS} points, got {n}")
    _unique(X)
    if n == 1:
        return CoverCertificate((Disk(Point(float(X[0, 0]), float(X[0, 1])), 1.0),), (0,))

    hull = convex_hull(X, cfg)
    if len(hull) <= 2 or _nearly_collinear(X, cfg):
        cert = _cover_collinear(X, cfg)
        if cert is not None:
            return cert
        # numerically collinear but not exactly: fall back to the general dual solver
        cert = solve_point_instance(X, cfg=cfg)
        if cert is None:  # pragma: no cover - n <= 17 is always coverable
            raise SearchFailed("search failed")
        return cert

    if len(hull) == n:
        try:
            disks = tuple(_vertex_certificate(X, hull, k, cfg) for k in range(n))
        except ValueError:
            disks = ()
        if disks:
            cert = certificate_from_disks(X, disks, cfg)
            if verify_certificate(X, cert, cfg).ok:
                return cert

    if len(hull) == 3:
        cls = classify_triangle_hull(X, cfg)
        if cls.case in (HullCase.SMALL, HullCase.UNIT, HullCase.RIGHT_OBTUSE_SHORT):
            try:
                return cover_small_triangle(X, cls, cfg)
            except ValueError:
                pass  # R_T within tolerance of 1 from above; the sweep path still works

    gbps = generalized_boundary_points(X, cfg)
    hull_idx = list(gbps.indices[: len(hull)])

    if len(hull) >= 5:
        k = len(gbps.indices)
        rho = _round_rho(maximize_f(k)[1])
        constraints = {i: {RegionKind.R0, RegionKind.R1} for i in gbps.indices}
        return _lattice_cover(X, gbps, rho, constraints, np.eye(2), None, budget, seed, cfg)

    angles = [_interior_angle(hull, k) for k in range(len(hull))]
    k1 = int(np.argmin(angles))
    assert angles[k1] <= math.pi / 2 + 1e-12
    v = np.array(hull[k1])
    a = np.array(hull[k1 - 1]) - v
    c = np.array(hull[(k1 + 1) % len(hull)]) - v
    bis = a / np.linalg.norm(a) + c / np.linalg.norm(c)
    Q = rotation_matrix(-math.atan2(bis[1], bis[0]))
    v1 = hull_idx[k1]
    constraints = {i: {RegionKind.R0, RegionKind.R1} for i in gbps.indices}
    constraints[v1] = {RegionKind.R0, RegionKind.R1, RegionKind.R21}
    rho = _round_rho(maximize_f_r()[1])
    return _lattice_cover(X, gbps, rho, constraints, Q, v1, budget, seed, cfg)
