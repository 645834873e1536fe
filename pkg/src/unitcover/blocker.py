"""Blocker nets: hexagonal epsilon-nets of a disk, Voronoi diagnostics, stress runs.

The net is ``(eps*sqrt3/2 * A2 + y)`` restricted to the closed disk of
radius ``R + eps``.  The scaled lattice has covering radius ``eps`` so every
point of the radius-``R`` disk is within ``eps`` of the net.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.spatial import cKDTree

from .arrangement import cell_bits
from .exact_cover import CoverCertificate, SearchResult, certificate_from_disks, search_bits, verify_certificate
from .geometry import DEFAULT, Disk, Point, PredicateConfig, as_point, as_points, circumcircle

SQRT3 = math.sqrt(3.0)
EPS_MAX = 7.0 - math.sqrt(48.0)
CANONICAL_OFFSET = Point(0.035, -0.055)
BOUNDARY_FLAG_TOL = 1e-9


def radicand(epsilon: float) -> float:
    return 1.0 - 14.0 * epsilon + epsilon * epsilon


def radicand_mp(epsilon, dps: int = 50):
    """``1 - 14 eps + eps^2`` in ``dps``-digit arithmetic on the given value."""
    with mpmath.workdps(dps):
        e = mpmath.mpf(epsilon)
        return 1 - 14 * e + e * e


def blocker_min_radius(epsilon: float, tol: float = 1e-12) -> float:
    """Smallest admissible disk radius ``R`` for the blocker at ``epsilon``."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    rad = radicand(epsilon)
    if rad < -tol or epsilon > EPS_MAX + tol:
        raise ValueError("radicand negative")
    return 1.5 * (1.0 + epsilon) - 0.5 * math.sqrt(max(rad, 0.0))


@dataclass(frozen=True)
class BlockerSpec:
    epsilon: float
    R: float
    offset: Point = Point(0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "offset", as_point(self.offset))
        if not (self.epsilon > 0 and self.R > 0):
            raise ValueError("epsilon and R must be positive")

    @classmethod
    def canonical(cls) -> "BlockerSpec":
        return cls(EPS_MAX, 1.5 * (1.0 + EPS_MAX), CANONICAL_OFFSET)

    def satisfies_bound(self, tol: float = 1e-12) -> bool:
        try:
            return self.R >= blocker_min_radius(self.epsilon) - tol
        except ValueError:
            return False


def _lattice_box(spec: BlockerSpec):
    s = spec.epsilon * SQRT3 / 2.0
    lim = spec.R + spec.epsilon + np.hypot(*spec.offset)
    jmax = int(math.ceil(lim / (s * SQRT3))) + 2
    imax = int(math.ceil(lim / s)) + jmax + 2
    J, I = np.meshgrid(np.arange(-jmax, jmax + 1), np.arange(-imax, imax + 1))
    I, J = I.ravel(), J.ravel()
    P = np.stack([s * SQRT3 * J + spec.offset.x, s * (2 * I + J) + spec.offset.y], axis=1)
    return I, J, P


def _norm_le_mp(i: int, j: int, spec: BlockerSpec, dps: int) -> bool:
    with mpmath.workdps(dps):
        e = mpmath.mpf(spec.epsilon)
        s = e * mpmath.sqrt(3) / 2
        x = s * mpmath.sqrt(3) * j + mpmath.mpf(spec.offset.x)
        y = s * (2 * i + j) + mpmath.mpf(spec.offset.y)
        r = mpmath.mpf(spec.R) + e
        return x * x + y * y <= r * r


def hex_epsilon_net(spec: BlockerSpec, cfg: PredicateConfig = DEFAULT) -> list[Point]:
    """Net points in the closed disk of radius ``R + eps``, sorted lexicographically.

    Points within the tolerance band of the boundary are decided in
    ``cfg.refinement_precision``-digit arithmetic.
    """
    I, J, P = _lattice_box(spec)
    r2 = (spec.R + spec.epsilon) ** 2
    v = np.einsum("ij,ij->i", P, P) - r2
    keep = v <= 0
    band = np.abs(v) <= cfg.tolerance * (1.0 + r2)
    for k in np.flatnonzero(band):
        keep[k] = _norm_le_mp(int(I[k]), int(J[k]), spec, cfg.refinement_precision)
    pts = sorted(Point(float(x), float(y)) for x, y in P[keep])
    return pts


def near_boundary_points(spec: BlockerSpec, tol: float = BOUNDARY_FLAG_TOL) -> list[tuple[Point, float]]:
    """Lattice points whose norm is within ``tol`` of ``R + eps``, with the signed gap."""
    _, _, P = _lattice_box(spec)
    gap = np.hypot(P[:, 0], P[:, 1]) - (spec.R + spec.epsilon)
    idx = np.flatnonzero(np.abs(gap) <= tol)
    return [(Point(float(P[k, 0]), float(P[k, 1])), float(gap[k])) for k in idx]


def nearest_boundary_gap(spec: BlockerSpec) -> float:
    _, _, P = _lattice_box(spec)
    return float(np.min(np.abs(np.hypot(P[:, 0], P[:, 1]) - (spec.R + spec.epsilon))))


def scaled_lattice_constants(epsilon: float) -> tuple[float, float]:
    """Minimal distance and covering radius of ``eps*sqrt3/2 * A2``, computed numerically."""
    s = epsilon * SQRT3 / 2.0
    b1, b2 = np.array([0.0, 2.0 * s]), np.array([SQRT3 * s, s])
    vecs = [a * b1 + b * b2 for a in range(-2, 3) for b in range(-2, 3) if (a, b) != (0, 0)]
    dmin = min(float(np.hypot(*v)) for v in vecs)
    _, cov = circumcircle((0.0, 0.0), tuple(b1), tuple(b2))
    return dmin, cov


def net_covers_disk(net, spec: BlockerSpec, samples: int = 100_000, seed: int = 0) -> float:
    """Largest distance from a uniform sample of ``D(0, R)`` to the net."""
    rng = np.random.default_rng(seed)
    r = spec.R * np.sqrt(rng.random(samples))
    th = rng.random(samples) * 2 * math.pi
    Q = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
    d, _ = cKDTree(as_points(net)).query(Q)
    return float(d.max())


# -- Voronoi diagnostics -----------------------------------------------------


@dataclass(frozen=True)
class VoronoiDiagram:
    sites: tuple[Point, ...]
    clip: tuple[float, float, float, float]
    regions: tuple[np.ndarray, ...]
    vertices: tuple[Point, ...]


def _clip_halfplane(poly: np.ndarray, n: np.ndarray, c: float) -> np.ndarray:
    """Keep the part of ``poly`` with ``n . x <= c``."""
    if len(poly) == 0:
        return poly
    s = poly @ n - c
    out = []
    m = len(poly)
    for k in range(m):
        a, b = poly[k], poly[(k + 1) % m]
        sa, sb = s[k], s[(k + 1) % m]
        if sa <= 0:
            out.append(a)
        if (sa < 0 < sb) or (sb < 0 < sa):
            out.append(a + (b - a) * (sa / (sa - sb)))
    return np.array(out).reshape(-1, 2)


def _default_clip(P: np.ndarray, pad: float) -> tuple[float, float, float, float]:
    lo, hi = P.min(axis=0), P.max(axis=0)
    w = float(max(hi - lo)) + pad
    return (float(lo[0] - w), float(lo[1] - w), float(hi[0] + w), float(hi[1] + w))


def voronoi_diagram(P, clip=None, tol: float = 1e-9) -> VoronoiDiagram:
    """Voronoi regions by half-plane clipping of ``clip = (xmin, ymin, xmax, ymax)``."""
    P = as_points(P)
    if len(P) == 0:
        raise ValueError("need at least one site")
    if len(np.unique(P, axis=0)) != len(P):
        raise ValueError("duplicate sites")
    if clip is None:
        clip = _default_clip(P, 1.0)
    x0, y0, x1, y1 = clip
    box = np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]], dtype=float)
    tree = cKDTree(P)
    regions = []
    for i, p in enumerate(P):
        poly = box.copy()
        order = tree.query(p, k=len(P))[1] if len(P) > 1 else np.array([0])
        order = np.atleast_1d(order)
        for j in order[1:]:
            q = P[j]
            reach = float(np.max(np.hypot(*(poly - p).T))) if len(poly) else 0.0
            if np.hypot(*(q - p)) / 2.0 > reach:
                break
            n = q - p
            poly = _clip_halfplane(poly, n, float(n @ (p + q) / 2.0))
        regions.append(poly)
    scale = max(1.0, x1 - x0, y1 - y0)
    cand = []
    for poly in regions:
        for v in poly:
            on_box = min(abs(v[0] - x0), abs(v[0] - x1), abs(v[1] - y0), abs(v[1] - y1)) <= tol * scale
            if not on_box:
                cand.append(v)
    verts: list[np.ndarray] = []
    if cand:
        C = np.array(cand)
        C = C[np.lexsort((C[:, 1], C[:, 0]))]
        ct = cKDTree(C)
        taken = np.zeros(len(C), dtype=bool)
        for k in range(len(C)):
            if taken[k]:
                continue
            grp = ct.query_ball_point(C[k], 1e3 * tol * scale)
            taken[grp] = True
            verts.append(C[grp].mean(axis=0))
    vertices = tuple(sorted(Point(float(v[0]), float(v[1])) for v in verts))
    sites = tuple(Point(float(x), float(y)) for x, y in P)
    return VoronoiDiagram(sites, tuple(clip), tuple(regions), vertices)


@dataclass(frozen=True)
class SphericalViolation:
    sample: Point
    site: int
    kind: str  # "inner disk leaves region" or "region leaves outer disk"


def check_almost_spherical(P, X, epsilon: float, pitch: float | None = None) -> list[SphericalViolation]:
    """Sampled check of ``D(p,1-eps) ∩ X_eps ⊂ VR(p) ∩ X_eps ⊂ D(p,1+eps)`` for all sites ``p``.

    ``X_eps`` (points within ``eps`` of ``X``) is sampled on a square grid of
    pitch ``eps/4``.
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    P, X = as_points(P), as_points(X)
    h = epsilon / 4.0 if pitch is None else pitch
    lo, hi = X.min(axis=0) - epsilon, X.max(axis=0) + epsilon
    gx = np.arange(math.floor(lo[0] / h), math.ceil(hi[0] / h) + 1) * h
    gy = np.arange(math.floor(lo[1] / h), math.ceil(hi[1] / h) + 1) * h
    G = np.stack(np.meshgrid(gx, gy), axis=-1).reshape(-1, 2)
    dX, _ = cKDTree(X).query(G)
    S = G[dX <= epsilon]
    if len(S) == 0:
        return []
    ptree = cKDTree(P)
    dmin, _ = ptree.query(S)
    out: list[SphericalViolation] = []
    slack = 1e-12
    for k, y in enumerate(S):
        d = np.hypot(*(P - y).T)
        owners = np.flatnonzero(d <= dmin[k] + slack)
        for i in owners:
            if d[i] >= 1.0 + epsilon:
                out.append(SphericalViolation(Point(float(y[0]), float(y[1])), int(i), "region leaves outer disk"))
        for i in np.flatnonzero(d < 1.0 - epsilon):
            if d[i] > dmin[k] + slack:
                out.append(SphericalViolation(Point(float(y[0]), float(y[1])), int(i), "inner disk leaves region"))
    return out


def find_voronoi_vertex_in_disk(P, radius: float, clip=None) -> Point | None:
    """Lexicographically first Voronoi vertex of norm at most ``radius``."""
    P = as_points(P)
    if len(P) < 3:
        return None
    if clip is None:
        clip = _default_clip(P, 2.0 * radius + 1.0)
    vd = voronoi_diagram(P, clip)
    for v in vd.vertices:
        if math.hypot(*v) <= radius:
            return v
    return None


# -- stress run ----------------------------------------------------------------


@dataclass(frozen=True)
class StressResult:
    status: str
    nodes: int
    n_points: int
    n_cells: int
    seconds: float
    certificate: CoverCertificate | None = None
    verified: bool = False


def blocker_stress(spec: BlockerSpec, node_budget: int | None, cfg: PredicateConfig = DEFAULT,
                   backend: str = "bitset") -> StressResult:
    """Run the exact-cover search on the dual arrangement of the net.

    This is a stress test: no cover is expected, and ``"budget"`` only
    means the search was cut off.
    """
    t0 = time.perf_counter()
    net = np.array(hex_epsilon_net(spec, cfg))
    bits, wit = cell_bits(net, 1.0, cfg)
    res: SearchResult = search_bits(bits, len(net), node_budget, backend)
    cert, ok = None, False
    if res.status == "found":
        disks = [Disk(Point(float(wit[i, 0]), float(wit[i, 1])), 1.0) for i in res.rows]
        cert = certificate_from_disks(net, disks, cfg)
        ok = verify_certificate(net, cert, cfg).ok
    return StressResult(res.status, res.nodes, len(net), len(bits), time.perf_counter() - t0, cert, ok)
