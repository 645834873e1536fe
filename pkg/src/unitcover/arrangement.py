"""Cells of a disk arrangement, one witness per distinct membership set.

Rather than building the full face structure we generate candidate witness
points (disk centers, the four sectors around every circle crossing, and a
point just inside the bottom of every circle) and keep one candidate per
distinct strict-membership signature.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from . import kernels
from .geometry import DEFAULT, Disk, Point, PredicateConfig, disks_to_arrays, points_in_disks

MAX_DELTA = 1e-6


@dataclass(frozen=True)
class CellSignature:
    members: tuple[int, ...]
    witness: Point


@dataclass(frozen=True)
class CellArrangement:
    disks: tuple[Disk, ...]
    cells: tuple[CellSignature, ...]


def _pair_intersections(C: np.ndarray, r: np.ndarray, cfg: PredicateConfig):
    """All crossing points of circle pairs, vectorized.

    Returns ``(pts, i, j, tangent)`` with one row per intersection point.
    """
    n = len(C)
    if n < 2:
        e = np.zeros(0, dtype=np.int64)
        return np.zeros((0, 2)), e, e, np.zeros(0, dtype=bool)
    if n > 64:
        tree = cKDTree(C)
        pairs = tree.query_pairs(2.0 * float(r.max()) + 1e-9, output_type="ndarray")
        I, J = pairs[:, 0], pairs[:, 1]
    else:
        I, J = np.triu_indices(n, 1)
    d_vec = C[J] - C[I]
    d = np.hypot(d_vec[:, 0], d_vec[:, 1])
    r1, r2 = r[I], r[J]
    scale = cfg.tolerance * np.maximum(1.0, r1 + r2)
    ok = (d <= r1 + r2 + scale) & (d >= np.abs(r1 - r2) - scale) & (d > 0)
    I, J, d_vec, d, r1, r2, scale = I[ok], J[ok], d_vec[ok], d[ok], r1[ok], r2[ok], scale[ok]
    a = (r1 * r1 - r2 * r2 + d * d) / (2 * d)
    u = d_vec / d[:, None]
    m = C[I] + a[:, None] * u
    tangent = (np.abs(d - (r1 + r2)) <= scale) | (np.abs(d - np.abs(r1 - r2)) <= scale)
    h = np.sqrt(np.maximum(r1 * r1 - a * a, 0.0))
    h[tangent] = 0.0
    perp = np.stack([-u[:, 1], u[:, 0]], axis=1)
    p1 = m + h[:, None] * perp
    p2 = m - h[:, None] * perp
    cross = ~tangent
    pts = np.vstack([p1, p2[cross]])
    ii = np.concatenate([I, I[cross]])
    jj = np.concatenate([J, J[cross]])
    tg = np.concatenate([tangent, tangent[cross]])
    return pts, ii, jj, tg


def candidate_witnesses(C: np.ndarray, r: np.ndarray, cfg: PredicateConfig = DEFAULT):
    pts, I, J, tangent = _pair_intersections(C, r, cfg)
    feature = np.vstack([C, pts])
    if len(feature) >= 2:
        tree = cKDTree(feature)
        dist, _ = tree.query(feature, k=min(len(feature), 8))
        pos = dist[:, 1:][dist[:, 1:] > 0]
        s = float(pos.min()) if pos.size else np.inf
    else:
        s = np.inf
    delta = min(MAX_DELTA, s / 4.0)
    cands = [C, np.stack([C[:, 0], C[:, 1] - r + delta], axis=1)]
    if len(pts):
        n1 = (pts - C[I]) / r[I][:, None]
        n2 = (pts - C[J]) / r[J][:, None]
        dirs = [n1 + n2, -(n1 + n2), n1 - n2, -(n1 - n2)]
        for dv in dirs:
            norm = np.hypot(dv[:, 0], dv[:, 1])
            # tangent contacts have n1 = +-n2; use the common tangent direction
            bad = norm < 1e-12
            if bad.any():
                dv = np.where(bad[:, None], np.stack([-n1[:, 1], n1[:, 0]], axis=1), dv)
                norm = np.hypot(dv[:, 0], dv[:, 1])
            cands.append(pts + delta * dv / norm[:, None])
        if tangent.any():
            tpts, tn = pts[tangent], n1[tangent]
            tt = np.stack([-tn[:, 1], tn[:, 0]], axis=1)
            for sgn in (1.0, -1.0):
                cands.append(tpts + sgn * delta * tn)
                cands.append(tpts + sgn * delta * tt)
    return np.vstack(cands), delta


def cell_bits(C, r, cfg: PredicateConfig = DEFAULT):
    """Distinct nonempty membership bitsets and one witness each.

    Rows keep the order in which their first witness was generated, which
    is deterministic for a given input.
    """
    C = np.asarray(C, dtype=float).reshape(-1, 2)
    r = np.broadcast_to(np.asarray(r, dtype=float), (len(C),)).copy()
    cands, _ = candidate_witnesses(C, r, cfg)
    bits, amb = kernels.disk_signatures(cands, C, r, cfg.tolerance)
    if amb.any():
        idx = np.nonzero(amb)[0]
        exact = points_in_disks(cands[idx], C, r, cfg)
        bits[idx] = kernels._pack_bool(exact)
    nonempty = np.any(bits != 0, axis=1)
    bits, cands = bits[nonempty], cands[nonempty]
    keys = np.ascontiguousarray(bits[:, ::-1])
    _, first = np.unique(keys.view([("", keys.dtype)] * keys.shape[1]).ravel(), return_index=True)
    first = np.sort(first)
    return bits[first], cands[first]


def bits_to_members(bits: np.ndarray, n: int) -> list[tuple[int, ...]]:
    u8 = np.ascontiguousarray(bits).view(np.uint8)
    mat = np.unpackbits(u8, axis=1, bitorder="little")[:, :n]
    return [tuple(int(v) for v in np.flatnonzero(row)) for row in mat]


def enumerate_cells(disks: Sequence[Disk], cfg: PredicateConfig = DEFAULT) -> CellArrangement:
    disks = tuple(disks)
    if not disks:
        raise ValueError("need at least one disk")
    if len(set(disks)) != len(disks):
        raise ValueError("duplicate disk")
    C, r = disks_to_arrays(disks)
    bits, wit = cell_bits(C, r, cfg)
    members = bits_to_members(bits, len(disks))
    order = sorted(range(len(members)), key=lambda k: members[k])
    cells = tuple(CellSignature(members[k], Point(float(wit[k, 0]), float(wit[k, 1]))) for k in order)
    return CellArrangement(disks, cells)


def incidence_matrix(arr: CellArrangement) -> np.ndarray:
    M = np.zeros((len(arr.cells), len(arr.disks)), dtype=np.uint8)
    for i, cell in enumerate(arr.cells):
        M[i, list(cell.members)] = 1
    return M
