"""Independent reference computations used by the tests.

None of these call into the code paths they check.
"""
from __future__ import annotations

import itertools
import math

import numpy as np
from scipy import integrate

SQRT3 = math.sqrt(3.0)


# -- lattice area oracle -------------------------------------------------------
# [0, sqrt3) x [0, 2) is a fundamental domain of Z(0,2) + Z(sqrt3,1).  For a
# vertical line at x we intersect it with each nearby disk, sweep the chord
# endpoints, and measure where the coverage count is 0 or >= 2.


def _line_measures(x: float, rho: float) -> tuple[float, float]:
    events = []
    for j in range(-2, 3):
        cx = SQRT3 * j
        dx = x - cx
        if abs(dx) >= rho:
            continue
        h = math.sqrt(rho * rho - dx * dx)
        for i in range(-4, 5):
            cy = j + 2 * i
            lo, hi = cy - h, cy + h
            if hi <= 0 or lo >= 2:
                continue
            events.append((max(lo, 0.0), 1))
            events.append((min(hi, 2.0), -1))
    events.sort()
    zero = two = 0.0
    count, last = 0, 0.0
    for y, d in events:
        if count == 0:
            zero += y - last
        elif count >= 2:
            two += y - last
        count += d
        last = y
    zero += 2.0 - last  # count is back to 0 here
    return zero, two


def lattice_area_oracle(rho: float) -> tuple[float, float]:
    """``(uncovered, doubly covered)`` area per fundamental domain."""
    # breakpoints where the chord structure changes
    pts = sorted({0.0, SQRT3} | {b for j in range(-1, 3) for b in (SQRT3 * j - rho, SQRT3 * j + rho) if 0 < b < SQRT3})
    z = t = 0.0
    for a, b in zip(pts, pts[1:]):
        z += integrate.quad(lambda x: _line_measures(x, rho)[0], a, b, epsabs=1e-12, epsrel=1e-12, limit=200)[0]
        t += integrate.quad(lambda x: _line_measures(x, rho)[1], a, b, epsabs=1e-12, epsrel=1e-12, limit=200)[0]
    return z, t


# -- arrangement oracle --------------------------------------------------------


def sampled_signatures(C, r=1.0, pitch=0.03, angles=720, radii=(1e-3, 1e-5, 1e-7)) -> set[tuple[int, ...]]:
    """Signatures seen on a square grid plus polar micro-grids around every circle crossing."""
    C = np.asarray(C, dtype=float)
    n = len(C)
    lo, hi = C.min(axis=0) - r - pitch, C.max(axis=0) + r + pitch
    gx = np.arange(lo[0], hi[0], pitch)
    gy = np.arange(lo[1], hi[1], pitch)
    S = [np.stack(np.meshgrid(gx, gy), axis=-1).reshape(-1, 2)]
    th = np.linspace(0, 2 * math.pi, angles, endpoint=False)
    ring = np.stack([np.cos(th), np.sin(th)], axis=1)
    for a, b in itertools.combinations(range(n), 2):
        d = float(np.hypot(*(C[b] - C[a])))
        if d == 0 or d >= 2 * r:
            continue
        m = (C[a] + C[b]) / 2
        u = (C[b] - C[a]) / d
        h = math.sqrt(r * r - d * d / 4)
        for p in (m + h * np.array([-u[1], u[0]]), m - h * np.array([-u[1], u[0]])):
            for rad in radii:
                S.append(p + rad * ring)
    S = np.vstack(S)
    d2 = ((S[:, None, :] - C[None, :, :]) ** 2).sum(-1)
    margin = 1e-12
    clear = np.all(np.abs(d2 - r * r) > margin, axis=1)
    inside = (d2 < r * r)[clear]
    sigs = {tuple(np.flatnonzero(row)) for row in inside}
    sigs.discard(())
    return sigs


# -- bulldozer oracle ----------------------------------------------------------


def _dist_to_rect(z, x0, x1, y0, y1) -> float:
    dx = max(x0 - z[0], 0.0, z[0] - x1)
    dy = max(y0 - z[1], 0.0, z[1] - y1)
    return math.hypot(dx, dy)


def bulldozer_oracle(points, v: float, t_low: float = -10.0, iters: int = 200) -> float:
    """Binary search for the first height at which the swept stadium meets a point.

    The region swept from ``t_low`` to ``t`` by unit disks centered on
    ``[-(v-1), v-1] x {t'}`` is the unit neighbourhood of a rectangle.
    """
    w = v - 1.0

    def hit(t):
        return any(_dist_to_rect(p, -w, w, t_low, t) < 1.0 for p in points)

    lo, hi = t_low, 50.0
    assert not hit(lo) and hit(hi)
    for _ in range(iters):
        mid = (lo + hi) / 2
        if hit(mid):
            hi = mid
        else:
            lo = mid
    return hi


# -- exact cover brute force ---------------------------------------------------


def all_exact_covers(rows, ncols) -> list[tuple[int, ...]]:
    """Every subset of rows forming an exact cover (exponential, tiny inputs only)."""
    out = []
    for k in range(len(rows) + 1):
        for sub in itertools.combinations(range(len(rows)), k):
            cnt = [0] * ncols
            for i in sub:
                for c in rows[i]:
                    cnt[c] += 1
            if all(x == 1 for x in cnt):
                out.append(sub)
    return out


# -- blocker net oracle --------------------------------------------------------


def net_count_oracle(epsilon, R, offset, dps=60) -> int:
    """Count lattice points in the closed disk by a wide index scan in mpmath."""
    import mpmath

    with mpmath.workdps(dps):
        e = mpmath.mpf(epsilon)
        s = e * mpmath.sqrt(3) / 2
        ox, oy = mpmath.mpf(offset[0]), mpmath.mpf(offset[1])
        rr = (mpmath.mpf(R) + e) ** 2
        lim = int(mpmath.ceil((mpmath.mpf(R) + e + 1) / s)) + 3
        n = 0
        for j in range(-lim, lim + 1):
            x = s * mpmath.sqrt(3) * j + ox
            if x * x > rr:
                continue
            for i in range(-2 * lim, 2 * lim + 1):
                y = s * (2 * i + j) + oy
                if x * x + y * y <= rr:
                    n += 1
        return n
