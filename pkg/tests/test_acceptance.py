"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line; the lines are printed in the
"acceptance criteria" section of the pytest summary (and immediately with
``-s``).
"""
import math
import os
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import bulldozer_oracle, lattice_area_oracle, sampled_signatures
from unitcover.arrangement import enumerate_cells
from unitcover.blocker import EPS_MAX, BlockerSpec, hex_epsilon_net, radicand
from unitcover.boundary import bulldozer_tmax, classify_triangle_hull, HullCase
from unitcover.cli import main
from unitcover.exact_cover import ExactCoverInstance, brute_force_cover, solve_exact_cover, verify_certificate
from unitcover.geometry import Disk, Point
from unitcover.parametric.areas import H_AREA, RHO_MAX, RHO_STEEP, f, maximize_f, maximize_f_r, region_areas
from unitcover.parametric.lattice import lens_tangent_slopes
from unitcover.parametric.pipeline import SearchFailed, cover_up_to_17

STRESS_REDUCED_BUDGET = int(os.environ.get("UNITCOVER_STRESS_BUDGET", "200"))


def record(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_f_values():
    t0 = time.perf_counter()
    want = {0: (13.928, 1.035), 3: (16.152, 1.028), 4: (16.948, 1.026), 5: (17.766, 1.024)}
    got = {k: maximize_f(k) for k in want}
    f10 = f(1.0, 0)
    dt = time.perf_counter() - t0
    ok = abs(f10 - 10.741) <= 1e-3 and dt < 1.0
    for k, (v, r) in want.items():
        ok &= abs(got[k][0] - v) <= 1e-3 and abs(got[k][1] - r) <= 1e-3
    shown = ", ".join(f"k={k}: {got[k][0]:.3f}@{got[k][1]:.3f}" for k in want)
    record(1, ok, f"f(1,0)={f10:.3f}; {shown}; {dt:.3f} s")


def test_criterion_02_f_r():
    v, r = maximize_f_r()
    record(2, abs(v - 17.082) <= 1e-3 and abs(r - 1.027) <= 1e-3, f"f_r max {v:.4f} @ {r:.4f}")


def test_criterion_03_area_oracle():
    t0 = time.perf_counter()
    worst_r2 = worst_id = 0.0
    for rho in np.linspace(1.0, RHO_MAX, 20):
        a = region_areas(rho)
        _, two = lattice_area_oracle(rho)
        worst_r2 = max(worst_r2, abs(a.R2 - two))
        worst_id = max(worst_id, abs(a.R0 - (H_AREA - math.pi * rho * rho + a.R2)))
    dt = time.perf_counter() - t0
    record(3, worst_r2 < 1e-4 and worst_id < 1e-12 and dt < 30,
           f"max |R2 - integral| = {worst_r2:.2e}, identity residual {worst_id:.1e}, {dt:.1f} s")


def test_criterion_04_net_count():
    t0 = time.perf_counter()
    net = hex_epsilon_net(BlockerSpec(EPS_MAX, 1.5 * (1 + EPS_MAX), (0.035, -0.055)))
    rad = radicand(EPS_MAX)
    dt = time.perf_counter() - t0
    record(4, len(net) == 657 and abs(rad) < 1e-12 and dt < 1, f"{len(net)} points, radicand {rad:.2e}, {dt:.3f} s")


def _adversarial_sets(rng):
    out = []
    for _ in range(10):  # long side, sweep hits points near the base
        v = rng.uniform(1.0, 2.5)
        V = np.array([(-v, 0), (v, 0), (rng.uniform(-v, v), rng.uniform(0.05, 2.5))])
        out.append(np.vstack([V, rng.dirichlet([1, 1, 1], int(rng.integers(1, 15))) @ V]))
    for _ in range(10):  # medium: circumradius just above 1
        R = 1 + rng.uniform(1e-6, 0.2)
        th = np.sort(rng.uniform(0, 2 * math.pi, 3))
        V = R * np.stack([np.cos(th), np.sin(th)], axis=1)
        if max(np.hypot(*(V[i] - V[j])) for i in range(3) for j in range(i)) >= 2:
            continue
        out.append(np.vstack([V, rng.dirichlet([1, 1, 1], int(rng.integers(1, 15))) @ V]))
    for _ in range(10):  # nearly unit circumradius, acute
        th = np.array([0, 2.1, 4.2]) + rng.uniform(-0.3, 0.3, 3)
        V = (1 + rng.uniform(-1e-10, 1e-10)) * np.stack([np.cos(th), np.sin(th)], axis=1)
        out.append(np.vstack([V, rng.dirichlet([1, 1, 1], int(rng.integers(1, 14))) @ V]))
    for _ in range(10):  # thin obtuse and small
        V = np.array([(0, 0), (rng.uniform(0.3, 1.99), 0), (rng.uniform(0, 1), rng.uniform(0.001, 0.3))])
        out.append(np.vstack([V, rng.dirichlet([1, 1, 1], int(rng.integers(1, 14))) @ V]))
    for _ in range(10):  # apex close to the base: the sweep meets the apex first
        v = rng.uniform(1.0, 1.5)
        V = np.array([(-v, 0), (v, 0), (rng.uniform(-0.5, 0.5), rng.uniform(0.1, 0.4))])
        out.append(np.vstack([V, rng.dirichlet([1, 1, 1], int(rng.integers(1, 8))) @ V]))
    while len(out) < 50:
        V = rng.random((3, 2)) * 3
        out.append(np.vstack([V, rng.dirichlet([1, 1, 1], 5) @ V]))
    return out[:50]


def _collinear_sets(rng):
    out = []
    for k in range(30):
        n = int(rng.integers(2, 18))
        d = rng.normal(size=2)
        d /= np.linalg.norm(d)
        s = np.sort(rng.uniform(0, 3 * (k % 5 + 1), n))
        P = rng.normal(size=2) + s[:, None] * d
        if k % 3 == 0:
            P = np.round(P, 1)  # decimal grid: collinear up to rounding
            P = np.unique(P, axis=0)
        out.append(P)
    return out


def test_criterion_05_pipeline_soundness():
    rng = np.random.default_rng(20261014)
    sets = []
    for side in (1, 5, 20):
        for _ in range(140):
            sets.append(rng.random((int(rng.integers(1, 18)), 2)) * side)
    sets += _adversarial_sets(rng) + _collinear_sets(rng)
    sets = [np.unique(X, axis=0) for X in sets]
    t0 = time.perf_counter()
    fails = budget = 0
    for i, X in enumerate(sets):
        try:
            cert = cover_up_to_17(X, seed=i)
        except SearchFailed:
            budget += 1
            continue
        except Exception:  # noqa: BLE001 - any crash is a failure here
            fails += 1
            continue
        fails += not verify_certificate(X, cert).ok
    dt = time.perf_counter() - t0
    rate = budget / len(sets)
    record(5, len(sets) == 500 and fails == 0 and rate < 0.01 and dt < 600,
           f"{len(sets)} sets, {fails} failures, budget exhaustion {rate:.1%}, {dt:.1f} s")


def test_criterion_06_solver_oracle():
    rng = np.random.default_rng(6)
    agree = 0
    for _ in range(1000):
        ncols = int(rng.integers(1, 11))
        nrows = int(rng.integers(0, 26))
        M = rng.random((nrows, ncols)) < rng.uniform(0.1, 0.5)
        inst = ExactCoverInstance.from_matrix(M.reshape(nrows, ncols))
        a = solve_exact_cover(inst)
        b = brute_force_cover(inst)
        agree += (a is None) == (b is None)
    record(6, agree == 1000, f"{agree}/1000 agree on feasibility")


def test_criterion_07_arrangement_oracle():
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    ok = 0
    for _ in range(200):
        n = int(rng.integers(1, 9))
        C = rng.random((n, 2)) * rng.choice([1.0, 2.0, 4.0])
        got = {c.members for c in enumerate_cells([Disk(Point(*c), 1.0) for c in C]).cells}
        ok += got == sampled_signatures(C)
    record(7, ok == 200, f"{ok}/200 instances match the sampling oracle, {time.perf_counter() - t0:.1f} s")


def test_criterion_08_lens_slopes():
    worst = min(lens_tangent_slopes(r, 100).min() for r in np.linspace(1.0, RHO_STEEP, 50))
    at_steep = lens_tangent_slopes(RHO_STEEP, 100).min()
    record(8, worst >= 1 - 1e-9 and abs(at_steep - 1) < 1e-6,
           f"min slope {worst:.12f}, at sqrt6-sqrt2 {at_steep:.12f}")


def test_criterion_09_bulldozer():
    rng = np.random.default_rng(9)
    worst = 0.0
    n = 0
    while n < 200:
        v = rng.uniform(1.0, 3.0)
        V = np.array([(-v, 0.0), (v, 0.0), (rng.uniform(-v, v), rng.uniform(0.2, 3.0))])
        X = np.vstack([V, rng.dirichlet([1, 1, 1], int(rng.integers(1, 8))) @ V])
        if classify_triangle_hull(X).case != HullCase.LONG_SIDE:
            continue
        t, _ = bulldozer_tmax(X, v)
        worst = max(worst, abs(t - bulldozer_oracle(X[3:], v)))
        n += 1
    sweep, _ = bulldozer_tmax([(-2, 0), (2, 0), (-0.5, 3), (-0.25, 1.5), (0.25, 2)])
    record(9, worst < 1e-9 and abs(sweep - 0.5) < 1e-12, f"max deviation {worst:.1e}, reference sweep t_max {sweep}")


def test_criterion_10_blocker_stress_reduced():
    t0 = time.perf_counter()
    code = main(["blocker-stress", "--node-budget", str(STRESS_REDUCED_BUDGET)])
    record(10, code in (2, 3),
           f"SUBSTITUTED: blocker-stress with {STRESS_REDUCED_BUDGET}-node budget exit {code} (not 0), "
           f"{time.perf_counter() - t0:.0f} s; full 1e8-node run is opt-in (UNITCOVER_RUN_STRESS=1)")


@pytest.mark.slow
@pytest.mark.skipif(os.environ.get("UNITCOVER_RUN_STRESS") != "1", reason="1e8-node stress run takes weeks; opt in")
def test_criterion_10_blocker_stress_full():
    code = main(["blocker-stress", "--node-budget", str(10**8)])
    record(10, code in (2, 3), f"blocker-stress with 1e8-node budget exit {code}")
