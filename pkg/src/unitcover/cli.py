"""``unitcover`` command line.

Exit codes: 0 ok, 1 usage or input error, 2 proven infeasible,
3 budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__
from .blocker import (
    CANONICAL_OFFSET,
    EPS_MAX,
    BlockerSpec,
    blocker_min_radius,
    blocker_stress,
    hex_epsilon_net,
    near_boundary_points,
)
from .exact_cover import BudgetExceeded, solve_point_instance, verify_certificate
from .geometry import DEFAULT, DegenerateError, PredicateConfig
from .io import InputError, certificate_to_json, read_certificate, read_points, write_certificate, write_points
from .parametric.areas import integer_bound, maximize_f, maximize_f_r
from .parametric.pipeline import MAX_POINTS, SearchFailed, cover_up_to_17
from .svg import render_svg

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_BUDGET = 0, 1, 2, 3
STRESS_BUDGET = 10**8


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    translation_budget: int = 10**6
    node_budget: int | None = None
    predicates: PredicateConfig = DEFAULT

    def __post_init__(self):
        if self.translation_budget <= 0:
            raise ValueError("translation budget must be positive")
        if self.node_budget is not None and self.node_budget <= 0:
            raise ValueError("node budget must be positive")


def _fail(msg: str, code: int = EXIT_INPUT) -> int:
    print(f"unitcover: {msg}", file=sys.stderr)
    return code


def _run_config(a) -> RunConfig:
    pc = DEFAULT if a.tolerance is None else PredicateConfig(tolerance=a.tolerance)
    return RunConfig(a.seed, a.translation_budget, a.node_budget, pc)


def _emit_certificate(cert, out):
    if out:
        write_certificate(out, cert)
    else:
        json.dump(certificate_to_json(cert), sys.stdout)
        sys.stdout.write("\n")


def cmd_cover(a) -> int:
    cfg = _run_config(a)
    X = read_points(a.input)
    if not X:
        return _fail("empty point set")
    if len(set(X)) != len(X):
        return _fail("duplicate point")
    pc = cfg.predicates
    try:
        if len(X) <= MAX_POINTS and a.backend is None:
            cert = cover_up_to_17(X, seed=cfg.seed, budget=cfg.translation_budget, cfg=pc)
        else:
            cert = solve_point_instance(X, cfg=pc, node_budget=cfg.node_budget, backend=a.backend or "dlx")
    except SearchFailed:
        return _fail("translation budget exhausted", EXIT_BUDGET)
    except BudgetExceeded as e:
        return _fail(f"node budget exhausted after {e.nodes} nodes", EXIT_BUDGET)
    if cert is None:
        print("infeasible: no exact cover exists", file=sys.stderr)
        return EXIT_INFEASIBLE
    if not verify_certificate(X, cert, pc).ok:  # pragma: no cover - solvers verify already
        return _fail("internal error: certificate failed verification", EXIT_INPUT)
    _emit_certificate(cert, a.output)
    print(f"{len(cert.disks)} disks cover {len(X)} points", file=sys.stderr)
    return EXIT_OK


def cmd_fmax(a) -> int:
    if a.k < 0:
        return _fail("k must be nonnegative")
    v, rho = maximize_f(a.k)
    b = integer_bound(v)
    print(f"fmax {v:.6f}")
    print(f"rho {rho:.6f}")
    print(f"bound {b} = {b - a.k} + k")
    return EXIT_OK


def cmd_fr(a) -> int:
    v, rho = maximize_f_r()
    print(f"fr_max {v:.6f}")
    print(f"rho {rho:.6f}")
    return EXIT_OK


def _blocker_spec(a) -> BlockerSpec:
    blocker_min_radius(a.epsilon)  # range check only
    R = a.R if a.R is not None else 1.5 * (1.0 + a.epsilon)
    return BlockerSpec(a.epsilon, R, tuple(a.offset))


def cmd_blocker_net(a) -> int:
    spec = _blocker_spec(a)
    pc = DEFAULT if a.tolerance is None else PredicateConfig(tolerance=a.tolerance)
    if not spec.satisfies_bound():
        print(f"note: R = {spec.R} is below the minimal blocker radius", file=sys.stderr)
    net = hex_epsilon_net(spec, pc)
    if a.output:
        write_points(a.output, net)
    print(f"count {len(net)}")
    flagged = near_boundary_points(spec)
    print(f"boundary-grazing {len(flagged)}")
    for p, gap in flagged:
        print(f"  {p.x!r} {p.y!r} gap {gap:+.3e}")
    return EXIT_OK


def cmd_blocker_stress(a) -> int:
    spec = _blocker_spec(a)
    pc = DEFAULT if a.tolerance is None else PredicateConfig(tolerance=a.tolerance)
    res = blocker_stress(spec, a.node_budget, pc, a.backend)
    print(f"net {res.n_points} points, {res.n_cells} cells")
    print(f"status {res.status} after {res.nodes} nodes in {res.seconds:.1f} s")
    if res.status == "found":
        if not res.verified:  # pragma: no cover
            return _fail("internal error: cover failed verification")
        if a.output:
            write_certificate(a.output, res.certificate)
        return EXIT_OK
    return EXIT_INFEASIBLE if res.status == "infeasible" else EXIT_BUDGET


def cmd_verify(a) -> int:
    X = read_points(a.points)
    cert = read_certificate(a.certificate)
    pc = DEFAULT if a.tolerance is None else PredicateConfig(tolerance=a.tolerance)
    rep = verify_certificate(X, cert, pc)
    if rep.ok:
        print(f"ok: {len(cert.disks)} disks, {len(X)} points")
        return EXIT_OK
    for v in rep.violations:
        print(f"point {v.point} disk {v.disk}: {v.kind}")
    return EXIT_INPUT


def cmd_plot(a) -> int:
    X = read_points(a.input) if a.input else []
    disks = read_certificate(a.certificate).disks if a.certificate else ()
    if not X and not disks:
        return _fail("empty point set")
    lattice = (a.lattice, tuple(a.translation)) if a.lattice is not None else None
    if lattice and not 0 < a.lattice:
        return _fail("lattice radius must be positive")
    svg = render_svg(X, disks, lattice)
    with open(a.output, "w") as fh:
        fh.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unitcover", description="Exact covers of planar points by unit disks.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def tol(p):
        p.add_argument("--tolerance", type=float, default=None,
                       help="predicate tolerance (default: UNITCOVER_TOLERANCE or 1e-9)")

    p = sub.add_parser("cover", help="construct a verified exact cover")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--translation-budget", type=int, default=10**6)
    p.add_argument("--node-budget", type=int, default=None)
    p.add_argument("--backend", choices=["dlx", "bitset"], default=None,
                   help="force the generic dual solver with this backend")
    tol(p)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("fmax", help="maximum of f(., k) and the integer bound")
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_fmax)

    p = sub.add_parser("fr", help="maximum of the refined density")
    p.set_defaults(func=cmd_fr)

    def blocker_args(p):
        p.add_argument("--epsilon", type=float, default=EPS_MAX)
        p.add_argument("--R", type=float, default=None, help="default (3/2)(1 + epsilon)")
        p.add_argument("--offset", type=float, nargs=2, default=list(CANONICAL_OFFSET), metavar=("X", "Y"))
        p.add_argument("-o", "--output")
        tol(p)

    p = sub.add_parser("blocker-net", help="hexagonal epsilon-net of the blocker disk")
    blocker_args(p)
    p.set_defaults(func=cmd_blocker_net)

    p = sub.add_parser("blocker-stress", help="long-running exact-cover search on the blocker net")
    blocker_args(p)
    p.add_argument("--node-budget", type=int, default=STRESS_BUDGET)
    p.add_argument("--backend", choices=["dlx", "bitset"], default="bitset")
    p.set_defaults(func=cmd_blocker_stress)

    p = sub.add_parser("verify", help="check a certificate against a point file")
    p.add_argument("points")
    p.add_argument("certificate")
    tol(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="render points, disks and a lattice overlay to SVG")
    p.add_argument("input", nargs="?")
    p.add_argument("--certificate")
    p.add_argument("--lattice", type=float, default=None, metavar="RHO")
    p.add_argument("--translation", type=float, nargs=2, default=[0.0, 0.0], metavar=("X", "Y"))
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    try:
        return a.func(a)
    except (InputError, DegenerateError, ValueError, OSError) as e:
        return _fail(str(e))


if __name__ == "__main__":
    sys.exit(main())
