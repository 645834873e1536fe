"""Exact cover search, certificates and the point-set reduction.

The main solver is dancing links with the minimum-remaining-values column
rule.  Ties go to the lowest column index and rows are tried in increasing
index order, so the first solution found is deterministic.  A bitset
Algorithm X kernel in :mod:`unitcover.kernels` follows the same branching
order and is used for large instances.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .arrangement import enumerate_cells
from .geometry import DEFAULT, Disk, Point, PredicateConfig, as_points, disks_to_arrays, points_in_disks

BRUTE_FORCE_MAX_ROWS = 25


class BudgetExceeded(RuntimeError):
    """The node budget ran out before the search finished."""

    def __init__(self, nodes: int):
        super().__init__(f"budget exceeded after {nodes} nodes")
        self.nodes = nodes


@dataclass(frozen=True)
class ExactCoverInstance:
    """Rows are sorted tuples of column indices in ``range(ncols)``."""

    rows: tuple[tuple[int, ...], ...]
    ncols: int

    @classmethod
    def from_matrix(cls, matrix) -> "ExactCoverInstance":
        M = np.asarray(matrix)
        if M.ndim != 2:
            raise ValueError("matrix must be 2-dimensional")
        rows = tuple(tuple(int(c) for c in np.flatnonzero(r)) for r in M)
        return cls(rows, M.shape[1])

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], ncols: int | None = None) -> "ExactCoverInstance":
        rows = tuple(tuple(sorted(set(int(c) for c in r))) for r in rows)
        if ncols is None:
            ncols = 1 + max((r[-1] for r in rows if r), default=-1)
        for r in rows:
            if r and (r[0] < 0 or r[-1] >= ncols):
                raise ValueError("column index out of range")
        return cls(rows, ncols)

    def csr(self):
        lengths = np.fromiter((len(r) for r in self.rows), dtype=np.int64, count=len(self.rows))
        indptr = np.zeros(len(self.rows) + 1, dtype=np.int64)
        np.cumsum(lengths, out=indptr[1:])
        indices = np.fromiter((c for r in self.rows for c in r), dtype=np.int64, count=int(indptr[-1]))
        return indptr, indices

    def bits(self) -> np.ndarray:
        M = np.zeros((len(self.rows), self.ncols), dtype=bool)
        for i, r in enumerate(self.rows):
            M[i, list(r)] = True
        return kernels._pack_bool(M)


@dataclass(frozen=True)
class SearchResult:
    status: str  # "found", "infeasible" or "budget"
    rows: tuple[int, ...] | None
    nodes: int


# -- dancing links ---------------------------------------------------------


class _Links:
    """Array-backed toroidal lists; index 0 is the root, 1..n the column headers."""

    def __init__(self, inst: ExactCoverInstance):
        n = inst.ncols
        self.L = list(range(-1, n))
        self.R = list(range(1, n + 2))
        self.L[0], self.R[n] = n, 0
        self.U = list(range(n + 1))
        self.D = list(range(n + 1))
        self.C = list(range(n + 1))
        self.S = [0] * (n + 1)
        self.row = [-1] * (n + 1)
        for ri, cols in enumerate(inst.rows):
            first = -1
            for c in cols:
                h = c + 1
                x = len(self.C)
                self.C.append(h)
                self.row.append(ri)
                self.U.append(self.U[h])
                self.D.append(h)
                self.D[self.U[h]] = x
                self.U[h] = x
                self.S[h] += 1
                if first < 0:
                    first = x
                    self.L.append(x)
                    self.R.append(x)
                else:
                    self.L.append(self.L[first])
                    self.R.append(first)
                    self.R[self.L[first]] = x
                    self.L[first] = x

    def cover(self, h):
        L, R, U, D, C, S = self.L, self.R, self.U, self.D, self.C, self.S
        R[L[h]] = R[h]
        L[R[h]] = L[h]
        i = D[h]
        while i != h:
            j = R[i]
            while j != i:
                D[U[j]] = D[j]
                U[D[j]] = U[j]
                S[C[j]] -= 1
                j = R[j]
            i = D[i]

    def uncover(self, h):
        L, R, U, D, C, S = self.L, self.R, self.U, self.D, self.C, self.S
        i = U[h]
        while i != h:
            j = L[i]
            while j != i:
                S[C[j]] += 1
                D[U[j]] = j
                U[D[j]] = j
                j = L[j]
            i = U[i]
        R[L[h]] = h
        L[R[h]] = h

    def choose(self):
        R, S = self.R, self.S
        h = R[0]
        best, size = h, S[h]
        h = R[h]
        while h != 0:
            if S[h] < size:
                best, size = h, S[h]
            h = R[h]
        return best


def _dlx(inst: ExactCoverInstance, budget: int | None) -> SearchResult:
    lk = _Links(inst)
    R, D, C = lk.R, lk.D, lk.C
    if R[0] == 0:
        return SearchResult("found", (), 0)
    nodes = 0
    stack: list[int] = []  # chosen row node per depth
    descend = True
    while True:
        if descend:
            if R[0] == 0:
                return SearchResult("found", tuple(sorted(lk.row[x] for x in stack)), nodes)
            h = lk.choose()
            if lk.S[h] == 0:
                descend = False
                continue
            lk.cover(h)
            x = D[h]
        else:
            if not stack:
                return SearchResult("infeasible", None, nodes)
            x = stack.pop()
            j = lk.L[x]
            while j != x:
                lk.uncover(C[j])
                j = lk.L[j]
            h = C[x]
            x = D[x]
            if x == h:
                lk.uncover(h)
                continue
        nodes += 1
        if budget is not None and nodes > budget:
            return SearchResult("budget", None, nodes)
        stack.append(x)
        j = R[x]
        while j != x:
            lk.cover(C[j])
            j = R[j]
        descend = True


def _bitset(inst: ExactCoverInstance, budget: int | None) -> SearchResult:
    if inst.ncols == 0:
        return SearchResult("found", (), 0)
    if not inst.rows:
        return SearchResult("infeasible", None, 0)
    indptr, indices = inst.csr()
    status, sel, nodes = kernels.algox(indptr, indices, inst.bits(), inst.ncols, -1 if budget is None else budget)
    if status == kernels.FOUND:
        return SearchResult("found", tuple(sel), nodes)
    if status == kernels.BUDGET:
        return SearchResult("budget", None, nodes)
    return SearchResult("infeasible", None, nodes)


def search_bits(bits: np.ndarray, ncols: int, node_budget: int | None = None, backend: str = "bitset") -> SearchResult:
    """Search rows given as packed ``uint64`` bitsets (one row per line of ``bits``).

    Avoids the tuple representation for very large instances.
    """
    if node_budget is not None and node_budget < 0:
        raise ValueError("node budget must be nonnegative")
    if backend != "bitset":
        M = np.unpackbits(bits.view(np.uint8), axis=1, bitorder="little")[:, :ncols]
        return search(ExactCoverInstance.from_matrix(M), node_budget, backend)
    if ncols == 0:
        return SearchResult("found", (), 0)
    if len(bits) == 0:
        return SearchResult("infeasible", None, 0)
    M = np.unpackbits(np.ascontiguousarray(bits).view(np.uint8), axis=1, bitorder="little")[:, :ncols]
    r, c = np.nonzero(M)
    indptr = np.zeros(len(bits) + 1, dtype=np.int64)
    np.cumsum(np.bincount(r, minlength=len(bits)), out=indptr[1:])
    del M
    budget = -1 if node_budget is None else node_budget
    status, sel, nodes = kernels.algox(indptr, c.astype(np.int64), np.ascontiguousarray(bits), ncols, budget)
    if status == kernels.FOUND:
        return SearchResult("found", tuple(int(s) for s in sel), int(nodes))
    if status == kernels.BUDGET:
        return SearchResult("budget", None, int(nodes))
    return SearchResult("infeasible", None, int(nodes))


def search(inst: ExactCoverInstance, node_budget: int | None = None, backend: str = "dlx") -> SearchResult:
    """Run the search and report status and node count without raising."""
    if node_budget is not None and node_budget < 0:
        raise ValueError("node budget must be nonnegative")
    if backend == "dlx":
        return _dlx(inst, node_budget)
    if backend == "bitset":
        return _bitset(inst, node_budget)
    raise ValueError(f"unknown backend {backend!r}")


def solve_exact_cover(
    inst: ExactCoverInstance, node_budget: int | None = None, backend: str = "dlx"
) -> tuple[int, ...] | None:
    """Selected row indices (sorted), or ``None`` when no exact cover exists.

    Raises :class:`BudgetExceeded` if ``node_budget`` row selections are
    used up first; a node is one row selection.
    """
    res = search(inst, node_budget, backend)
    if res.status == "budget":
        raise BudgetExceeded(res.nodes)
    return res.rows


def brute_force_cover(inst: ExactCoverInstance) -> tuple[int, ...] | None:
    """Reference solver: walk all pairwise-disjoint row subsets in index order."""
    n = len(inst.rows)
    if n > BRUTE_FORCE_MAX_ROWS:
        raise ValueError("oracle limit")
    masks = [sum(1 << c for c in r) for r in inst.rows]
    full = (1 << inst.ncols) - 1
    chosen: list[int] = []

    def rec(i: int, used: int):
        if used == full:
            return tuple(chosen)
        if i == n:
            return None
        if masks[i] and not masks[i] & used:
            chosen.append(i)
            got = rec(i + 1, used | masks[i])
            chosen.pop()
            if got is not None:
                return got
        return rec(i + 1, used)

    return rec(0, 0)


# -- certificates ----------------------------------------------------------


@dataclass(frozen=True)
class CoverCertificate:
    disks: tuple[Disk, ...]
    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "disks", tuple(self.disks))
        object.__setattr__(self, "assignment", tuple(int(a) for a in self.assignment))


@dataclass(frozen=True)
class Violation:
    point: int
    disk: int
    kind: str  # "outside assigned", "also inside", "bad index"


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    def __bool__(self):
        return self.ok


def verify_certificate(X, cert: CoverCertificate, cfg: PredicateConfig = DEFAULT) -> VerificationReport:
    X = as_points(X)
    out: list[Violation] = []
    if len(cert.assignment) != len(X):
        raise ValueError("assignment must list one disk per point")
    m = len(cert.disks)
    if m == 0:
        return VerificationReport(len(X) == 0, tuple(Violation(i, -1, "bad index") for i in range(len(X))))
    C, r = disks_to_arrays(cert.disks)
    inside = points_in_disks(X, C, r, cfg)
    for i, a in enumerate(cert.assignment):
        if not 0 <= a < m:
            out.append(Violation(i, a, "bad index"))
            continue
        if not inside[i, a]:
            out.append(Violation(i, a, "outside assigned"))
        for j in np.flatnonzero(inside[i]):
            if j != a:
                out.append(Violation(i, int(j), "also inside"))
    return VerificationReport(not out, tuple(out))


def certificate_from_disks(X, disks: Sequence[Disk], cfg: PredicateConfig = DEFAULT) -> CoverCertificate:
    """Assign each point to the first disk containing it (``-1`` if none)."""
    X = as_points(X)
    if not disks:
        return CoverCertificate((), (-1,) * len(X))
    C, r = disks_to_arrays(disks)
    inside = points_in_disks(X, C, r, cfg)
    assign = [int(np.argmax(row)) if row.any() else -1 for row in inside]
    return CoverCertificate(tuple(disks), tuple(assign))


# -- point instances -------------------------------------------------------


def solve_point_instance(
    X,
    candidate_disks: Sequence[Disk] | None = None,
    cfg: PredicateConfig = DEFAULT,
    node_budget: int | None = None,
    backend: str = "dlx",
) -> CoverCertificate | None:
    """Exact cover of ``X`` by unit disks, or ``None`` if none exists.

    Without ``candidate_disks`` this solves the dual: unit disks around each
    point, one row per arrangement cell, and the selected cells' witnesses
    become disk centers.  Cells are offered largest first so covers use few
    disks.  With ``candidate_disks`` the rows are those disks directly.
    """
    X = as_points(X)
    if len(X) == 0:
        raise ValueError("need at least one point")
    if candidate_disks is not None:
        cands = tuple(candidate_disks)
        if not cands:
            return None
        C, r = disks_to_arrays(cands)
        inside = points_in_disks(X, C, r, cfg)
        inst = ExactCoverInstance.from_matrix(inside.T)
        sel = solve_exact_cover(inst, node_budget, backend)
        if sel is None:
            return None
        disks = tuple(cands[i] for i in sel)
    else:
        arr = enumerate_cells([Disk(Point(float(x), float(y)), 1.0) for x, y in X], cfg)
        order = sorted(range(len(arr.cells)), key=lambda k: (-len(arr.cells[k].members), arr.cells[k].members))
        inst = ExactCoverInstance.from_rows([arr.cells[k].members for k in order], len(X))
        sel = solve_exact_cover(inst, node_budget, backend)
        if sel is None:
            return None
        disks = tuple(Disk(arr.cells[order[i]].witness, 1.0) for i in sel)
    cert = certificate_from_disks(X, disks, cfg)
    rep = verify_certificate(X, cert, cfg)
    if not rep.ok:  # pragma: no cover - witnesses are exact by construction
        raise AssertionError(f"solver produced an invalid certificate: {rep.violations[:3]}")
    return cert
