"""Hot numeric kernels.

Every kernel has a jitted loop implementation and a vectorized numpy
implementation with identical results; ``_accel.USE_NUMBA`` picks which one
the public name binds to.  Both variants stay importable (``*_numba`` /
``*_numpy``) so the benchmark and the equivalence tests can run them side
by side.
"""
from __future__ import annotations

import math

import numpy as np

from . import _accel
from ._accel import njit

SQRT3 = math.sqrt(3.0)

# region codes returned by classify_translations
R0, R1, R21, R22, R3, AMBIGUOUS = 0, 1, 2, 3, 4, -1

# lattice offsets (i along (0,2), j along (sqrt3,1)) checked around the floor cell
_OFFS = np.array([(i, j) for i in range(-1, 3) for j in range(-1, 3)], dtype=np.int64)


def n_words(n: int) -> int:
    return max(1, (n + 63) // 64)


# -- membership signatures ----------------------------------------------


@njit(cache=True)
def _signatures_loop(P, C, r2, tol):
    m = P.shape[0]
    n = C.shape[0]
    W = max(1, (n + 63) // 64)
    bits = np.zeros((m, W), dtype=np.uint64)
    amb = np.zeros(m, dtype=np.bool_)
    for i in range(m):
        px = P[i, 0]
        py = P[i, 1]
        for j in range(n):
            dx = px - C[j, 0]
            dy = py - C[j, 1]
            v = dx * dx + dy * dy - r2[j]
            if v < 0.0:
                bits[i, j >> 6] |= np.uint64(1) << np.uint64(j & 63)
            if abs(v) <= tol * (1.0 + r2[j]):
                amb[i] = True
    return bits, amb


def _pack_bool(inside: np.ndarray) -> np.ndarray:
    m, n = inside.shape
    W = n_words(n)
    pad = np.zeros((m, W * 64), dtype=bool)
    pad[:, :n] = inside
    packed = np.packbits(pad, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def _radii_sq(C, r):
    return np.ascontiguousarray(np.broadcast_to(np.asarray(r, dtype=np.float64), (len(C),)) ** 2)


def disk_signatures_numba(P, C, r, tol):
    """Bit-packed strict membership of points ``P`` in disks ``(C, r)``.

    Returns ``(bits, ambiguous)``; ``ambiguous[i]`` flags points within the
    tolerance band of some circle, which callers must recheck exactly.
    """
    P = np.ascontiguousarray(P, dtype=np.float64).reshape(-1, 2)
    C = np.ascontiguousarray(C, dtype=np.float64).reshape(-1, 2)
    return _signatures_loop(P, C, _radii_sq(C, r), float(tol))


def disk_signatures_numpy(P, C, r, tol, chunk=4096):
    P = np.asarray(P, dtype=np.float64).reshape(-1, 2)
    C = np.asarray(C, dtype=np.float64).reshape(-1, 2)
    r2 = _radii_sq(C, r)
    band = tol * (1.0 + r2)
    out_bits = []
    out_amb = []
    step = max(1, chunk * 64 // max(1, len(C)))
    for s in range(0, len(P), step):
        blk = P[s:s + step]
        d = blk[:, None, :] - C[None, :, :]
        v = np.einsum("ijk,ijk->ij", d, d) - r2
        out_bits.append(_pack_bool(v < 0))
        out_amb.append(np.any(np.abs(v) <= band, axis=1))
    if not out_bits:
        return np.zeros((0, n_words(len(C))), dtype=np.uint64), np.zeros(0, dtype=bool)
    return np.vstack(out_bits), np.concatenate(out_amb)


# -- lattice translation classification ---------------------------------


@njit(cache=True)
def _classify_loop(T, Z, rho, margin, offs):
    k = T.shape[0]
    n = Z.shape[0]
    r2 = rho * rho
    s3 = math.sqrt(3.0)
    codes = np.empty((k, n), dtype=np.int8)
    for a in range(k):
        tx = T[a, 0]
        ty = T[a, 1]
        for p in range(n):
            wx = Z[p, 0] - tx
            wy = Z[p, 1] - ty
            bj = math.floor(wx / s3)
            ai = math.floor((wy - wx / s3) / 2.0)
            cnt = 0
            j_first = 0
            same = True
            amb = False
            for q in range(offs.shape[0]):
                i = ai + offs[q, 0]
                j = bj + offs[q, 1]
                cx = s3 * j
                cy = 2.0 * i + j
                dx = wx - cx
                dy = wy - cy
                v = dx * dx + dy * dy - r2
                if abs(v) <= margin:
                    amb = True
                if v < 0.0:
                    if cnt == 0:
                        j_first = j
                    elif j != j_first:
                        same = False
                    cnt += 1
            if amb:
                codes[a, p] = -1
            elif cnt == 0:
                codes[a, p] = 0
            elif cnt == 1:
                codes[a, p] = 1
            elif cnt == 2:
                codes[a, p] = 3 if same else 2
            else:
                codes[a, p] = 4
    return codes


def classify_translations_numba(T, Z, rho, margin):
    T = np.ascontiguousarray(T, dtype=np.float64).reshape(-1, 2)
    Z = np.ascontiguousarray(Z, dtype=np.float64).reshape(-1, 2)
    return _classify_loop(T, Z, float(rho), float(margin), _OFFS)


def classify_translations_numpy(T, Z, rho, margin):
    T = np.asarray(T, dtype=np.float64).reshape(-1, 2)
    Z = np.asarray(Z, dtype=np.float64).reshape(-1, 2)
    r2 = float(rho) ** 2
    w = Z[None, :, :] - T[:, None, :]  # (k, n, 2)
    bj = np.floor(w[..., 0] / SQRT3)
    ai = np.floor((w[..., 1] - w[..., 0] / SQRT3) / 2.0)
    I = ai[..., None] + _OFFS[:, 0]
    J = bj[..., None] + _OFFS[:, 1]
    dx = w[..., 0][..., None] - SQRT3 * J
    dy = w[..., 1][..., None] - (2.0 * I + J)
    v = dx * dx + dy * dy - r2
    inside = v < 0
    cnt = inside.sum(axis=-1)
    amb = np.any(np.abs(v) <= margin, axis=-1)
    same = np.max(np.where(inside, J, -np.inf), axis=-1) == np.min(np.where(inside, J, np.inf), axis=-1)
    codes = np.where(cnt >= 3, R3, np.where(cnt == 2, np.where(same, R22, R21), cnt)).astype(np.int8)
    codes[amb] = AMBIGUOUS
    return codes


# -- bitset Algorithm X ---------------------------------------------------

FOUND, INFEASIBLE, BUDGET = 1, 0, 2


@njit(cache=True)
def _algox_loop(indptr, indices, bits, ncols, budget):
    R, W = bits.shape
    full = np.zeros(W, dtype=np.uint64)
    for c in range(ncols):
        full[c >> 6] |= np.uint64(1) << np.uint64(c & 63)
    maxd = ncols + 2
    cov = np.zeros((maxd, W), dtype=np.uint64)
    a_start = np.zeros(maxd, dtype=np.int64)
    a_len = np.zeros(maxd, dtype=np.int64)
    col = np.zeros(maxd, dtype=np.int64)
    pos = np.zeros(maxd, dtype=np.int64)
    sel = np.zeros(maxd, dtype=np.int64)
    counts = np.zeros(max(ncols, 1), dtype=np.int64)
    buf = np.empty(max(4 * R, 1024), dtype=np.int64)
    for r in range(R):
        buf[r] = r
    a_len[0] = R
    nodes = 0
    depth = 0
    entering = True
    while True:
        if entering:
            entering = False
            done = True
            for w in range(W):
                if cov[depth, w] != full[w]:
                    done = False
                    break
            if done:
                return FOUND, sel[:depth].copy(), nodes
            for c in range(ncols):
                counts[c] = 0
            s = a_start[depth]
            for q in range(a_len[depth]):
                r = buf[s + q]
                for e in range(indptr[r], indptr[r + 1]):
                    counts[indices[e]] += 1
            best = -1
            bestc = R + 1
            for c in range(ncols):
                if (cov[depth, c >> 6] >> np.uint64(c & 63)) & np.uint64(1):
                    continue
                if counts[c] < bestc:
                    bestc = counts[c]
                    best = c
            if bestc == 0:
                if depth == 0:
                    return INFEASIBLE, sel[:0].copy(), nodes
                depth -= 1
                continue
            col[depth] = best
            pos[depth] = 0
        s = a_start[depth]
        L = a_len[depth]
        c = col[depth]
        wc = c >> 6
        mc = np.uint64(1) << np.uint64(c & 63)
        p = pos[depth]
        row = -1
        while p < L:
            r = buf[s + p]
            p += 1
            if bits[r, wc] & mc:
                row = r
                break
        pos[depth] = p
        if row < 0:
            if depth == 0:
                return INFEASIBLE, sel[:0].copy(), nodes
            depth -= 1
            continue
        nodes += 1
        if budget >= 0 and nodes > budget:
            return BUDGET, sel[:0].copy(), nodes
        sel[depth] = row
        ns = s + L
        if ns + L > buf.shape[0]:
            nb = np.empty(2 * (ns + L), dtype=np.int64)
            nb[:ns] = buf[:ns]
            buf = nb
        cnt = 0
        for q in range(L):
            r2 = buf[s + q]
            ok = True
            for w in range(W):
                if bits[r2, w] & bits[row, w]:
                    ok = False
                    break
            if ok:
                buf[ns + cnt] = r2
                cnt += 1
        for w in range(W):
            cov[depth + 1, w] = cov[depth, w] | bits[row, w]
        a_start[depth + 1] = ns
        a_len[depth + 1] = cnt
        depth += 1
        entering = True


def algox_numba(indptr, indices, bits, ncols, budget=-1):
    status, sel, nodes = _algox_loop(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(bits, dtype=np.uint64),
        int(ncols),
        int(budget),
    )
    return int(status), sorted(int(v) for v in sel), int(nodes)


def algox_numpy(indptr, indices, bits, ncols, budget=-1):
    bits = np.asarray(bits, dtype=np.uint64)
    R, W = bits.shape
    row_of = np.repeat(np.arange(R), np.diff(indptr))
    full = np.zeros(W, dtype=np.uint64)
    for c in range(ncols):
        full[c >> 6] |= np.uint64(1) << np.uint64(c & 63)
    col_ids = np.arange(ncols)
    col_word, col_mask = col_ids >> 6, np.left_shift(np.uint64(1), (col_ids & 63).astype(np.uint64))
    nodes = 0
    # explicit stack of (active rows, covered mask, chosen column, candidate rows, cursor)
    active = np.arange(R)
    cov = np.zeros(W, dtype=np.uint64)
    stack = []
    sel: list[int] = []

    def choose(active, cov):
        if np.array_equal(cov, full):
            return "done", None
        sel_rows = np.isin(row_of, active)
        counts = np.bincount(np.asarray(indices)[sel_rows], minlength=ncols)
        uncovered = (cov[col_word] & col_mask) == 0
        counts = np.where(uncovered, counts, R + 1)
        c = int(np.argmin(counts))
        if counts[c] == 0:
            return "dead", None
        cand = active[(bits[active, c >> 6] & (np.uint64(1) << np.uint64(c & 63))) != 0]
        return "branch", cand

    state, cand = choose(active, cov)
    if state == "done":
        return FOUND, [], 0
    if state == "dead":
        return INFEASIBLE, [], 0
    stack.append([active, cov, cand, 0])
    while stack:
        frame = stack[-1]
        active, cov, cand, cur = frame
        if cur >= len(cand):
            stack.pop()
            if sel:
                sel.pop()
            continue
        row = int(cand[cur])
        frame[3] = cur + 1
        nodes += 1
        if budget >= 0 and nodes > budget:
            return BUDGET, [], nodes
        child = active[~np.any(bits[active] & bits[row], axis=1)]
        ccov = cov | bits[row]
        state, ccand = choose(child, ccov)
        if state == "done":
            return FOUND, sorted(sel + [row]), nodes
        if state == "dead":
            continue
        sel.append(row)
        stack.append([child, ccov, ccand, 0])
    return INFEASIBLE, [], nodes


if _accel.USE_NUMBA:
    disk_signatures = disk_signatures_numba
    classify_translations = classify_translations_numba
    algox = algox_numba
else:
    disk_signatures = disk_signatures_numpy
    classify_translations = classify_translations_numpy
    algox = algox_numpy
