"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Both variants are imported from ``unitcover.kernels`` directly, so the
``UNITCOVER_DISABLE_NUMBA`` flag does not matter here.  The first numba call
is excluded (compilation).
"""
import argparse
import time

import numpy as np

from unitcover import kernels
from unitcover.arrangement import cell_bits
from unitcover.blocker import BlockerSpec, hex_epsilon_net
from unitcover.exact_cover import ExactCoverInstance


def best_of(fn, repeat):
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return min(ts)


def _same(a, b):
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def cases(rng):
    # witness signatures on the blocker net
    net = np.array(hex_epsilon_net(BlockerSpec.canonical()))
    P = net[rng.choice(len(net), 20000)] + rng.normal(0, 0.3, (20000, 2))
    r = np.ones(len(net))
    yield "disk_signatures (20k x 657)", kernels.disk_signatures_numba, kernels.disk_signatures_numpy, (P, net, r, 1e-9)

    T = rng.random((8192, 2)) @ np.array([[0.0, 2.0], [np.sqrt(3), 1.0]])
    Z = rng.random((17, 2)) * 6
    yield "classify_translations (8192 x 17)", kernels.classify_translations_numba, kernels.classify_translations_numpy, (T, Z, 1.0275, 1e-9)

    X = rng.random((40, 2)) * 4
    bits, _ = cell_bits(X, 1.0)
    M = np.unpackbits(bits.view(np.uint8), axis=1, bitorder="little")[:, : len(X)]
    inst = ExactCoverInstance.from_matrix(M)
    indptr, indices = inst.csr()
    yield f"algox ({len(bits)} rows x 40)", kernels.algox_numba, kernels.algox_numpy, (indptr, indices, bits, len(X), 20000)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    rng = np.random.default_rng(a.seed)
    print(f"{'kernel':40s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for name, fast, slow, args in cases(rng):
        out_fast = fast(*args)  # compile
        out_slow = slow(*args)
        same = _same(out_fast, out_slow)
        tf = best_of(lambda: fast(*args), a.repeat)
        ts = best_of(lambda: slow(*args), a.repeat)
        print(f"{name:40s} {tf:10.4f} {ts:10.4f} {ts / tf:8.1f}{'' if same else '  MISMATCH'}")


if __name__ == "__main__":
    main()
