"""
Time each hot kernel under the numba and the pure numpy/scipy backends.

    python benchmarks/bench_kernels.py --nodes 20000 --repeats 5

Both backends run in one process; compile time is excluded by a warm-up call.
Outputs are checked to agree before timings are printed.
"""
import argparse
import time

import numpy as np

from gcrewe import _accel, _kernels
from gcrewe.embed import normalized_joint_adjacency
from gcrewe.features import bin_count, log_bins
from gcrewe.synth import preferential_attachment


def best_of(fn, repeats):
    fn()  # warm-up (jit compile / caches)
    times = []
    for _ in range(repeats):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--nodes", type=int, default=20_000)
    ap.add_argument("--m", type=int, default=3, help="edges per new node")
    ap.add_argument("--dim", type=int, default=16, help="embedding width for spmm / top-k")
    ap.add_argument("--queries", type=int, default=2000, help="source rows for top-k")
    ap.add_argument("--k", type=int, default=10)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)

    g = preferential_attachment(args.nodes, args.m, seed=0)
    bins = log_bins(g.degrees)
    m = bin_count(g.max_degree)
    A = normalized_joint_adjacency(g)
    rng = np.random.default_rng(0)
    H = rng.normal(size=(g.node_count, args.dim))
    src = rng.normal(size=(args.queries, args.dim))
    dst = rng.normal(size=(g.node_count, args.dim))

    cases = {
        "ring_features (K=2)": lambda: _kernels.ring_features(g.indptr, g.indices, bins, 2, 0.01, m),
        "csr_spmm": lambda: _kernels.csr_spmm(A.indptr, A.indices, A.data, H),
        f"topk_sqdist (k={args.k})": lambda: _kernels.topk_sqdist(src, dst, args.k),
    }
    print(f"graph: {g.node_count} nodes, {g.edge_count} edges; best of {args.repeats}")
    print(f"{'kernel':<24}{'numba [s]':>12}{'numpy [s]':>12}{'ratio':>9}")
    prev = _accel.use_numba()
    try:
        for name, fn in cases.items():
            _accel.set_numba(True)
            t_nb, out_nb = best_of(fn, args.repeats)
            _accel.set_numba(False)
            t_np, out_np = best_of(fn, args.repeats)
            a = out_nb[0] if isinstance(out_nb, tuple) else out_nb
            b = out_np[0] if isinstance(out_np, tuple) else out_np
            if not np.allclose(a, b, rtol=0, atol=1e-10):
                raise SystemExit(f"{name}: backends disagree")
            print(f"{name:<24}{t_nb:>12.4f}{t_np:>12.4f}{t_np / t_nb:>8.1f}x")
    finally:
        _accel.set_numba(prev)


if __name__ == "__main__":
    main()
