"""Time the numba kernels against their numpy twins on a few lattices.

Run:  python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from tightembed import _kernels as K
from tightembed.lattice import boolean_lattice, m_n, product, subspace_lattice


def best_of(fn, repeat):
    fn()  # warm-up, includes numba compilation
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    yield "2^5", boolean_lattice(5)
    yield "M3 x 2^3", product(m_n(3), boolean_lattice(3))
    yield "LM(GF(2)^3)", subspace_lattice(3)
    yield "LM(GF(2)^4)", subspace_lattice(4)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    vecs = rng.integers(1, 2**40, size=200, dtype=np.int64).tolist()
    print(f"{'lattice':14s} {'kernel':28s} {'numba s':>10s} {'numpy s':>10s} {'ratio':>7s}")
    for name, L in cases():
        leq, meet, join = L.leq_matrix, L.meet_table, L.join_table
        jobs = {
            "join_table": lambda b: K.join_table(leq, backend=b),
            "modular_violation": lambda b: K.modular_violation(leq, meet, join, backend=b),
            "distributive_violation": lambda b: K.distributive_violation(meet, join, backend=b),
            "two_distributive_violation": lambda b: K.two_distributive_violation(meet, join, backend=b),
            "principal_congruence": lambda b: K.principal_congruence(meet, join, 0, 1, backend=b),
        }
        for kname, job in jobs.items():
            tn = best_of(lambda: job("numba"), args.repeat)
            tp = best_of(lambda: job("numpy"), args.repeat)
            print(f"{name:14s} {kname:28s} {tn:10.5f} {tp:10.5f} {tp / tn:7.1f}")
    tn = best_of(lambda: K.gf2_rank(vecs, backend="numba"), args.repeat)
    tp = best_of(lambda: K.gf2_rank(vecs, backend="numpy"), args.repeat)
    print(f"{'200 vectors':14s} {'gf2_rank':28s} {tn:10.5f} {tp:10.5f} {tp / tn:7.1f}")


if __name__ == "__main__":
    main()
