"""Compare the compiled and pure-Python kernels on representative inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from nedstream import _kernels


def pair_inputs(rng, n_docs=5000, vocab=2000):
    offsets, ids, sig = [0], [], []
    for _ in range(n_docs):
        k = int(rng.integers(1, 12))
        chosen = rng.choice(vocab, size=k, replace=False)
        tf = rng.integers(1, 4, size=k).astype(float)
        ids.extend(chosen.tolist())
        sig.extend((tf / tf.sum()).tolist())
        offsets.append(len(ids))
    return np.array(offsets), np.array(ids, dtype=np.int64), np.array(sig)


def peak_inputs(rng, n_series=2000, n=200):
    return (rng.lognormal(2.0, 0.5, size=(n_series, n)), 5, 2.0)


def louvain_inputs(rng, n=3000, avg_deg=8):
    m = n * avg_deg // 2
    a, b = rng.integers(0, n, m), rng.integers(0, n, m)
    keep = a != b
    a, b = a[keep], b[keep]
    w = rng.uniform(0.1, 2.0, len(a))
    rows, cols, vals = np.concatenate([a, b]), np.concatenate([b, a]), np.concatenate([w, w])
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    indptr = np.searchsorted(rows, np.arange(n + 1))
    return indptr, cols, vals, np.arange(n), 1.0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    cases = {
        "pair_contributions": pair_inputs(rng),
        "rolling_peaks": peak_inputs(rng),
        "louvain_local_move": louvain_inputs(rng),
    }
    backends = [_kernels.python] + ([_kernels.compiled] if _kernels.compiled else [])
    if len(backends) == 1:
        print("compiled extension not available; timing the Python kernels only")
    print(f"{'kernel':<20}" + "".join(f"{b.BACKEND:>12}" for b in backends) + ("    speedup" if len(backends) > 1 else ""))
    for name, inputs in cases.items():
        times = []
        for b in backends:
            fn = getattr(b, name)
            times.append(min(timeit.repeat(lambda: fn(*inputs), number=1, repeat=args.repeat)))
        line = f"{name:<20}" + "".join(f"{t * 1e3:10.1f}ms" for t in times)
        if len(times) > 1:
            line += f"   {times[0] / times[1]:7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
