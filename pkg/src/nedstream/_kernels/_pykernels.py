"""Pure-Python kernels; the reference behaviour for the compiled versions."""
from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def pair_contributions(offsets, term_ids, sig):
    """Per-document pair weights ``sig[i] + sig[j]`` for every unordered pair.

    Document ``d`` owns ``term_ids[offsets[d]:offsets[d+1]]`` (distinct ids).
    Returns ``(rows, cols, weights)`` with ``rows < cols``.
    """
    offsets = np.asarray(offsets, dtype=np.int64)
    term_ids = np.asarray(term_ids, dtype=np.int64)
    sig = np.asarray(sig, dtype=np.float64)
    rows, cols, ws = [], [], []
    for d in range(len(offsets) - 1):
        lo, hi = offsets[d], offsets[d + 1]
        if hi - lo < 2:
            continue
        ids = term_ids[lo:hi]
        s = sig[lo:hi]
        a, b = np.triu_indices(hi - lo, k=1)
        ia, ib = ids[a], ids[b]
        rows.append(np.minimum(ia, ib))
        cols.append(np.maximum(ia, ib))
        ws.append(s[a] + s[b])
    if not rows:
        return np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.float64)
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(ws)


def rolling_peaks(values, window, threshold):
    """Rolling mean/std of first differences and the peak mask, per row.

    For block ``t`` the change into the block is ``v[t] - v[t-1]`` and the
    baseline is the ``window`` changes before it, so ``t >= window + 1``.
    Warm-up entries are NaN / False.
    """
    v = np.ascontiguousarray(values, dtype=np.float64)
    if v.ndim == 1:
        v = v[None, :]
    n_series, n = v.shape
    means = np.full((n_series, n), np.nan)
    stds = np.full((n_series, n), np.nan)
    peaks = np.zeros((n_series, n), dtype=bool)
    for r in range(n_series):
        row = v[r].tolist()
        diffs = [row[k + 1] - row[k] for k in range(n - 1)]
        for t in range(window + 1, n):
            win = diffs[t - 1 - window:t - 1]
            first = win[0]
            if all(x == first for x in win):
                m, s = first, 0.0
            else:
                total = 0.0
                for x in win:
                    total += x
                m = total / window
                ss = 0.0
                for x in win:
                    ss += (x - m) * (x - m)
                s = math.sqrt(ss / (window - 1))
            means[r, t] = m
            stds[r, t] = s
            peaks[r, t] = diffs[t - 1] > m + threshold * s
    return means, stds, peaks


def louvain_local_move(indptr, indices, weights, community, resolution, max_sweeps=1000):
    """One Louvain local-moving phase over a symmetric CSR adjacency.

    Diagonal entries hold self-loop weight (internal weight of coarsened
    nodes). Nodes are visited in index order; a node moves only for a
    strictly better gain, ties between candidates go to the first
    neighbour community encountered. Returns ``(community, n_moves)``.
    """
    indptr = np.asarray(indptr, dtype=np.int64).tolist()
    indices = np.asarray(indices, dtype=np.int64).tolist()
    weights = np.asarray(weights, dtype=np.float64).tolist()
    comm = np.asarray(community, dtype=np.int64).tolist()
    n = len(indptr) - 1
    k = [0.0] * n
    for i in range(n):
        acc = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            acc += weights[p]
        k[i] = acc
    two_m = 0.0
    for i in range(n):
        two_m += k[i]
    if two_m <= 0.0:
        return np.asarray(comm, dtype=np.int64), 0
    tot = [0.0] * max(n, max(comm) + 1 if comm else 0)
    for i in range(n):
        tot[comm[i]] += k[i]

    link = [0.0] * len(tot)
    mark = [False] * len(tot)
    moves = 0
    for _ in range(max_sweeps):
        moved = 0
        for i in range(n):
            own = comm[i]
            touched = []
            for p in range(indptr[i], indptr[i + 1]):
                j = indices[p]
                if j == i:
                    continue
                c = comm[j]
                if not mark[c]:
                    mark[c] = True
                    touched.append(c)
                link[c] += weights[p]
            tot[own] -= k[i]
            scale = resolution * k[i] / two_m
            best_c = own
            best_gain = link[own] - tot[own] * scale
            for c in touched:
                gain = link[c] - tot[c] * scale
                if gain > best_gain:
                    best_gain = gain
                    best_c = c
            tot[best_c] += k[i]
            for c in touched:
                link[c] = 0.0
                mark[c] = False
            if best_c != own:
                comm[i] = best_c
                moved += 1
        moves += moved
        if moved == 0:
            break
    return np.asarray(comm, dtype=np.int64), moves
