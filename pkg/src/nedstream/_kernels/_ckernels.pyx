# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels mirroring ``_pykernels`` operation for operation."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, NAN

cnp.import_array()

BACKEND = "cython"


def pair_contributions(offsets, term_ids, sig):
    cdef const cnp.int64_t[::1] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef const cnp.int64_t[::1] ids = np.ascontiguousarray(term_ids, dtype=np.int64)
    cdef const double[::1] s = np.ascontiguousarray(sig, dtype=np.float64)
    cdef Py_ssize_t n_docs = off.shape[0] - 1
    cdef Py_ssize_t d, a, b, lo, hi, total = 0, p = 0
    cdef cnp.int64_t ia, ib
    for d in range(n_docs):
        hi = off[d + 1] - off[d]
        total += hi * (hi - 1) // 2
    rows_arr = np.empty(total, dtype=np.int64)
    cols_arr = np.empty(total, dtype=np.int64)
    ws_arr = np.empty(total, dtype=np.float64)
    cdef cnp.int64_t[::1] rows = rows_arr
    cdef cnp.int64_t[::1] cols = cols_arr
    cdef double[::1] ws = ws_arr
    for d in range(n_docs):
        lo = off[d]
        hi = off[d + 1]
        for a in range(lo, hi):
            for b in range(a + 1, hi):
                ia = ids[a]
                ib = ids[b]
                if ia < ib:
                    rows[p] = ia
                    cols[p] = ib
                else:
                    rows[p] = ib
                    cols[p] = ia
                ws[p] = s[a] + s[b]
                p += 1
    return rows_arr, cols_arr, ws_arr


def rolling_peaks(values, int window, double threshold):
    v_arr = np.ascontiguousarray(values, dtype=np.float64)
    if v_arr.ndim == 1:
        v_arr = v_arr[None, :]
    cdef const double[:, ::1] v = v_arr
    cdef Py_ssize_t n_series = v.shape[0], n = v.shape[1]
    means_arr = np.full((n_series, n), np.nan)
    stds_arr = np.full((n_series, n), np.nan)
    peaks_arr = np.zeros((n_series, n), dtype=np.uint8)
    cdef double[:, ::1] means = means_arr
    cdef double[:, ::1] stds = stds_arr
    cdef cnp.uint8_t[:, ::1] peaks = peaks_arr
    cdef Py_ssize_t r, t, q
    cdef double first, x, m, sd, total, ss, cur
    cdef bint same
    for r in range(n_series):
        for t in range(window + 1, n):
            # window diffs are changes into blocks t-window .. t-1
            first = v[r, t - window] - v[r, t - window - 1]
            same = True
            for q in range(t - window, t):
                if v[r, q] - v[r, q - 1] != first:
                    same = False
                    break
            if same:
                m = first
                sd = 0.0
            else:
                total = 0.0
                for q in range(t - window, t):
                    total += v[r, q] - v[r, q - 1]
                m = total / window
                ss = 0.0
                for q in range(t - window, t):
                    x = (v[r, q] - v[r, q - 1]) - m
                    ss += x * x
                sd = sqrt(ss / (window - 1))
            means[r, t] = m
            stds[r, t] = sd
            cur = v[r, t] - v[r, t - 1]
            peaks[r, t] = cur > m + threshold * sd
    return means_arr, stds_arr, peaks_arr.astype(bool)


def louvain_local_move(indptr, indices, weights, community, double resolution, int max_sweeps=1000):
    cdef const cnp.int64_t[::1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const cnp.int64_t[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    comm_arr = np.array(community, dtype=np.int64, copy=True)
    cdef cnp.int64_t[::1] comm = comm_arr
    cdef Py_ssize_t n = ptr.shape[0] - 1
    cdef Py_ssize_t i, p, j, q, n_touched, sweep
    cdef cnp.int64_t c, own, best_c
    cdef double two_m = 0.0, acc, scale, gain, best_gain
    cdef Py_ssize_t n_comm = n
    if n > 0 and comm_arr.max() + 1 > n_comm:
        n_comm = comm_arr.max() + 1
    k_arr = np.zeros(n, dtype=np.float64)
    tot_arr = np.zeros(n_comm, dtype=np.float64)
    link_arr = np.zeros(n_comm, dtype=np.float64)
    mark_arr = np.zeros(n_comm, dtype=np.uint8)
    touched_arr = np.zeros(n_comm, dtype=np.int64)
    cdef double[::1] k = k_arr
    cdef double[::1] tot = tot_arr
    cdef double[::1] link = link_arr
    cdef cnp.uint8_t[::1] mark = mark_arr
    cdef cnp.int64_t[::1] touched = touched_arr
    cdef long moves = 0, moved

    for i in range(n):
        acc = 0.0
        for p in range(ptr[i], ptr[i + 1]):
            acc += w[p]
        k[i] = acc
    for i in range(n):
        two_m += k[i]
    if two_m <= 0.0:
        return comm_arr, 0
    for i in range(n):
        tot[comm[i]] += k[i]

    for sweep in range(max_sweeps):
        moved = 0
        for i in range(n):
            own = comm[i]
            n_touched = 0
            for p in range(ptr[i], ptr[i + 1]):
                j = idx[p]
                if j == i:
                    continue
                c = comm[j]
                if not mark[c]:
                    mark[c] = 1
                    touched[n_touched] = c
                    n_touched += 1
                link[c] += w[p]
            tot[own] -= k[i]
            scale = resolution * k[i] / two_m
            best_c = own
            best_gain = link[own] - tot[own] * scale
            for q in range(n_touched):
                c = touched[q]
                gain = link[c] - tot[c] * scale
                if gain > best_gain:
                    best_gain = gain
                    best_c = c
            tot[best_c] += k[i]
            for q in range(n_touched):
                c = touched[q]
                link[c] = 0.0
                mark[c] = 0
            if best_c != own:
                comm[i] = best_c
                moved += 1
        moves += moved
        if moved == 0:
            break
    return comm_arr, moves
