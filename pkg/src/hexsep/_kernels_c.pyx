# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled component kernels: neighbor-pair enumeration over a uniform
grid and union-find labelling.  These are the hot inner loops of the
Monte Carlo runs; the numpy/scipy module `_kernels_py` implements the
same API and must produce identical output."""

from libc.math cimport floor

import numpy as np

_EMPTY = np.empty(0, dtype=np.int32)

# bucket keys are (ci + _BIAS) * _STRIDE + (cj + _BIAS); grid coordinates
# must stay within +-_BIAS, which holds for unit-square data and any radius
# above ~1e-8
_BIAS = 1 << 30
_STRIDE = 1 << 31


cdef inline Py_ssize_t _bsearch(long long[::1] keys, long long want) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = keys.shape[0], mid
    while lo < hi:
        mid = (lo + hi) // 2
        if keys[mid] < want:
            lo = mid + 1
        else:
            hi = mid
    if lo < keys.shape[0] and keys[lo] == want:
        return lo
    return -1


def radius_pairs(pts, double r):
    """All index pairs (a < b) with Euclidean distance <= r."""
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    cdef double[:, ::1] P = pts
    cdef Py_ssize_t n = P.shape[0]
    if n < 2:
        return _EMPTY, _EMPTY
    if r <= 0:
        raise ValueError("radius must be positive")

    cdef double inv = 1.0 / r
    ci = np.floor(pts[:, 0] * inv).astype(np.int64)
    cj = np.floor(pts[:, 1] * inv).astype(np.int64)
    if (np.abs(ci) >= _BIAS - 1).any() or (np.abs(cj) >= _BIAS - 1).any():
        raise ValueError("radius too small relative to the point spread")
    keys = (ci + _BIAS) * _STRIDE + (cj + _BIAS)
    order = np.argsort(keys, kind="stable").astype(np.int64)
    skeys = keys[order]
    ukeys, starts_arr = np.unique(skeys, return_index=True)
    counts_arr = np.diff(np.append(starts_arr, n))

    cdef long long[::1] uk = ukeys
    cdef long long[::1] starts = starts_arr.astype(np.int64)
    cdef long long[::1] counts = counts_arr.astype(np.int64)
    cdef long long[::1] idx = order
    cdef Py_ssize_t nb = uk.shape[0]

    # the four lexicographically-forward neighbour offsets plus the bucket
    # itself enumerate every unordered bucket pair exactly once
    cdef long long[4] doff
    doff[0] = 1                       # (0, +1)
    doff[1] = _STRIDE - 1             # (+1, -1)
    doff[2] = _STRIDE                 # (+1, 0)
    doff[3] = _STRIDE + 1             # (+1, +1)

    cdef double r2 = r * r
    cdef Py_ssize_t u, v, ii, jj, c1, c2, s1, s2, total, m
    cdef int k

    # pass 1: candidate count
    total = 0
    for u in range(nb):
        c1 = counts[u]
        total += c1 * (c1 - 1) // 2
        for k in range(4):
            v = _bsearch(uk, uk[u] + doff[k])
            if v >= 0:
                total += c1 * counts[v]

    a_arr = np.empty(total, dtype=np.int32)
    b_arr = np.empty(total, dtype=np.int32)
    cdef int[::1] A = a_arr
    cdef int[::1] B = b_arr
    cdef double dx, dy
    cdef long long p, q

    # pass 2: distance-filtered fill
    m = 0
    for u in range(nb):
        s1 = starts[u]
        c1 = counts[u]
        for ii in range(c1):
            p = idx[s1 + ii]
            for jj in range(ii + 1, c1):
                q = idx[s1 + jj]
                dx = P[p, 0] - P[q, 0]
                dy = P[p, 1] - P[q, 1]
                if dx * dx + dy * dy <= r2:
                    if p < q:
                        A[m] = <int>p; B[m] = <int>q
                    else:
                        A[m] = <int>q; B[m] = <int>p
                    m += 1
        for k in range(4):
            v = _bsearch(uk, uk[u] + doff[k])
            if v < 0:
                continue
            s2 = starts[v]
            c2 = counts[v]
            for ii in range(c1):
                p = idx[s1 + ii]
                for jj in range(c2):
                    q = idx[s2 + jj]
                    dx = P[p, 0] - P[q, 0]
                    dy = P[p, 1] - P[q, 1]
                    if dx * dx + dy * dy <= r2:
                        if p < q:
                            A[m] = <int>p; B[m] = <int>q
                        else:
                            A[m] = <int>q; B[m] = <int>p
                        m += 1
    return a_arr[:m], b_arr[:m]


cdef inline int _find(int[::1] parent, int x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def union_labels(Py_ssize_t n, a, b):
    """Component labels for n nodes under edges (a[k], b[k]).

    The label of every node is the smallest node index in its component.
    """
    if n == 0:
        return _EMPTY
    parent_arr = np.arange(n, dtype=np.int32)
    size_arr = np.ones(n, dtype=np.int32)
    cdef int[::1] parent = parent_arr
    cdef int[::1] size = size_arr
    cdef int[::1] A = np.ascontiguousarray(a, dtype=np.int32)
    cdef int[::1] B = np.ascontiguousarray(b, dtype=np.int32)
    cdef Py_ssize_t m = A.shape[0], t
    cdef int ra, rb
    for t in range(m):
        ra = _find(parent, A[t])
        rb = _find(parent, B[t])
        if ra == rb:
            continue
        if size[ra] < size[rb]:
            ra, rb = rb, ra
        parent[rb] = ra
        size[ra] += size[rb]
    out_arr = np.empty(n, dtype=np.int32)
    label_arr = np.full(n, -1, dtype=np.int32)
    cdef int[::1] out = out_arr
    cdef int[::1] label = label_arr
    cdef int i, root
    for i in range(<int>n):
        root = _find(parent, i)
        if label[root] < 0:
            label[root] = i     # first visit in ascending order = min index
        out[i] = label[root]
    return out_arr


def max_fraction_sweep(Py_ssize_t n, a, b, d2, radii2):
    """Largest-component fraction after inserting edges up to each radius.

    ``d2`` must be ascending (pairs sorted by squared length), ``radii2``
    ascending squared radii.  Output is non-decreasing by construction.
    """
    cdef int[::1] A = np.ascontiguousarray(a, dtype=np.int32)
    cdef int[::1] B = np.ascontiguousarray(b, dtype=np.int32)
    cdef double[::1] D = np.ascontiguousarray(d2, dtype=np.float64)
    cdef double[::1] R = np.ascontiguousarray(radii2, dtype=np.float64)
    out_arr = np.empty(R.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    if n == 0:
        raise ValueError("need at least one node")
    parent_arr = np.arange(n, dtype=np.int32)
    size_arr = np.ones(n, dtype=np.int32)
    cdef int[::1] parent = parent_arr
    cdef int[::1] size = size_arr
    cdef Py_ssize_t m = A.shape[0], ptr = 0, k
    cdef int ra, rb, best = 1
    for k in range(R.shape[0]):
        while ptr < m and D[ptr] <= R[k]:
            ra = _find(parent, A[ptr])
            rb = _find(parent, B[ptr])
            ptr += 1
            if ra == rb:
                continue
            if size[ra] < size[rb]:
                ra, rb = rb, ra
            parent[rb] = ra
            size[ra] += size[rb]
            if size[ra] > best:
                best = size[ra]
        out[k] = <double>best / <double>n
    return out_arr
