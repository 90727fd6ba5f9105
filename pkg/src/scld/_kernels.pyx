# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for alphabets up to 64 symbols (one uint64 mask per position)."""
import numpy as np
from libc.stdint cimport uint64_t, int64_t

NAME = "cython"

cdef uint64_t FNV_PRIME = 1099511628211ULL
cdef uint64_t FNV_OFFSET = 14695981039346656037ULL


def onehot(const int64_t[:, ::1] sym):
    cdef Py_ssize_t m = sym.shape[0], n = sym.shape[1], j, i
    out = np.empty((m, n), dtype=np.uint64)
    cdef uint64_t[:, ::1] bits = out
    for j in range(m):
        for i in range(n):
            bits[j, i] = (<uint64_t>1) << sym[j, i]
    return out


cdef inline bint _covered(const uint64_t[:, ::1] bits, Py_ssize_t j, uint64_t* d, Py_ssize_t n) nogil:
    cdef Py_ssize_t i
    for i in range(n):
        if (bits[j, i] & d[i]) == 0:
            return False
    return True


def residual(const uint64_t[:, ::1] bits, const uint64_t[::1] masks):
    cdef Py_ssize_t m = bits.shape[0], n = bits.shape[1], j, k = 0
    out = np.empty(m, dtype=np.int64)
    cdef int64_t[::1] o = out
    cdef uint64_t[::1] d = np.ascontiguousarray(masks).copy()
    with nogil:
        for j in range(m):
            if _covered(bits, j, &d[0], n):
                o[k] = j
                k += 1
    return out[:k]


cdef inline bint _next_combo(Py_ssize_t* idx, Py_ssize_t s, Py_ssize_t m) nogil:
    cdef Py_ssize_t i = s - 1, j
    while i >= 0 and idx[i] == m - s + i:
        i -= 1
    if i < 0:
        return False
    idx[i] += 1
    for j in range(i + 1, s):
        idx[j] = idx[j - 1] + 1
    return True


def coalition_scan(const uint64_t[:, ::1] bits, int t, bint exact, Py_ssize_t total):
    """64-bit descendant digests and residual sizes for all coalitions.

    ``total`` must equal the number of coalitions enumerated (sizes 1..t, or
    exactly t when ``exact``); order matches ``itertools.combinations``.
    """
    cdef Py_ssize_t m = bits.shape[0], n = bits.shape[1]
    digests = np.empty(total, dtype=np.uint64)
    counts = np.empty(total, dtype=np.int64)
    cdef uint64_t[::1] dg = digests
    cdef int64_t[::1] ct = counts
    cdef uint64_t[::1] d = np.empty(max(n, 1), dtype=np.uint64)
    cdef Py_ssize_t[::1] idx = np.empty(max(t, 1), dtype=np.intp)
    cdef Py_ssize_t s, s0, i, j, pos = 0, c
    cdef uint64_t h
    s0 = t if exact else 1
    with nogil:
        for s in range(s0, t + 1):
            if s > m:
                break
            for i in range(s):
                idx[i] = i
            while True:
                for i in range(n):
                    d[i] = 0
                for j in range(s):
                    for i in range(n):
                        d[i] |= bits[idx[j], i]
                h = FNV_OFFSET
                for i in range(n):
                    h = (h ^ d[i]) * FNV_PRIME
                c = 0
                for j in range(m):
                    if _covered(bits, j, &d[0], n):
                        c += 1
                dg[pos] = h
                ct[pos] = c
                pos += 1
                if not _next_combo(&idx[0], s, m):
                    break
    if pos != total:
        raise ValueError("coalition count mismatch")
    return digests, counts


def match_subsets(const uint64_t[:, ::1] bits, const int64_t[::1] cand, int t,
                  const uint64_t[::1] masks, bint first_only):
    cdef Py_ssize_t w = cand.shape[0], n = bits.shape[1], s, i, j
    cdef Py_ssize_t[::1] idx = np.empty(max(t, 1), dtype=np.intp)
    cdef uint64_t[::1] d = np.empty(max(n, 1), dtype=np.uint64)
    cdef long long tested = 0
    cdef bint eq
    matches = []
    for s in range(1, min(t, w) + 1):
        for i in range(s):
            idx[i] = i
        while True:
            tested += 1
            eq = True
            for i in range(n):
                d[i] = 0
                for j in range(s):
                    d[i] |= bits[cand[idx[j]], i]
                if d[i] != masks[i]:
                    eq = False
                    break
            if eq:
                hit = []
                for j in range(s):
                    hit.append(int(cand[idx[j]]))
                matches.append(tuple(hit))
                if first_only:
                    return matches, tested
            if not _next_combo(&idx[0], s, w):
                break
    return matches, tested
