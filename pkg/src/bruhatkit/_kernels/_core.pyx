# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled twins of the kernels in ``fallback``; same signatures.

The scan walks set bits with ctz and keeps a single reusable coatom
counter buffer, zeroing only the entries it touched, so a full pass over
all intervals of S_7 stays in the tens of milliseconds.
"""

from libc.stdint cimport int32_t, int64_t, uint32_t, uint64_t

import numpy as np

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

BACKEND_NAME = "cython"


def words_for(n_elems):
    """uint64 words per bitmatrix row."""
    return (n_elems + 63) // 64


def closure_bitmatrix(int n_elems, int words_per_row, adj_flat, adj_off, order):
    """Reflexive-transitive closure of the cover digraph as a bitmatrix.

    Contract identical to ``fallback.closure_bitmatrix``: ``order`` lists
    every element after all of its CSR neighbors.
    """
    bits_arr = np.zeros((n_elems, words_per_row), dtype=np.uint64)
    cdef uint64_t[:, ::1] bits = bits_arr
    cdef const uint32_t[::1] flat = np.ascontiguousarray(adj_flat, dtype=np.uint32)
    cdef const int64_t[::1] off = np.ascontiguousarray(adj_off, dtype=np.int64)
    cdef const int32_t[::1] seq = np.ascontiguousarray(order, dtype=np.int32)
    cdef Py_ssize_t i, k, j, x, y
    with nogil:
        for i in range(n_elems):
            x = seq[i]
            for k in range(off[x], off[x + 1]):
                y = flat[k]
                for j in range(words_per_row):
                    bits[x, j] |= bits[y, j]
            bits[x, x >> 6] |= (<uint64_t>1) << (x & 63)
    return bits_arr


def popcount_rows(bits_arr):
    """Number of set bits in each row."""
    cdef const uint64_t[:, ::1] bits = bits_arr
    cdef Py_ssize_t n_rows = bits.shape[0], words = bits.shape[1]
    out_arr = np.zeros(n_rows, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef Py_ssize_t r, j
    cdef int64_t acc
    with nogil:
        for r in range(n_rows):
            acc = 0
            for j in range(words):
                acc += __builtin_popcountll(bits[r, j])
            out[r] = acc
    return out_arr


def scan_stripe(down_arr, lcov_flat, lcov_off, ucov_flat, ucov_off,
                int v_lo, int v_hi, int gap_offset, int hist_len):
    """Gap statistics for all intervals with top rank in [v_lo, v_hi).

    Contract identical to ``fallback.scan_stripe``.
    """
    cdef const uint64_t[:, ::1] down = down_arr
    cdef Py_ssize_t words = down.shape[1]
    cdef const uint32_t[::1] lflat = np.ascontiguousarray(lcov_flat, dtype=np.uint32)
    cdef const int64_t[::1] loff = np.ascontiguousarray(lcov_off, dtype=np.int64)
    cdef const uint32_t[::1] uflat = np.ascontiguousarray(ucov_flat, dtype=np.uint32)
    cdef const int64_t[::1] uoff = np.ascontiguousarray(ucov_off, dtype=np.int64)
    hist_arr = np.zeros(hist_len, dtype=np.int64)
    per_v_max_arr = np.zeros(v_hi - v_lo, dtype=np.int32)
    c_buf_arr = np.zeros(down.shape[0], dtype=np.int32)
    cdef int64_t[::1] hist = hist_arr
    cdef int32_t[::1] per_v_max = per_v_max_arr
    cdef int32_t[::1] c_buf = c_buf_arr
    cdef Py_ssize_t v, k, j, e, u, w
    cdef uint64_t word
    cdef int64_t intervals = 0
    cdef int32_t best, gap, a
    with nogil:
        for v in range(v_lo, v_hi):
            for k in range(loff[v], loff[v + 1]):
                w = lflat[k]
                for j in range(words):
                    word = down[w, j]
                    while word:
                        c_buf[(j << 6) + __builtin_ctzll(word)] += 1
                        word &= word - 1
            best = 0  # [v, v] itself always contributes gap 0
            for j in range(words):
                word = down[v, j]
                while word:
                    u = (j << 6) + __builtin_ctzll(word)
                    word &= word - 1
                    a = 0
                    for e in range(uoff[u], uoff[u + 1]):
                        w = uflat[e]
                        if (down[v, w >> 6] >> (w & 63)) & 1:
                            a += 1
                    gap = c_buf[u] - a
                    hist[gap + gap_offset] += 1
                    intervals += 1
                    if gap > best:
                        best = gap
            per_v_max[v - v_lo] = best
            for k in range(loff[v], loff[v + 1]):
                w = lflat[k]
                for j in range(words):
                    word = down[w, j]
                    while word:
                        c_buf[(j << 6) + __builtin_ctzll(word)] = 0
                        word &= word - 1
    return hist_arr, per_v_max_arr, intervals


def counts_for_v(down_arr, lcov_flat, lcov_off, ucov_flat, ucov_off, int v):
    """Atom/coatom counts of every interval [u, v] for a fixed top v.

    Contract identical to ``fallback.counts_for_v``.
    """
    cdef const uint64_t[:, ::1] down = down_arr
    cdef Py_ssize_t words = down.shape[1]
    cdef const uint32_t[::1] lflat = np.ascontiguousarray(lcov_flat, dtype=np.uint32)
    cdef const int64_t[::1] loff = np.ascontiguousarray(lcov_off, dtype=np.int64)
    cdef const uint32_t[::1] uflat = np.ascontiguousarray(ucov_flat, dtype=np.uint32)
    cdef const int64_t[::1] uoff = np.ascontiguousarray(ucov_off, dtype=np.int64)
    cdef Py_ssize_t j, k, e, u, w
    cdef uint64_t word
    cdef Py_ssize_t count = 0
    for j in range(words):
        count += __builtin_popcountll(down[v, j])
    urows_arr = np.empty(count, dtype=np.int64)
    coatom_arr = np.empty(count, dtype=np.int32)
    atom_arr = np.empty(count, dtype=np.int32)
    cdef int64_t[::1] urows = urows_arr
    cdef int32_t[::1] coatom = coatom_arr
    cdef int32_t[::1] atom = atom_arr
    cdef Py_ssize_t i = 0
    cdef int32_t a, c
    with nogil:
        for j in range(words):
            word = down[v, j]
            while word:
                u = (j << 6) + __builtin_ctzll(word)
                word &= word - 1
                c = 0
                for k in range(loff[v], loff[v + 1]):
                    w = lflat[k]
                    if (down[w, u >> 6] >> (u & 63)) & 1:
                        c += 1
                a = 0
                for e in range(uoff[u], uoff[u + 1]):
                    w = uflat[e]
                    if (down[v, w >> 6] >> (w & 63)) & 1:
                        a += 1
                urows[i] = u
                coatom[i] = c
                atom[i] = a
                i += 1
    return urows_arr, coatom_arr, atom_arr
