"""Vectorized numpy implementations of the hot kernels.

This backend is always importable; the compiled twin in ``_core`` has the
same signatures and is preferred automatically when built (see the
package ``__init__``).  All bitmatrices are C-contiguous uint64 arrays of
shape (N, W) with W = ceil(N/64); bit j of a row lives in word j >> 6 at
bit position j & 63, which matches the little-endian byte order used by
the cache file format.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "fallback"


def words_for(n_elems: int) -> int:
    """uint64 words per bitmatrix row."""
    return (n_elems + 63) // 64


def _unpack(rows: np.ndarray, n_elems: int) -> np.ndarray:
    """Expand packed rows to one byte per bit (little-endian bit order)."""
    if rows.ndim == 1:
        return np.unpackbits(rows.view(np.uint8), bitorder="little", count=n_elems)
    return np.unpackbits(
        rows.view(np.uint8), axis=1, bitorder="little", count=n_elems
    )


def closure_bitmatrix(
    n_elems: int,
    words_per_row: int,
    adj_flat: np.ndarray,
    adj_off: np.ndarray,
    order: np.ndarray,
) -> np.ndarray:
    """Reflexive-transitive closure of the cover digraph as a bitmatrix.

    ``adj_flat``/``adj_off`` hold each element's cover neighbors in CSR
    form, and ``order`` must list every element after all its neighbors
    (for up-sets: decreasing length; for down-sets: increasing length).
    Row x of the result is the bitset {x} union the rows of its neighbors.
    """
    bits = np.zeros((n_elems, words_per_row), dtype=np.uint64)
    for x in order.tolist():
        row = bits[x]
        lo, hi = adj_off[x], adj_off[x + 1]
        if hi > lo:
            row |= np.bitwise_or.reduce(bits[adj_flat[lo:hi]], axis=0)
        row[x >> 6] |= np.uint64(1 << (x & 63))
    return bits


def popcount_rows(bits: np.ndarray) -> np.ndarray:
    """Number of set bits in each row."""
    return np.bitwise_count(bits).sum(axis=1, dtype=np.int64)


def scan_stripe(
    down: np.ndarray,
    lcov_flat: np.ndarray,
    lcov_off: np.ndarray,
    ucov_flat: np.ndarray,
    ucov_off: np.ndarray,
    v_lo: int,
    v_hi: int,
    gap_offset: int,
    hist_len: int,
):
    """Gap statistics for all intervals whose top rank lies in [v_lo, v_hi).

    ``down`` is the down-set bitmatrix (row v = bitset of {u : u <= v}),
    ``lcov``/``ucov`` the lower/upper cover CSR tables.  For an interval
    [u, v] the coatom count is the number of lower covers of v above u and
    the atom count is the number of upper covers of u below v.  Returns a
    histogram over gap + gap_offset, the per-v maximum gap, and the number
    of intervals seen.
    """
    n_elems = down.shape[0]
    hist = np.zeros(hist_len, dtype=np.int64)
    per_v_max = np.zeros(v_hi - v_lo, dtype=np.int32)
    # Upper-cover CSR as an edge list for one vectorized bincount per v.
    ucov_src = np.repeat(
        np.arange(n_elems, dtype=np.int64), np.diff(ucov_off).astype(np.int64)
    )
    ucov_dst = ucov_flat.astype(np.int64)
    intervals = 0
    for v in range(v_lo, v_hi):
        downmask = _unpack(down[v], n_elems)
        lo, hi = lcov_off[v], lcov_off[v + 1]
        if hi > lo:
            c_all = _unpack(down[lcov_flat[lo:hi]], n_elems).sum(
                axis=0, dtype=np.int32
            )
        else:
            c_all = np.zeros(n_elems, dtype=np.int32)
        below_v = downmask[ucov_dst].astype(bool)
        a_all = np.bincount(ucov_src[below_v], minlength=n_elems)
        urows = np.flatnonzero(downmask)
        gaps = c_all[urows] - a_all[urows]
        hist += np.bincount(gaps + gap_offset, minlength=hist_len)
        per_v_max[v - v_lo] = gaps.max()
        intervals += urows.size
    return hist, per_v_max, intervals


def counts_for_v(
    down: np.ndarray,
    lcov_flat: np.ndarray,
    lcov_off: np.ndarray,
    ucov_flat: np.ndarray,
    ucov_off: np.ndarray,
    v: int,
):
    """Atom/coatom counts of every interval [u, v] for a fixed top v.

    Returns (urows, coatom_counts, atom_counts) where urows are the ranks
    u <= v in ascending order and the count arrays align with urows.
    """
    n_elems = down.shape[0]
    downmask = _unpack(down[v], n_elems)
    urows = np.flatnonzero(downmask)
    lo, hi = lcov_off[v], lcov_off[v + 1]
    if hi > lo:
        c_all = _unpack(down[lcov_flat[lo:hi]], n_elems).sum(axis=0, dtype=np.int32)
    else:
        c_all = np.zeros(n_elems, dtype=np.int32)
    atom = np.empty(urows.size, dtype=np.int32)
    for i, u in enumerate(urows.tolist()):
        lo_u, hi_u = ucov_off[u], ucov_off[u + 1]
        atom[i] = downmask[ucov_flat[lo_u:hi_u]].sum() if hi_u > lo_u else 0
    return urows.astype(np.int64), c_all[urows], atom
