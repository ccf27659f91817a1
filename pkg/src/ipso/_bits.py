"""Vectorised kernels over the full set of length-k binary SERPs.

Row/column index i always denotes the SERP whose MSB-first integer
encoding is i, so index order equals lexicographic vector order.
Category codes are shared across the package: 0 equal, 1 non-inferior,
2 non-superior, 3 non-separable.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .serp import Relationship

EQ, NI, NS, XX = 0, 1, 2, 3

CATEGORY_TO_RELATIONSHIP = {
    EQ: Relationship.EQUAL,
    NI: Relationship.NON_INFERIOR,
    NS: Relationship.NON_SUPERIOR,
    XX: Relationship.NON_SEPARABLE,
}


@lru_cache(maxsize=32)
def bit_matrix(k: int) -> np.ndarray:
    """(2^k, k) int8 matrix of every SERP of length k, row i = encoding i."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    codes = np.arange(1 << k, dtype=np.int64)
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)
    m = ((codes[:, None] >> shifts[None, :]) & 1).astype(np.int8)
    m.setflags(write=False)
    return m


@lru_cache(maxsize=32)
def prefix_ones(k: int) -> np.ndarray:
    """(2^k, k) int8 matrix of cumulative one-counts per prefix depth."""
    pc = np.cumsum(bit_matrix(k), axis=1, dtype=np.int8)
    pc.setflags(write=False)
    return pc


def classify_pair_rows(bits_a: np.ndarray, bits_b: np.ndarray) -> np.ndarray:
    """Category code per row for two (m, k) 0/1 matrices compared rowwise."""
    k = bits_a.shape[1]
    dtype = np.int8 if k <= 120 else np.int16
    diff = bits_a.astype(dtype) - bits_b.astype(dtype)
    walk = np.cumsum(diff, axis=1, dtype=dtype)
    been_pos = (walk > 0).any(axis=1)
    been_neg = (walk < 0).any(axis=1)
    return (been_pos + 2 * been_neg).astype(np.uint8)


def category_matrix(k: int, block: int = 256) -> np.ndarray:
    """(2^k, 2^k) uint8 matrix of category codes for every ordered pair.

    Entry [a, b] classifies SERP a against SERP b.  Blocked to keep the
    intermediate prefix-difference tensor small; k <= 12 by contract.
    """
    if not 1 <= k <= 12:
        raise ValueError(f"category_matrix supports 1 <= k <= 12, got {k}")
    n = 1 << k
    pc = prefix_ones(k)
    out = np.empty((n, n), dtype=np.uint8)
    for start in range(0, n, block):
        d = pc[start:start + block, None, :].astype(np.int8) - pc[None, :, :]
        been_pos = (d > 0).any(axis=2)
        been_neg = (d < 0).any(axis=2)
        out[start:start + block] = been_pos + 2 * been_neg
    return out


def _pack_bits(flags: np.ndarray) -> np.ndarray:
    """Pack a boolean vector into little-endian uint64 words (zero padded)."""
    packed = np.packbits(flags, bitorder="little")
    if packed.size % 8:
        packed = np.concatenate([packed, np.zeros(8 - packed.size % 8, dtype=np.uint8)])
    return packed.view(np.uint64)


def relationship_counts_exact(k: int, block: int = 1024) -> tuple[int, int, int, int]:
    """Exact (equal, ni, ns, non_separable) counts over all 2^{2k} ordered pairs.

    For each depth i and each possible prefix count v, the set of SERPs
    whose depth-i prefix count is below (resp. above) v is precomputed as
    a packed bitmask over all 2^k SERPs.  A row's been-positive /
    been-negative mask is then an OR over its k depths, and categories
    fall out of popcounts.  Handles k = 15 (about 10^9 pairs) in seconds.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    n = 1 << k
    pc = prefix_ones(k)
    words = (n + 63) // 64
    # mask_lt[i, v] marks SERPs b with fewer than v ones in their depth-i prefix
    mask_lt = np.zeros((k, k + 2, words), dtype=np.uint64)
    mask_gt = np.zeros((k, k + 2, words), dtype=np.uint64)
    for i in range(k):
        col = pc[:, i]
        for v in range(i + 2):
            mask_lt[i, v] = _pack_bits(col < v)
            mask_gt[i, v] = _pack_bits(col > v)
    eq = ni = ns = xx = 0
    for start in range(0, n, block):
        pcb = pc[start:start + block].astype(np.intp)
        rows = pcb.shape[0]
        been_pos = np.zeros((rows, words), dtype=np.uint64)
        been_neg = np.zeros((rows, words), dtype=np.uint64)
        for i in range(k):
            v = pcb[:, i]
            been_pos |= mask_lt[i, v]
            been_neg |= mask_gt[i, v]
        both = been_pos & been_neg
        xx += int(np.bitwise_count(both).sum(dtype=np.int64))
        ni += int(np.bitwise_count(been_pos & ~both).sum(dtype=np.int64))
        ns += int(np.bitwise_count(been_neg & ~both).sum(dtype=np.int64))
        # padding bits are zero in every mask, so count equals via the complement
        eq += rows * n - int(np.bitwise_count(been_pos | been_neg).sum(dtype=np.int64))
    return eq, ni, ns, xx
