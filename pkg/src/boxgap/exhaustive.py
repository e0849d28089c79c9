"""Vectorized exhaustive scans over vertex subsets of a small region.

All subsets of a region of up to ~24 vertices are enumerated as bitmasks in
chunks; boundary sizes are accumulated per edge with xor tricks. Boundaries
are ambient: edges leaving the region count toward every subset containing
their inner endpoint. Ties between equal-ratio subsets break toward smaller
size, then the lexicographically smallest sorted vertex tuple.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph, vertex_set

CHUNK_BITS = 18  # subsets processed per chunk: 2**CHUNK_BITS

_POP16 = np.array(
    [bin(i).count("1") for i in range(1 << 16)], dtype=np.uint8
)
_REV16 = np.array(
    [int(format(i, "016b")[::-1], 2) for i in range(1 << 16)], dtype=np.uint32
)


def _popcount32(masks: np.ndarray) -> np.ndarray:
    return _POP16[masks & 0xFFFF] + _POP16[masks >> 16]


def _bitrev32(masks: np.ndarray) -> np.ndarray:
    # Reversing all 32 bits preserves the ordering induced by reversing any
    # fixed lower n bits, which is all the tie-break needs.
    return (_REV16[masks & 0xFFFF] << np.uint32(16)) | _REV16[masks >> 16]


def _region_data(g: Graph, region):
    """Local edge list and per-vertex external degree for a region."""
    vs = vertex_set(g, region)
    pos = {v: i for i, v in enumerate(vs)}
    internal = []
    ext = np.zeros(len(vs), dtype=np.uint16)
    for u in vs:
        for w in g.adjacency[u]:
            if w == u:
                continue  # loops never cross
            if w in pos:
                if u < w:
                    internal.append((pos[u], pos[w]))
            else:
                ext[pos[u]] += 1
    return vs, internal, ext


def _chunk_boundary(masks, internal, ext):
    boundary = np.zeros(masks.shape, dtype=np.uint16)
    for iu, iv in internal:
        boundary += ((masks >> np.uint32(iu)) ^ (masks >> np.uint32(iv))).astype(
            np.uint16
        ) & np.uint16(1)
    for i, e in enumerate(ext):
        if e:
            boundary += ((masks >> np.uint32(i)) & np.uint32(1)).astype(
                np.uint16
            ) * np.uint16(e)
    return boundary


def _mask_to_tuple(mask: int, vs) -> tuple:
    return tuple(vs[i] for i in range(len(vs)) if (mask >> i) & 1)


def min_ratio_subset(g: Graph, region, max_size: int):
    """Exact min of |∂S|/|S| over nonempty S within the region, |S| <= max_size.

    The boundary is taken in g (ambient). Returns (ratio, witness_tuple) or
    (None, None) if max_size < 1.
    """
    vs, internal, ext = _region_data(g, region)
    m = len(vs)
    if m == 0 or max_size < 1:
        return None, None
    best_ratio = np.inf
    best_size = None
    best_rev = None
    best_mask = None
    total = 1 << m
    step = 1 << min(CHUNK_BITS, m)
    for start in range(0, total, step):
        masks = np.arange(start, min(start + step, total), dtype=np.uint32)
        if start == 0:
            masks = masks[1:]  # skip the empty set
        if masks.size == 0:
            continue
        sizes = _popcount32(masks)
        ok = sizes <= max_size
        if not ok.any():
            continue
        masks = masks[ok]
        sizes = sizes[ok]
        boundary = _chunk_boundary(masks, internal, ext)
        # Ratios of small ints; IEEE division maps equal rationals to equal
        # floats, so exact ties survive the float comparison below.
        ratios = boundary.astype(np.float64) / sizes.astype(np.float64)
        lo = ratios.min()
        if lo > best_ratio:
            continue
        cand = ratios == lo
        cs = sizes[cand]
        smin = cs.min()
        if lo == best_ratio and smin > best_size:
            continue
        at_size = cand.copy()
        at_size[cand] = cs == smin
        rev = _bitrev32(masks[at_size])
        k = int(np.argmax(rev))
        cand_rev = int(rev[k])
        cand_mask = int(masks[at_size][k])
        if (
            lo < best_ratio
            or smin < best_size
            or (smin == best_size and cand_rev > best_rev)
        ):
            best_ratio = lo
            best_size = int(smin)
            best_rev = cand_rev
            best_mask = cand_mask
    if best_mask is None:
        return None, None
    return float(best_ratio), _mask_to_tuple(best_mask, vs)


def min_sparse_subset(g: Graph, region, c: float):
    """Smallest nonempty proper subset S of the region with |∂S| < c|S|.

    Boundary in g (ambient). Ties at the minimal size break toward the
    lexicographically smallest vertex tuple. Returns a tuple or None.
    """
    vs, internal, ext = _region_data(g, region)
    m = len(vs)
    if m <= 1:
        return None
    best_size = None
    best_rev = None
    best_mask = None
    total = 1 << m
    full = total - 1
    step = 1 << min(CHUNK_BITS, m)
    for start in range(0, total, step):
        masks = np.arange(start, min(start + step, total), dtype=np.uint32)
        if start == 0:
            masks = masks[1:]
        if masks.size and int(masks[-1]) == full:
            masks = masks[:-1]  # proper subsets only
        if masks.size == 0:
            continue
        sizes = _popcount32(masks)
        if best_size is not None:
            keep = sizes <= best_size
            if not keep.any():
                continue
            masks, sizes = masks[keep], sizes[keep]
        boundary = _chunk_boundary(masks, internal, ext)
        passing = boundary.astype(np.float64) < c * sizes.astype(np.float64)
        if not passing.any():
            continue
        masks, sizes = masks[passing], sizes[passing]
        smin = int(sizes.min())
        at = sizes == smin
        rev = _bitrev32(masks[at])
        k = int(np.argmax(rev))
        cand_rev = int(rev[k])
        cand_mask = int(masks[at][k])
        if best_size is None or smin < best_size or (
            smin == best_size and cand_rev > best_rev
        ):
            best_size = smin
            best_rev = cand_rev
            best_mask = cand_mask
    if best_mask is None:
        return None
    return _mask_to_tuple(best_mask, vs)
