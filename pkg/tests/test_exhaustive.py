import itertools

import numpy as np

import boxgap as bg
from boxgap.exhaustive import min_ratio_subset, min_sparse_subset

from conftest import random_bounded_graph


def brute_min_ratio(g, region, max_size):
    """Reference scan with explicit tie-breaks: ratio, size, lex tuple."""
    best = None
    region = tuple(sorted(region))
    for size in range(1, max_size + 1):
        for s in itertools.combinations(region, size):
            ratio = bg.boundary_size(g, s) / size
            key = (ratio, size, s)
            if best is None or key < best:
                best = key
    return best


def brute_min_sparse(g, region, c):
    region = tuple(sorted(region))
    for size in range(1, len(region)):
        candidates = [
            s
            for s in itertools.combinations(region, size)
            if bg.boundary_size(g, s) < c * size
        ]
        if candidates:
            return min(candidates)
    return None


def test_min_ratio_matches_brute_force():
    rng = np.random.default_rng(41)
    for _ in range(40):
        n = int(rng.integers(2, 12))
        g = random_bounded_graph(rng, n, int(rng.integers(2, 5)))
        ratio, witness = min_ratio_subset(g, range(n), max(1, n // 2))
        b_ratio, b_size, b_set = brute_min_ratio(g, range(n), max(1, n // 2))
        assert ratio == b_ratio
        assert witness == b_set


def test_min_ratio_on_subregions():
    rng = np.random.default_rng(43)
    for _ in range(25):
        n = int(rng.integers(6, 14))
        g = random_bounded_graph(rng, n, 4)
        region = tuple(
            int(v) for v in rng.choice(n, size=int(rng.integers(2, n)), replace=False)
        )
        cap = max(1, len(region) // 2)
        ratio, witness = min_ratio_subset(g, region, cap)
        b_ratio, _, b_set = brute_min_ratio(g, region, cap)
        assert ratio == b_ratio and witness == b_set


def test_min_sparse_matches_brute_force():
    rng = np.random.default_rng(47)
    for _ in range(40):
        n = int(rng.integers(2, 12))
        g = random_bounded_graph(rng, n, int(rng.integers(2, 5)))
        for c in (0.3, 0.75, 1.5, 2.5):
            got = min_sparse_subset(g, range(n), c)
            want = brute_min_sparse(g, range(n), c)
            assert got == want


def test_tie_break_prefers_small_then_lex():
    # edgeless region: every subset has boundary 0, so the scan must land
    # on the single smallest lexicographic witness, vertex 0
    g = bg.build_graph(6, [], 2)
    ratio, witness = min_ratio_subset(g, range(6), 3)
    assert ratio == 0.0 and witness == (0,)
    assert min_sparse_subset(g, range(6), 0.5) == (0,)


def test_lex_tie_break_across_chunks(monkeypatch):
    # force tiny chunks so equal-size candidates straddle chunk boundaries
    import boxgap.exhaustive as ex

    monkeypatch.setattr(ex, "CHUNK_BITS", 2)
    rng = np.random.default_rng(53)
    for _ in range(10):
        n = int(rng.integers(5, 10))
        g = random_bounded_graph(rng, n, 3)
        ratio, witness = ex.min_ratio_subset(g, range(n), n // 2)
        b_ratio, _, b_set = brute_min_ratio(g, range(n), n // 2)
        assert ratio == b_ratio and witness == b_set
        got = ex.min_sparse_subset(g, range(n), 1.2)
        assert got == brute_min_sparse(g, range(n), 1.2)
