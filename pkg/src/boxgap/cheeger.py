"""Cheeger constants: exact by exhaustive scan, sweep-cut bounds, and the
spectral sandwich between them.

The Cheeger constant used throughout is vertex-normalized, h = min |∂S|/|S|
over nonempty S with |S| <= n/2. The spectral reference value for the
sandwich is the second-smallest Laplacian eigenvalue counted with
multiplicity (0 for a disconnected graph, the gap for a connected one),
which keeps h >= lambda/2 valid on disconnected inputs where h = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import exhaustive
from .errors import TooLargeForExact
from .graph import Graph, connected_components, induced_subgraph
from .spectral import DENSE_LIMIT, laplacian, spectrum

EXACT_CAP = 24


@dataclass
class CheegerReport:
    h: float
    witness: tuple
    method: str  # "exact" | "sweep"
    lower_bound: float  # lambda_2 / 2
    upper_bound: float  # sqrt(2 d lambda_2)

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "witness": list(self.witness),
            "method": self.method,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
        }


def second_eigenvalue(g: Graph, tol: float = 1e-9) -> float:
    """Second-smallest Laplacian eigenvalue, multiplicity counted."""
    if g.n < 2:
        return 0.0
    rep = spectrum(laplacian(g), k=2 if g.n > DENSE_LIMIT else g.n, tol=tol,
                   kernel_dim=1)
    return float(rep.eigenvalues[1])


def _bounds(g: Graph, tol: float = 1e-9):
    lam = second_eigenvalue(g, tol)
    lam = max(lam, 0.0)
    return lam / 2.0, math.sqrt(2.0 * g.degree_bound * lam)


def _smallest_component(g: Graph) -> tuple:
    comps = connected_components(g)
    return min(comps, key=lambda c: (len(c), c))


def cheeger_exact(g: Graph, exact_cap: int = EXACT_CAP) -> CheegerReport:
    """Exact Cheeger constant by exhaustive subset scan.

    Disconnected graphs short-circuit to h = 0 with the smallest component
    as witness; connected graphs above the cap raise TooLargeForExact.
    """
    lower, upper = _bounds(g)
    if g.n < 2:
        return CheegerReport(0.0, (), "exact", lower, upper)
    comps = connected_components(g)
    if len(comps) > 1:
        return CheegerReport(0.0, _smallest_component(g), "exact", lower, upper)
    if g.n > exact_cap:
        raise TooLargeForExact(g.n, exact_cap)
    ratio, witness = exhaustive.min_ratio_subset(g, range(g.n), g.n // 2)
    return CheegerReport(float(ratio), witness, "exact", lower, upper)


def _fiedler_order(sub: Graph) -> np.ndarray:
    """Vertex order of the induced component by Fiedler value, stable."""
    if sub.n <= 2:
        return np.arange(sub.n)
    lap = laplacian(sub)
    if sub.n <= DENSE_LIMIT:
        _, vecs = np.linalg.eigh(lap.dense())
        fiedler = vecs[:, 1]
    else:
        import scipy.sparse as sp
        import scipy.sparse.linalg as spla

        sigma = float(np.abs(lap.matrix).sum(axis=1).max()) + 1.0
        shifted = sp.identity(sub.n, format="csr") * sigma - lap.matrix
        mu, vecs = spla.eigsh(shifted, k=2, which="LA")
        order = np.argsort(sigma - mu)
        fiedler = vecs[:, order[1]]
    return np.argsort(fiedler, kind="stable")


def _sweep_component(g: Graph, comp: tuple):
    """Best sweep cut of one component; returns (ratio, witness)."""
    sub, idx_map = induced_subgraph(g, comp)
    order = _fiedler_order(sub)
    n = sub.n
    in_set = np.zeros(n, dtype=bool)
    boundary = 0
    best = (np.inf, ())
    for k in range(n - 1):
        v = int(order[k])
        inside = sum(1 for w in sub.adjacency[v] if w != v and in_set[w])
        boundary += sub.nonloop_degree(v) - 2 * inside
        in_set[v] = True
        size = min(k + 1, n - (k + 1))
        ratio = boundary / size
        if ratio < best[0]:
            if k + 1 <= n // 2:
                side = [idx_map[int(u)] for u in order[: k + 1]]
            else:
                side = [idx_map[int(u)] for u in order[k + 1:]]
            best = (ratio, tuple(sorted(side)))
    return best


def cheeger_sweep(g: Graph, tol: float = 1e-9) -> CheegerReport:
    """Fiedler sweep upper bound on the Cheeger constant.

    On disconnected graphs the answer is exactly 0 (one component is the
    witness), so the sweep runs only on connected inputs.
    """
    lower, upper = _bounds(g, tol)
    if g.n < 2:
        return CheegerReport(0.0, (), "sweep", lower, upper)
    comps = connected_components(g)
    if len(comps) > 1:
        return CheegerReport(0.0, _smallest_component(g), "sweep", lower, upper)
    ratio, witness = _sweep_component(g, comps[0])
    return CheegerReport(float(ratio), witness, "sweep", lower, upper)


def cheeger_sandwich_check(
    g: Graph, tol: float = 1e-9, exact_cap: int = EXACT_CAP
) -> bool:
    """Verify lambda/2 - tol <= h <= sqrt(2 d lambda) + tol.

    Uses the exact Cheeger value when feasible, else the Fiedler sweep
    value, which satisfies the same sandwich: it upper-bounds h from a
    witnessed cut and the sweep cut itself achieves the sqrt(2 d lambda)
    bound.
    """
    lower, upper = _bounds(g, tol)
    exact_possible = g.n < 2 or len(connected_components(g)) > 1 or g.n <= exact_cap
    rep = cheeger_exact(g, exact_cap) if exact_possible else cheeger_sweep(g, tol)
    return lower - tol <= rep.h <= upper + tol


def inner_expansion_exact(g: Graph, piece, exact_cap: int = EXACT_CAP):
    """Exact min over T within the piece, |T| <= |piece|/2, of |∂T|/|T|.

    The boundary is ambient (edges leaving the piece count), so for a piece
    with empty boundary this is the piece's Cheeger constant.
    """
    piece = tuple(sorted(piece))
    if len(piece) > exact_cap:
        raise TooLargeForExact(len(piece), exact_cap)
    if len(piece) < 2:
        return None, None
    return exhaustive.min_ratio_subset(g, piece, len(piece) // 2)
