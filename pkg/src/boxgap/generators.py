"""Graph families, gluing constructions, sofic verification and
approximate-isomorphism accounting.

Randomized constructions are reproducible from a single integer seed, which
callers should record next to the output.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegreeExceeded,
    IdentityGenerator,
    NotAnIsomorphism,
    NotEnoughRoom,
    NoDegreeHeadroom,
    NotSymmetric,
    UnknownLabel,
)
from .graph import (
    BoxSpace,
    Graph,
    ball_of_set,
    build_graph,
    disjoint_union,
    vertex_set,
)


# ---------------------------------------------------------------------------
# Finite groups with a canonical element enumeration


class CyclicGroup:
    """Z/n with elements 0..n-1."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("order must be positive")
        self.n = n

    def elements(self):
        return list(range(self.n))

    def multiply(self, a, b):
        return (a + b) % self.n

    def inverse(self, a):
        return (-a) % self.n

    def identity(self):
        return 0


class ProductGroup:
    """Direct product of cyclic groups, elements as tuples in lex order."""

    def __init__(self, moduli):
        self.moduli = tuple(int(m) for m in moduli)
        if any(m < 1 for m in self.moduli):
            raise ValueError("moduli must be positive")

    def elements(self):
        return [tuple(e) for e in itertools.product(*(range(m) for m in self.moduli))]

    def multiply(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def inverse(self, a):
        return tuple((-x) % m for x, m in zip(a, self.moduli))

    def identity(self):
        return tuple(0 for _ in self.moduli)


class SymmetricGroup:
    """Sym(k) as permutation tuples p with p[i] the image of i, lex order."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("degree must be positive")
        self.k = k

    def elements(self):
        return [tuple(p) for p in itertools.permutations(range(self.k))]

    def multiply(self, a, b):
        # a after b: (a*b)[i] = a[b[i]]
        return tuple(a[b[i]] for i in range(self.k))

    def inverse(self, a):
        inv = [0] * self.k
        for i, j in enumerate(a):
            inv[j] = i
        return tuple(inv)

    def identity(self):
        return tuple(range(self.k))


class SL2Prime:
    """SL(2, Z/p) as tuples (a, b, c, d) with ad - bc = 1, lex order."""

    def __init__(self, p: int):
        if p < 2:
            raise ValueError("p must be at least 2")
        self.p = p

    def elements(self):
        p = self.p
        out = []
        for a, b, c, d in itertools.product(range(p), repeat=4):
            if (a * d - b * c) % p == 1:
                out.append((a, b, c, d))
        return out

    def multiply(self, m1, m2):
        p = self.p
        a1, b1, c1, d1 = m1
        a2, b2, c2, d2 = m2
        return (
            (a1 * a2 + b1 * c2) % p,
            (a1 * b2 + b1 * d2) % p,
            (c1 * a2 + d1 * c2) % p,
            (c1 * b2 + d1 * d2) % p,
        )

    def inverse(self, m):
        a, b, c, d = m
        p = self.p
        return (d % p, (-b) % p, (-c) % p, a % p)

    def identity(self):
        return (1, 0, 0, 1)


def sl2_elementary_generators(p: int) -> list:
    """The four elementary matrices E12(+-1), E21(+-1)."""
    return [
        (1, 1, 0, 1),
        (1, p - 1, 0, 1),
        (1, 0, 1, 1),
        (1, 0, p - 1, 1),
    ]


def cayley_graph(group, gens) -> Graph:
    """Cayley graph of the left multiplication action, x ~ s x.

    The generating set must be symmetric (closed under inverse) and must not
    contain the identity. Edge labels record the index of a generator
    realizing each edge.
    """
    gens = list(gens)
    elements = group.elements()
    index = {e: i for i, e in enumerate(elements)}
    gen_set = set(gens)
    for s in gens:
        if s == group.identity():
            raise IdentityGenerator()
        if group.inverse(s) not in gen_set:
            raise NotSymmetric(s)
    edges = set()
    labels = {}
    for gi, s in enumerate(gens):
        for x in elements:
            y = group.multiply(s, x)
            u, v = index[x], index[y]
            if u == v:
                continue
            key = (min(u, v), max(u, v))
            if key not in edges:
                edges.add(key)
                labels[key] = f"g{gi}"
    return build_graph(
        len(elements), sorted(edges), max(len(gens), 1), edge_labels=labels
    )


# ---------------------------------------------------------------------------
# Explicit families and gluings


def margulis_graph(n: int) -> Graph:
    """Expander family on the n x n torus, degree at most 8.

    Vertex (x, y) is joined to (x+-y, y), (x, y+-x), (x+-1, y), (x, y+-1),
    with duplicate pairs and fixed points collapsed away.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    edges = set()
    for x in range(n):
        for y in range(n):
            u = x * n + y
            images = [
                ((x + y) % n, y),
                ((x - y) % n, y),
                (x, (y + x) % n),
                (x, (y - x) % n),
                ((x + 1) % n, y),
                ((x - 1) % n, y),
                (x, (y + 1) % n),
                (x, (y - 1) % n),
            ]
            for px, py in images:
                v = px * n + py
                if v != u:
                    edges.add((min(u, v), max(u, v)))
    return build_graph(n * n, sorted(edges), 8)


def complete_graph(n: int) -> Graph:
    return build_graph(
        n, [(i, j) for i in range(n) for j in range(i + 1, n)], max(n - 1, 1)
    )


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)], 2)


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)], 2 if n > 2 else 1)


def octahedron() -> Graph:
    """Complete tripartite graph on three antipodal pairs; every link is a
    4-cycle."""
    non_edges = {(0, 3), (1, 4), (2, 5)}
    edges = [
        (i, j)
        for i in range(6)
        for j in range(i + 1, 6)
        if (i, j) not in non_edges
    ]
    return build_graph(6, edges, 4)


def triangular_torus(m: int) -> Graph:
    """Six-regular triangulated torus; every link is a 6-cycle."""
    if m < 4:
        raise ValueError("m must be at least 4 to keep neighbors distinct")
    edges = set()
    for x in range(m):
        for y in range(m):
            u = x * m + y
            for dx, dy in ((1, 0), (0, 1), (1, 1)):
                v = ((x + dx) % m) * m + (y + dy) % m
                edges.add((min(u, v), max(u, v)))
    return build_graph(m * m, sorted(edges), 6)


def glue_pair(g1: Graph, g2: Graph, v1: int, v2: int, d: int | None = None) -> Graph:
    """Disjoint union of two graphs plus one bridge edge (v1, v2).

    The bridge endpoints need headroom under the degree bound d (default:
    the larger of the two input bounds).
    """
    if d is None:
        d = max(g1.degree_bound, g2.degree_bound)
    if g1.degree(v1) >= d:
        raise DegreeExceeded(v1, g1.degree(v1) + 1, d)
    if g2.degree(v2) >= d:
        raise DegreeExceeded(v2, g2.degree(v2) + 1, d)
    base = disjoint_union(g1, g2, d)
    edges = list(base.edges()) + [(v1, g1.n + v2)]
    return build_graph(base.n, edges, d, allow_loops=base.allows_loops)


@dataclass
class GluedExpander:
    graph: Graph
    seed: int
    bijection: tuple  # pairs (y vertex in the union, image in x')
    loops: tuple
    alpha_ratio: float  # |T| / |Y|
    warn_alpha: bool  # alpha_ratio >= 1/2 voids the Cheeger estimate

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "bijection": [list(p) for p in self.bijection],
            "loops": list(self.loops),
            "alpha_ratio": self.alpha_ratio,
            "warn_alpha": self.warn_alpha,
        }


def glued_expander(
    x_prime: Graph, y: Graph, t_set, seed: int = 0, d: int | None = None
) -> GluedExpander:
    """Wire y minus an exempt set T onto x' by a seeded random matching.

    The output is the disjoint union (x' first, then y) with one matching
    edge per vertex of Y \\ T and a loop on every vertex left untouched, so
    every degree grows by exactly one. The output degree bound defaults to
    one more than the larger input bound. Raises NotEnoughRoom when x'
    cannot absorb the matching and NoDegreeHeadroom when a vertex has no
    room under an explicit bound d.
    """
    t_set = vertex_set(y, t_set)
    movers = [v for v in range(y.n) if v not in set(t_set)]
    if len(movers) > x_prime.n:
        raise NotEnoughRoom(len(movers), x_prime.n)
    d_out = d if d is not None else max(x_prime.degree_bound, y.degree_bound) + 1
    for g, off in ((x_prime, 0), (y, x_prime.n)):
        for v in range(g.n):
            if g.degree(v) + 1 > d_out:
                raise NoDegreeHeadroom(v + off, g.degree(v), d_out)
    rng = np.random.default_rng(seed)
    targets = rng.permutation(x_prime.n)[: len(movers)]
    base = disjoint_union(x_prime, y, d_out)
    edges = list(base.edges())
    labels = {}
    matched = set()
    bijection = []
    for v, tgt in zip(movers, targets):
        u = x_prime.n + v
        edges.append((u, int(tgt)))
        labels[(min(u, int(tgt)), max(u, int(tgt)))] = "glue"
        matched.add(u)
        matched.add(int(tgt))
        bijection.append((u, int(tgt)))
    loops = tuple(v for v in range(base.n) if v not in matched)
    for v in loops:
        edges.append((v, v))
        labels[(v, v)] = "glue"
    graph = build_graph(base.n, edges, d_out, allow_loops=True, edge_labels=labels)
    ratio = len(t_set) / y.n if y.n else 0.0
    return GluedExpander(
        graph=graph,
        seed=seed,
        bijection=tuple(bijection),
        loops=loops,
        alpha_ratio=ratio,
        warn_alpha=ratio >= 0.5,
    )


# ---------------------------------------------------------------------------
# Partial permutation actions and the sofic good-set count


@dataclass
class PermAction:
    """Finitely many labelled permutations of a ground set.

    Labels come in inverse pairs; the pairing sigma(s^-1) = sigma(s)^-1 is
    validated unless check_inverses is disabled (actions loaded from raw
    permutation tables may not satisfy it exactly).
    """

    m: int
    perms: dict  # label -> tuple permutation of range(m)
    inverses: dict  # label -> label of the inverse
    check_inverses: bool = True

    def __post_init__(self):
        for label, p in self.perms.items():
            if sorted(p) != list(range(self.m)):
                raise ValueError(f"sigma({label}) is not a bijection")
        for a, b in self.inverses.items():
            if a not in self.perms or b not in self.perms:
                raise UnknownLabel(a if a not in self.perms else b)
        if self.check_inverses:
            for a, b in self.inverses.items():
                pa, pb = self.perms[a], self.perms[b]
                if any(pb[pa[i]] != i for i in range(self.m)):
                    raise ValueError(f"sigma({b}) is not the inverse of sigma({a})")

    def word(self, labels) -> np.ndarray:
        """Permutation of the word, leftmost label applied last."""
        out = np.arange(self.m)
        for label in reversed(list(labels)):
            if label not in self.perms:
                raise UnknownLabel(label)
            out = np.asarray(self.perms[label])[out]
        return out


def cyclic_action(m: int, shifts) -> PermAction:
    """Regular-style action of Z on Z/m: label t^k shifts by k.

    The shift list must be symmetric (contain -k with every k)."""
    shifts = sorted(set(int(k) for k in shifts))
    perms = {}
    inverses = {}
    for k in shifts:
        if k % m == 0:
            raise ValueError("shift must be nontrivial mod m")
        if -k not in shifts:
            raise ValueError(f"shifts must be symmetric, missing {-k}")
        perms[f"t^{k}"] = tuple((i + k) % m for i in range(m))
        inverses[f"t^{k}"] = f"t^{-k}"
    return PermAction(m=m, perms=perms, inverses=inverses)


def with_transposition(action: PermAction, label: str, i: int, j: int) -> PermAction:
    """Pre-compose one labelled permutation (and its inverse partner) with
    the transposition (i j), keeping the inverse pairing intact."""
    if label not in action.perms:
        raise UnknownLabel(label)
    p = list(action.perms[label])
    p[i], p[j] = p[j], p[i]
    perms = dict(action.perms)
    perms[label] = tuple(p)
    partner = action.inverses.get(label)
    if partner and partner != label:
        inv = [0] * action.m
        for a, b in enumerate(p):
            inv[b] = a
        perms[partner] = tuple(inv)
    return PermAction(
        m=action.m, perms=perms, inverses=dict(action.inverses)
    )


@dataclass
class SoficReport:
    good: tuple
    epsilon: float
    multiplicativity_failures: int
    fixed_point_failures: int

    def to_dict(self) -> dict:
        return {
            "good": list(self.good),
            "epsilon": self.epsilon,
            "multiplicativity_failures": self.multiplicativity_failures,
            "fixed_point_failures": self.fixed_point_failures,
        }


def sofic_verify(action: PermAction, relations, check_fixed) -> SoficReport:
    """Good-set count for a partial action.

    relations: triples of words (g, h, gh); a point y is good for the triple
    when sigma(g) sigma(h) y = sigma(gh) y. check_fixed: nontrivial words w
    whose permutation must move every good point. epsilon = 1 - |good| / m.
    """
    m = action.m
    good = np.ones(m, dtype=bool)
    mult_fail = 0
    for g_word, h_word, gh_word in relations:
        pg = action.word(g_word)
        ph = action.word(h_word)
        pgh = action.word(gh_word)
        ok = pg[ph] == pgh
        mult_fail += int(np.sum(~ok))
        good &= ok
    fix_fail = 0
    for w in check_fixed:
        pw = action.word(w)
        moved = pw != np.arange(m)
        fix_fail += int(np.sum(~moved))
        good &= moved
    eps = 1.0 - float(np.sum(good)) / m if m else 0.0
    return SoficReport(
        good=tuple(int(i) for i in np.flatnonzero(good)),
        epsilon=eps,
        multiplicativity_failures=mult_fail,
        fixed_point_failures=fix_fail,
    )


# ---------------------------------------------------------------------------
# Approximate isomorphism witnesses


@dataclass
class WitnessEntry:
    """Matched subgraphs at one index: vertices_x[i] maps to vertices_x2[i],
    and edges_x (in x coordinates) exist on both sides."""

    vertices_x: tuple
    vertices_x2: tuple
    edges_x: tuple

    def to_dict(self) -> dict:
        return {
            "vertices_x": list(self.vertices_x),
            "vertices_x2": list(self.vertices_x2),
            "edges_x": [list(e) for e in self.edges_x],
        }


@dataclass
class ApproxIsoWitness:
    entries: list

    def to_dict(self) -> dict:
        return {"entries": [e.to_dict() for e in self.entries]}

    @classmethod
    def from_dict(cls, data) -> "ApproxIsoWitness":
        return cls(
            entries=[
                WitnessEntry(
                    vertices_x=tuple(e["vertices_x"]),
                    vertices_x2=tuple(e["vertices_x2"]),
                    edges_x=tuple((int(u), int(v)) for u, v in e["edges_x"]),
                )
                for e in data["entries"]
            ]
        )


@dataclass
class ApproxIsoReport:
    ratios: list  # per index: dict with the four fractions
    verdict: bool
    tail_start: int
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "ratios": self.ratios,
            "verdict": self.verdict,
            "tail_start": self.tail_start,
            "tolerance": self.tolerance,
        }


def approx_iso_check(
    x: BoxSpace, x2: BoxSpace, witness: ApproxIsoWitness, tolerance: float = 0.05
) -> ApproxIsoReport:
    """Verify a matched-subgraph witness and report the four ratio sequences.

    Every listed edge must exist in x and, under the vertex map, in x2
    (NotAnIsomorphism otherwise). The verdict requires all four ratios to
    reach 1 - tolerance on the last quarter of the indices.
    """
    if not (len(x.graphs) == len(x2.graphs) == len(witness.entries)):
        raise ValueError("witness must align with both sequences")
    ratios = []
    for i, entry in enumerate(witness.entries):
        g, g2 = x.graphs[i], x2.graphs[i]
        if len(entry.vertices_x) != len(entry.vertices_x2):
            raise NotAnIsomorphism(i, None, "vertex lists differ in length")
        vmap = dict(zip(entry.vertices_x, entry.vertices_x2))
        if len(vmap) != len(entry.vertices_x):
            raise NotAnIsomorphism(i, None, "duplicate vertices in witness")
        for u, v in entry.edges_x:
            if u not in vmap or v not in vmap:
                raise NotAnIsomorphism(i, (u, v), "edge endpoint not matched")
            if not g.has_edge(u, v):
                raise NotAnIsomorphism(i, (u, v), "not an edge on the left")
            if not g2.has_edge(vmap[u], vmap[v]):
                raise NotAnIsomorphism(i, (u, v), "not an edge on the right")
        e_matched = len(entry.edges_x)
        ratios.append(
            {
                "vertices_x": len(entry.vertices_x) / g.n if g.n else 1.0,
                "vertices_x2": len(entry.vertices_x2) / g2.n if g2.n else 1.0,
                "edges_x": e_matched / g.num_edges if g.num_edges else 1.0,
                "edges_x2": e_matched / g2.num_edges if g2.num_edges else 1.0,
            }
        )
    n = len(ratios)
    tail_start = n - max(1, n // 4) if n else 0
    verdict = all(
        all(v >= 1.0 - tolerance for v in r.values()) for r in ratios[tail_start:]
    )
    return ApproxIsoReport(
        ratios=ratios, verdict=verdict, tail_start=tail_start, tolerance=tolerance
    )


def core_density(x: BoxSpace, subsets, radius: int) -> list:
    """Density of the radius-ball around each complement, with the growth
    bound d^(R+1) |Y^c| / |X| it must respect."""
    out = []
    for g, y in zip(x.graphs, subsets):
        yc = sorted(set(range(g.n)) - set(vertex_set(g, y)))
        if yc:
            blob = ball_of_set(g, yc, radius)
            density = len(blob) / g.n
        else:
            density = 0.0
        bound = x.d ** (radius + 1) * len(yc) / g.n if g.n else 0.0
        out.append(
            {
                "density": density,
                "bound": bound,
                "ok": density <= bound or not yc,
                "complement_size": len(yc),
            }
        )
    return out
