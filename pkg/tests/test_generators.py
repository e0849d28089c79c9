import numpy as np
import pytest

import boxgap as bg
from boxgap.errors import (
    DegreeExceeded,
    IdentityGenerator,
    NotAnIsomorphism,
    NotEnoughRoom,
    NotSymmetric,
)

# Frozen spectral gaps of the torus family, measured with the dense solver
# (n <= 22) and the restarted Krylov solver (n = 23, 24).
MARGULIS_GAPS = {
    4: 2.221543, 5: 1.695381, 6: 1.344046, 7: 1.128767, 8: 0.983978,
    9: 0.883554, 10: 0.808019, 11: 0.750626, 12: 0.704343, 13: 0.666907,
    14: 0.635443, 15: 0.608807, 16: 0.585765, 17: 0.565835, 18: 0.548167,
    19: 0.532559, 20: 0.518515, 21: 0.505917, 22: 0.494464, 23: 0.484075,
    24: 0.474509,
}


def test_cayley_cyclic_is_cycle():
    g = bg.cayley_graph(bg.CyclicGroup(5), [1, 4])
    assert sorted(g.edges()) == sorted(bg.cycle_graph(5).edges())


def test_cayley_klein_four_is_k4():
    group = bg.ProductGroup([2, 2])
    gens = [(0, 1), (1, 0), (1, 1)]
    g = bg.cayley_graph(group, gens)
    assert sorted(g.edges()) == sorted(bg.complete_graph(4).edges())


def test_cayley_sym3_transpositions():
    group = bg.SymmetricGroup(3)
    gens = [(1, 0, 2), (2, 1, 0), (0, 2, 1)]
    g = bg.cayley_graph(group, gens)
    assert g.n == 6
    assert all(g.degree(v) == 3 for v in range(6))
    comps = bg.connected_components(g)
    assert len(comps) == 1
    # bipartite by parity: it is K_3,3, whose Laplacian spectrum is known
    evs = bg.graph_spectrum(g).eigenvalues
    assert np.allclose(evs, [0, 3, 3, 3, 3, 6], atol=1e-9)


def test_cayley_validation():
    with pytest.raises(NotSymmetric):
        bg.cayley_graph(bg.CyclicGroup(5), [1])
    with pytest.raises(IdentityGenerator):
        bg.cayley_graph(bg.CyclicGroup(5), [0, 1, 4])


def test_cayley_sl2():
    group = bg.SL2Prime(3)
    gens = bg.sl2_elementary_generators(3)
    g = bg.cayley_graph(group, gens)
    assert g.n == 24  # |SL(2, Z/3)|
    assert len(bg.connected_components(g)) == 1
    assert g.max_degree() <= 4


def test_cayley_vertex_transitive_spectrum():
    group = bg.CyclicGroup(12)
    g = bg.cayley_graph(group, [1, 11, 3, 9])
    degs = {g.degree(v) for v in range(g.n)}
    assert len(degs) == 1
    # right translation by any element is a graph automorphism
    elements = group.elements()
    shift = 5
    perm = [elements.index(group.multiply(x, shift)) for x in elements]
    edges = [(perm[u], perm[v]) for u, v in g.edges()]
    g2 = bg.build_graph(g.n, edges, g.degree_bound)
    assert np.allclose(
        bg.graph_spectrum(g).eigenvalues,
        bg.graph_spectrum(g2).eigenvalues,
        atol=1e-9,
    )


def test_margulis_smallest():
    g = bg.margulis_graph(2)
    assert g.n == 4
    assert g.max_degree() <= 8


def test_margulis_gap_regression():
    for n, frozen in MARGULIS_GAPS.items():
        gap = bg.graph_spectrum(bg.margulis_graph(n)).gap
        assert gap == pytest.approx(frozen, abs=5e-5)
        assert gap >= 0.3  # empirical family floor


def test_margulis_family_uniformity():
    g8 = bg.graph_spectrum(bg.margulis_graph(8)).gap
    g16 = bg.graph_spectrum(bg.margulis_graph(16)).gap
    assert g16 >= 0.5 * g8


def test_glue_pair_k4s():
    g = bg.glue_pair(bg.complete_graph(4), bg.complete_graph(4), 0, 0, d=4)
    assert g.n == 8
    assert bg.cheeger_exact(g).h == pytest.approx(0.25)


def test_glue_pair_single_vertices():
    one = bg.build_graph(1, [], 1)
    g = bg.glue_pair(one, one, 0, 0)
    assert sorted(g.edges()) == [(0, 1)]


def test_glue_pair_no_headroom():
    with pytest.raises(DegreeExceeded):
        bg.glue_pair(bg.complete_graph(4), bg.complete_graph(4), 0, 0)


def test_glue_pair_kills_margulis_gap():
    m = bg.margulis_graph(8)
    gap_single = bg.graph_spectrum(m).gap
    pair = bg.glue_pair(m, m, 0, 0, d=8)
    assert bg.graph_spectrum(pair).gap < gap_single
    # bridge-cut witness caps the Cheeger constant
    assert bg.boundary_size(pair, tuple(range(64))) == 1


def test_glue_pair_cheeger_upper_bound(small_corpus):
    for g1 in small_corpus[:6]:
        if g1.n < 1 or g1.allows_loops:
            continue
        d = max(g1.degree_bound, 2) + 1
        g = bg.glue_pair(g1, g1, 0, 0, d=d)
        if g.n <= 24:
            assert bg.cheeger_exact(g).h <= 1 / g1.n + 1e-12


def test_glued_expander_nothing_to_wire():
    y = bg.cycle_graph(4)
    x = bg.complete_graph(6)
    res = bg.glued_expander(x, y, t_set=range(4), seed=3)
    g = res.graph
    assert g.n == 10
    # no matching edges, a loop everywhere, every degree one higher
    assert res.bijection == ()
    assert len(res.loops) == 10
    for v in range(6):
        assert g.degree(v) == x.degree(v) + 1
    for v in range(4):
        assert g.degree(6 + v) == y.degree(v) + 1


def test_glued_expander_half_alpha_flagged():
    res = bg.glued_expander(bg.complete_graph(6), bg.cycle_graph(4), (0, 1), seed=0)
    assert res.alpha_ratio == pytest.approx(0.5)
    assert res.warn_alpha
    g = res.graph
    assert g.n == 10
    for v in range(10):
        base = bg.complete_graph(6) if v < 6 else bg.cycle_graph(4)
        assert g.degree(v) == base.degree(v if v < 6 else v - 6) + 1


def test_glued_expander_margulis():
    x = bg.margulis_graph(6)
    y = bg.margulis_graph(4)
    t = bg.ball(y, 0, 0)
    assert len(t) <= 0.25 * y.n
    res = bg.glued_expander(x, y, t, seed=11)
    assert not res.warn_alpha
    assert len(bg.connected_components(res.graph)) == 1
    assert bg.cheeger_sweep(res.graph).h > 0


def test_glued_expander_reproducible():
    a = bg.glued_expander(bg.complete_graph(6), bg.cycle_graph(4), (0,), seed=5)
    b = bg.glued_expander(bg.complete_graph(6), bg.cycle_graph(4), (0,), seed=5)
    assert a.bijection == b.bijection
    assert sorted(a.graph.edges()) == sorted(b.graph.edges())


def test_glued_expander_not_enough_room():
    with pytest.raises(NotEnoughRoom):
        bg.glued_expander(bg.complete_graph(3), bg.cycle_graph(8), ())


def test_sofic_clean_action():
    action = bg.cyclic_action(101, [k for k in range(-50, 51) if k])
    relations = [
        ([f"t^{a}"], [f"t^{b}"], [f"t^{a + b}"])
        for a in (-50, -13, -2, 1, 7, 25)
        for b in (-21, -1, 3, 8, 25)
        if a + b != 0 and abs(a + b) <= 50
    ]
    fixed = [[f"t^{k}"] for k in (-50, -7, 1, 3, 50)]
    rep = bg.sofic_verify(action, relations, fixed)
    assert rep.epsilon == 0.0
    assert len(rep.good) == 101


def test_sofic_empty_relations_vacuous():
    action = bg.cyclic_action(7, [-1, 1])
    rep = bg.sofic_verify(action, [], [])
    assert rep.epsilon == 0.0


def test_sofic_single_defect():
    action = bg.cyclic_action(101, [k for k in range(-50, 51) if k])
    corrupted = bg.with_transposition(action, "t^1", 30, 29)
    relations = [
        ([f"t^{a}"], [f"t^{b}"], [f"t^{a + b}"])
        for a in (-5, 2, 7)
        for b in (3, -2)
        if a + b != 0
    ]
    rep = bg.sofic_verify(corrupted, relations, [["t^1"]])
    assert rep.epsilon == pytest.approx(1 / 101)
    assert 30 not in rep.good


def test_sofic_word_composition():
    action = bg.cyclic_action(10, [-1, 1, -3, 3])
    # sigma(t^1)^3 equals sigma(t^3) pointwise on the regular action
    rep = bg.sofic_verify(
        action, [(["t^1", "t^1", "t^1"], [], ["t^3"])], []
    )
    assert rep.epsilon == 0.0


def test_approx_iso_identity():
    box = bg.BoxSpace(graphs=[bg.cycle_graph(6), bg.complete_graph(5)], d=4)
    witness = bg.ApproxIsoWitness(
        entries=[
            bg.WitnessEntry(
                vertices_x=tuple(range(g.n)),
                vertices_x2=tuple(range(g.n)),
                edges_x=tuple(g.edges()),
            )
            for g in box.graphs
        ]
    )
    rep = bg.approx_iso_check(box, box, witness, tolerance=0.0)
    assert rep.verdict
    assert all(v == 1.0 for r in rep.ratios for v in r.values())


def test_approx_iso_corrupted_witness():
    box = bg.BoxSpace(graphs=[bg.cycle_graph(6)], d=2)
    witness = bg.ApproxIsoWitness(
        entries=[
            bg.WitnessEntry(
                vertices_x=(0, 1, 2, 3, 4, 5),
                vertices_x2=(0, 1, 2, 3, 4, 5),
                edges_x=((0, 2),),  # not an edge of C_6
            )
        ]
    )
    with pytest.raises(NotAnIsomorphism):
        bg.approx_iso_check(box, box, witness)


def test_approx_iso_tail_verdict():
    graphs = [bg.cycle_graph(8)] * 8
    box = bg.BoxSpace(graphs=graphs, d=2)
    entries = []
    for i, g in enumerate(graphs):
        keep = g.n if i >= 4 else g.n - 4  # early indices are bad
        vs = tuple(range(keep))
        es = tuple((u, v) for u, v in g.edges() if u < keep and v < keep)
        entries.append(bg.WitnessEntry(vs, vs, es))
    rep = bg.approx_iso_check(box, box, bg.ApproxIsoWitness(entries), 0.01)
    assert rep.verdict  # last quarter is perfect
    assert rep.tail_start == 6


def test_witness_json_roundtrip():
    w = bg.ApproxIsoWitness(
        entries=[bg.WitnessEntry((0, 1), (1, 0), ((0, 1),))]
    )
    back = bg.ApproxIsoWitness.from_dict(w.to_dict())
    assert back.entries[0].vertices_x == (0, 1)
    assert back.entries[0].edges_x == ((0, 1),)


def test_core_density_trivial_cases():
    box = bg.BoxSpace(graphs=[bg.cycle_graph(6), bg.cycle_graph(8)], d=2)
    full = [tuple(range(6)), tuple(range(8))]
    out = bg.core_density(box, full, radius=2)
    assert [o["density"] for o in out] == [0.0, 0.0]
    empty = [(), ()]
    out = bg.core_density(box, empty, radius=1)
    assert [o["density"] for o in out] == [1.0, 1.0]


def test_core_density_single_complement_vertex():
    g = bg.margulis_graph(4)
    box = bg.BoxSpace(graphs=[g], d=8)
    y = tuple(v for v in range(g.n) if v != 5)
    out = bg.core_density(box, [y], radius=1)
    assert out[0]["density"] <= (8 + 1) / g.n
    assert out[0]["ok"]


def test_core_density_bound_holds():
    rng = np.random.default_rng(9)
    box = bg.BoxSpace(
        graphs=[bg.margulis_graph(n) for n in (4, 6, 8)], d=8
    )
    for radius in (1, 2, 3):
        subsets = []
        for g in box.graphs:
            drop = rng.choice(g.n, size=max(1, g.n // 20), replace=False)
            subsets.append(tuple(v for v in range(g.n) if v not in set(drop)))
        for entry in bg.core_density(box, subsets, radius):
            assert entry["ok"]
            assert entry["density"] <= entry["bound"]
