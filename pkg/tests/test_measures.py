import numpy as np
import pytest

import oracles
from conftest import graph_from

from rdftopo.measures import (
    UndefinedMeasureError,
    basic_counts,
    centralization,
    compute_report,
    degree_stats,
    fill,
    h_index,
    pagerank,
    pseudo_diameter,
    reciprocity,
    weak_components,
)


def test_basic_counts_parallel_pair(parallel_pair_graph):
    assert basic_counts(parallel_pair_graph) == (2, 2, 1, 1)


def test_basic_counts_empty():
    assert basic_counts(graph_from([], n=0)) == (0, 0, 0, 0)


def test_basic_counts_all_distinct(tiny_graph):
    counts = basic_counts(tiny_graph)
    assert (counts.m_u, counts.m_p) == (3, 0)


def test_degree_stats_hand_example(tiny_graph):
    stats = degree_stats(tiny_graph)
    assert stats.d_max == 3  # vertex a
    assert stats.d_max_in == 1
    assert stats.d_max_out == 2
    assert stats.z == 1.0
    assert stats.z_in == stats.z_out == 1.0
    assert stats.z_total == 2.0


def test_degree_stats_self_loop():
    graph = graph_from([(0, 0)], n=1)
    stats = degree_stats(graph)
    assert stats.d_max == 2
    assert stats.d_max_in == 1
    assert stats.d_max_out == 1
    assert stats.z == 1.0


def test_degree_stats_directed_cycle():
    k = 6
    graph = graph_from([(i, (i + 1) % k) for i in range(k)], n=k)
    stats = degree_stats(graph)
    assert stats.d_max == 2
    assert stats.z == 1.0


def test_degree_stats_empty_graph_is_undefined():
    with pytest.raises(UndefinedMeasureError):
        degree_stats(graph_from([], n=0))


def test_h_index_definition_scan():
    # degree multiset {5,4,3,2,1} as in-degrees of a 5-vertex graph
    edges = []
    targets = [5, 4, 3, 2, 1]
    source = 0
    for v, want in enumerate(targets):
        for _ in range(want):
            edges.append((source, v))
            source = (source + 1) % 5
    graph = graph_from(edges, n=5)
    assert sorted(graph.d_in.tolist(), reverse=True) == targets
    assert h_index(graph, "in") == 3
    assert h_index(graph, "in") == oracles.h_index(graph.d_in.tolist())


def test_h_index_k_regular():
    k = 4
    edges = [(u, v) for u in range(k) for v in range(k)]
    graph = graph_from(edges, n=k)  # every vertex in-degree k
    assert h_index(graph, "in") == k


def test_h_index_empty():
    assert h_index(graph_from([], n=0), "in") == 0
    assert h_index(graph_from([], n=0), "total") == 0


def test_h_index_directed_uses_in_only():
    graph = graph_from([(0, 1), (0, 2), (0, 3)], n=4)
    assert h_index(graph, "in") == 1
    assert h_index(graph, "total") == 1
    assert h_index(graph_from([(0, 1), (1, 0)], n=2), "total") == 2


def test_h_d_never_exceeds_h_u():
    rng = np.random.default_rng(11)
    for _ in range(25):
        n, edges = oracles.random_multigraph(rng, max_n=20, max_m=60)
        graph = graph_from(edges, n=n)
        assert h_index(graph, "in") <= h_index(graph, "total")


def test_pagerank_two_cycle_symmetry():
    graph = graph_from([(0, 1), (1, 0)], n=2)
    result = pagerank(graph)
    assert result.converged
    assert result.scores == pytest.approx([0.5, 0.5], abs=1e-12)


def test_pagerank_single_dangling_vertex():
    graph = graph_from([], n=1)
    result = pagerank(graph)
    assert result.scores[0] == pytest.approx(1.0, abs=1e-12)


def test_pagerank_chain_matches_dense_oracle():
    edges = [(0, 1), (1, 2)]
    graph = graph_from(edges, n=3)
    result = pagerank(graph, damping=0.85)
    expected = oracles.pagerank_dense(3, edges, damping=0.85)
    assert np.abs(result.scores - expected).max() < 1e-6
    assert abs(result.scores.sum() - 1.0) <= 1e-8


def test_pagerank_parallel_edges_weight_transitions():
    # 0 sends two parallel edges to 1 and one to 2: 1 gets twice the flow
    graph = graph_from([(0, 1), (0, 1), (0, 2)], n=3)
    expected = oracles.pagerank_dense(3, [(0, 1), (0, 1), (0, 2)])
    assert np.abs(pagerank(graph).scores - expected).max() < 1e-6


def test_pagerank_non_convergence_is_flagged():
    graph = graph_from([(0, 1), (1, 0)], n=2)
    result = pagerank(graph, tol=0.0, max_iter=3)
    assert not result.converged
    assert result.iterations == 3


def test_pagerank_rejects_bad_damping():
    with pytest.raises(ValueError):
        pagerank(graph_from([(0, 1)], n=2), damping=1.5)


def test_centralization_star_is_one():
    for n in (3, 5, 12):
        star = graph_from([(0, leaf) for leaf in range(1, n)], n=n)
        assert centralization(star) == pytest.approx(1.0, abs=1e-12)


def test_centralization_cycle_is_zero():
    for k in (3, 7):
        cycle = graph_from([(i, (i + 1) % k) for i in range(k)], n=k)
        assert centralization(cycle) == pytest.approx(0.0, abs=1e-12)


def test_centralization_hand_example(tiny_graph):
    # dedup degrees (3,2,1): sum(3-d) = 3, denominator 2 -> 1.5
    assert centralization(tiny_graph) == pytest.approx(1.5, abs=1e-12)


def test_centralization_ignores_parallel_edges():
    base = graph_from([(0, 1), (1, 2), (2, 0)], n=3)
    doubled = graph_from([(0, 1), (0, 1), (1, 2), (1, 2), (2, 0), (2, 0)], n=3)
    assert centralization(doubled) == pytest.approx(centralization(base), abs=1e-15)


def test_centralization_needs_three_vertices():
    with pytest.raises(UndefinedMeasureError):
        centralization(graph_from([(0, 1)], n=2))


def test_fill_complete_directed_with_loops():
    n = 4
    edges = [(u, v) for u in range(n) for v in range(n)]
    result = fill(graph_from(edges, n=n))
    assert result.p == pytest.approx(1.0, abs=1e-15)
    assert result.p_u == pytest.approx(1.0, abs=1e-15)


def test_fill_parallel_pair(parallel_pair_graph):
    result = fill(parallel_pair_graph)
    assert result.p == pytest.approx(0.5, abs=1e-15)
    assert result.p_u == pytest.approx(0.25, abs=1e-15)


def test_fill_single_vertex_no_edges():
    assert fill(graph_from([], n=1)).p == 0.0


def test_fill_empty_is_undefined():
    with pytest.raises(UndefinedMeasureError):
        fill(graph_from([], n=0))


def test_reciprocity_fully_bidirectional():
    graph = graph_from([(0, 1), (1, 0)], n=2)
    assert reciprocity(graph).y == pytest.approx(1.0)


def test_reciprocity_none():
    graph = graph_from([(0, 1), (0, 2)], n=3)
    assert reciprocity(graph) == (0.0, 0)


def test_reciprocity_counts_edge_instances():
    # {a p1 b, a p2 b, b q a} -> every instance has a reverse pair
    graph = graph_from([(0, 1), (0, 1), (1, 0)], n=2, attrs=[1, 2, 3])
    result = reciprocity(graph)
    assert result.m_bi == 3
    assert result.y == pytest.approx(1.0)


def test_reciprocity_self_loop_is_reciprocated():
    graph = graph_from([(0, 0), (0, 1)], n=2)
    assert reciprocity(graph).m_bi == 1


def test_reciprocity_empty_is_undefined():
    with pytest.raises(UndefinedMeasureError):
        reciprocity(graph_from([], n=1))


def test_pseudo_diameter_path_is_exact():
    for k in (1, 4, 9):
        path = graph_from([(i, i + 1) for i in range(k)], n=k + 1)
        assert pseudo_diameter(path) == k


def test_pseudo_diameter_star():
    star = graph_from([(0, leaf) for leaf in range(1, 6)], n=6)
    assert pseudo_diameter(star) == 2


def test_pseudo_diameter_isolated_vertex():
    assert pseudo_diameter(graph_from([], n=1)) == 0
    assert pseudo_diameter(graph_from([], n=5)) == 0


def test_pseudo_diameter_uses_largest_weak_component():
    # component {0,1,2} as a path, component {3,4,5,6,7} as a longer path
    edges = [(0, 1), (1, 2), (3, 4), (4, 5), (5, 6), (6, 7)]
    graph = graph_from(edges, n=8)
    assert pseudo_diameter(graph) == 4


def test_pseudo_diameter_exact_on_random_trees():
    rng = np.random.default_rng(23)
    for _ in range(30):
        n = int(rng.integers(2, 40))
        edges = oracles.random_tree_edges(rng, n)
        graph = graph_from(edges, n=n)
        assert pseudo_diameter(graph) == oracles.exact_diameter(n, edges)


def test_pseudo_diameter_bounded_by_exact_diameter():
    rng = np.random.default_rng(31)
    for _ in range(40):
        n, edges = oracles.random_multigraph(rng, max_n=30, max_m=80)
        graph = graph_from(edges, n=n)
        assert pseudo_diameter(graph) <= oracles.exact_diameter(n, edges)


def test_weak_components_labels():
    graph = graph_from([(0, 1), (2, 3)], n=5)
    labels = weak_components(graph).tolist()
    assert labels[0] == labels[1]
    assert labels[2] == labels[3]
    assert len({labels[0], labels[2], labels[4]}) == 3


def test_duplicating_edges_leaves_dedup_measures_unchanged():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n, edges = oracles.random_multigraph(rng, max_n=15, max_m=40)
        if not edges:
            continue
        graph = graph_from(edges, n=n)
        doubled = graph_from(edges + edges, n=n)
        assert basic_counts(graph).m_u == basic_counts(doubled).m_u
        assert fill(graph).p_u == pytest.approx(fill(doubled).p_u, abs=1e-15)
        if n >= 3:
            assert centralization(graph) == pytest.approx(
                centralization(doubled), abs=1e-15
            )
        assert pseudo_diameter(graph) == pseudo_diameter(doubled)


def test_isolated_vertex_invariance():
    rng = np.random.default_rng(13)
    for _ in range(20):
        n, edges = oracles.random_multigraph(rng, max_n=15, max_m=40)
        if not edges:
            continue
        graph = graph_from(edges, n=n)
        padded = graph_from(edges, n=n + 1)
        assert basic_counts(graph)[1:] == basic_counts(padded)[1:]
        assert reciprocity(graph) == reciprocity(padded)
        assert pseudo_diameter(graph) == pseudo_diameter(padded)
        assert fill(padded).p <= fill(graph).p
        assert degree_stats(padded).z <= degree_stats(graph).z


def test_report_on_parallel_pair(parallel_pair_graph):
    report = compute_report(parallel_pair_graph, dataset_id="pair")
    assert (report.n, report.m, report.m_u, report.m_p) == (2, 2, 1, 1)
    assert report.p == pytest.approx(0.5)
    assert report.c_d is None  # n < 3
    assert report.c_d_max == report.d_max
    assert report.pr_converged is True
    assert report.dataset_id == "pair"


def test_report_on_empty_graph_uses_undefined_markers():
    report = compute_report(graph_from([], n=0), dataset_id="empty")
    assert report.n == 0 and report.m == 0
    assert report.d_max is None
    assert report.z is None
    assert report.pr_max is None
    assert report.p is None
    assert report.y is None
    assert report.pseudo_diameter is None
    assert report.h_d == 0 and report.h_u == 0


def test_report_cv_undefined_when_mean_zero():
    report = compute_report(graph_from([], n=3), dataset_id="edgeless")
    assert report.m == 0
    assert report.var_in == 0.0
    assert report.cv_in is None
    assert report.cv_out is None


def test_report_internal_relations_hold_on_random_graphs():
    rng = np.random.default_rng(97)
    for _ in range(30):
        n, edges = oracles.random_multigraph(rng, max_n=25, max_m=120)
        report = compute_report(graph_from(edges, n=n), dataset_id="rel")
        assert report.m == report.m_u + report.m_p
        assert report.h_d <= report.h_u
        if report.p_u is not None:
            assert report.p_u <= report.p
        if report.m_bi is not None:
            assert report.m_bi <= report.m
            assert report.y == pytest.approx(report.m_bi / report.m)
        if report.d_max is not None:
            assert report.d_max <= report.d_max_in + report.d_max_out
            assert report.c_d_max == report.d_max
        if report.pr_max is not None:
            assert 0.0 < report.pr_max <= 1.0
            assert len(report.pr_max_vertex) == 16
