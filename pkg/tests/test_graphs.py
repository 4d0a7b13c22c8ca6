from __future__ import annotations

import math
from collections import Counter

import pytest

from exchlab.graphs import (
    BudgetExhaustedError,
    ErSpec,
    GeometricSpec,
    Graph,
    brute_force_connectivity,
    build_geometric_from_points,
    conditional_sample,
    connected_condition,
    custom_condition,
    diameter,
    diameter_at_most,
    edge_connectivity,
    edge_count_at_least,
    graph_metrics,
    is_connected,
    min_degree_at_least,
    sample_er,
    sample_geometric,
    vertex_connectivity,
)
from exchlab.rng import RngStream

from .oracles import er_graph_law, subsets_connected

TWO_TRIANGLES = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
PATH3 = Graph.from_edges(3, [(0, 1), (1, 2)])


def _random_graph(n, p, rng):
    return Graph.from_edges(
        n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.bernoulli(p)]
    )


# -- graph type ---------------------------------------------------------------


def test_graph_validation():
    with pytest.raises(ValueError, match="bad edge"):
        Graph(3, ((0, 3),))
    with pytest.raises(ValueError, match="bad edge"):
        Graph(3, ((1, 1),))
    with pytest.raises(ValueError, match="duplicate"):
        Graph(3, ((0, 1), (0, 1)))
    assert Graph.from_edges(3, [(2, 0)]).edges == ((0, 2),)


def test_graph_serialization_roundtrip():
    g = TWO_TRIANGLES
    text = g.to_text()
    assert text.splitlines()[0] == "5"
    assert "1 2" in text
    assert Graph.from_text(text) == g
    with pytest.raises(ValueError):
        Graph.from_text("")
    with pytest.raises(ValueError, match="bad edge line"):
        Graph.from_text("3\n1 2 3\n")


def test_edge_indicators_lexicographic():
    g = Graph.from_edges(3, [(0, 2)])
    assert g.edge_indicators() == (0, 1, 0)


# -- geometric model ------------------------------------------------------------


def test_geometric_complete_beyond_diagonal():
    points = [(0.1, 0.2), (0.9, 0.8), (0.4, 0.5)]
    g = build_geometric_from_points(points, math.sqrt(2))
    assert len(g.edges) == 3


def test_geometric_zero_radius_keeps_distinct_points_apart():
    g = build_geometric_from_points([(0.1, 0.1), (0.2, 0.2)], 0.0)
    assert g.edges == ()
    # coincident points sit at distance zero, which the closed threshold joins
    g2 = build_geometric_from_points([(0.3, 0.3), (0.3, 0.3)], 0.0)
    assert g2.edges == ((0, 1),)


def test_geometric_hand_example():
    g = build_geometric_from_points([(0, 0), (0, 0.1), (0.9, 0.9)], 0.2)
    assert g.edges == ((0, 1),)


def test_geometric_closed_threshold():
    g = build_geometric_from_points([(0.0, 0.0), (0.5, 0.0)], 0.5)
    assert g.edges == ((0, 1),)


def test_sample_geometric_trivial_sizes():
    points, g = sample_geometric(GeometricSpec(1, 0.5), RngStream(1))
    assert g.n == 1 and g.edges == ()
    _, g = sample_geometric(GeometricSpec(4, 1.5), RngStream(2))
    assert len(g.edges) == 6


def test_sample_geometric_edge_probability():
    # Pr(|U - V| <= 1/2) for two uniform points in the unit square:
    # pi d^2 - 8 d^3 / 3 + d^4 / 2 at d = 1/2
    expected = math.pi / 4 - 1 / 3 + 1 / 32
    rng = RngStream(3)
    hits = sum(
        1 for _ in range(100000) if sample_geometric(GeometricSpec(2, 0.5), rng)[1].edges
    )
    assert abs(hits / 100000 - expected) < 0.01


def test_geometric_label_equivariance():
    rng = RngStream(4)
    from exchlab.perm import uniform_permutation

    for _ in range(50):
        points = [(rng.uniform(), rng.uniform()) for _ in range(6)]
        g = build_geometric_from_points(points, 0.4)
        sigma = uniform_permutation(6, rng)
        permuted = build_geometric_from_points(sigma.apply(points), 0.4)
        # vertex i of the permuted graph carries point sigma(i), so original
        # edges map through the inverse permutation
        inv = sigma.inverse()
        relabeled = {tuple(sorted((inv(u), inv(v)))) for u, v in g.edges}
        assert set(permuted.edges) == relabeled


def test_spec_validation():
    with pytest.raises(ValueError):
        GeometricSpec(0, 0.5)
    with pytest.raises(ValueError):
        GeometricSpec(3, -0.1)
    with pytest.raises(ValueError):
        ErSpec(3, 1.5)


# -- independent-edge model -------------------------------------------------------


def test_er_degenerate_probabilities():
    assert sample_er(ErSpec(5, 0.0), RngStream(5)).edges == ()
    assert len(sample_er(ErSpec(5, 1.0), RngStream(6)).edges) == 10


def test_er_connectivity_probability_half():
    # 8 labeled graphs on 3 vertices; the 4 with >= 2 edges are connected
    law = er_graph_law(3, 0.5)
    exact = sum(p for edges, p in law.items() if subsets_connected(3, edges))
    assert exact == pytest.approx(0.5, abs=1e-12)
    rng = RngStream(7)
    hits = sum(1 for _ in range(100000) if is_connected(sample_er(ErSpec(3, 0.5), rng)))
    assert abs(hits / 100000 - exact) < 0.01


# -- conditional sampling -----------------------------------------------------------


def test_conditional_trivial_predicate_accepts_first():
    cond = custom_condition("anything", lambda g, x: True, max_tries=10)
    _, tries = conditional_sample(ErSpec(3, 0.5), cond, RngStream(8))
    assert tries == 1


def test_conditional_er_connected_matches_exact_conditional_law():
    law = er_graph_law(3, 0.5)
    connected_mass = sum(p for e, p in law.items() if subsets_connected(3, e))
    rng = RngStream(9)
    counts = Counter()
    for _ in range(30000):
        g, _ = conditional_sample(ErSpec(3, 0.5), connected_condition(), rng)
        counts[frozenset(g.edges)] += 1
    for edges, p in law.items():
        if subsets_connected(3, edges):
            expected = p / connected_mass
            assert abs(counts[edges] / 30000 - expected) < 0.015


def test_conditional_budget_exhaustion():
    cond = connected_condition(max_tries=100)
    with pytest.raises(BudgetExhaustedError, match="connected"):
        conditional_sample(ErSpec(3, 0.0), cond, RngStream(10))


def test_conditional_custom_hook_sees_underlying_sequence():
    seen = []
    cond = custom_condition("record", lambda g, x: (seen.append(x), True)[1], max_tries=5)
    conditional_sample(ErSpec(3, 0.5), cond, RngStream(11))
    assert len(seen[0]) == 3  # edge indicators of a 3-vertex graph
    conditional_sample(GeometricSpec(4, 0.5), cond, RngStream(12))
    assert len(seen[1]) == 4 and len(seen[1][0]) == 2  # four planar points


def test_condition_builders():
    k4 = Graph.complete(4)
    assert min_degree_at_least(3).test(k4, None)
    assert not min_degree_at_least(4).test(k4, None)
    assert diameter_at_most(1).test(k4, None)
    assert edge_count_at_least(6).test(k4, None)
    with pytest.raises(ValueError):
        connected_condition(max_tries=0)


# -- metrics ---------------------------------------------------------------------


def test_metrics_complete_graph():
    res = graph_metrics(Graph.complete(4))
    assert res.min_degree == 3
    assert res.avg_degree == 3.0
    assert res.connected
    assert res.diameter == 1
    assert res.kappa == 3 and res.lambda_ == 3


def test_metrics_path():
    res = graph_metrics(PATH3)
    assert res.diameter == 2
    assert res.min_degree == 1
    assert res.kappa == 1 and res.lambda_ == 1


def test_metrics_disconnected_is_infinite():
    res = graph_metrics(Graph(2, ()))
    assert not res.connected
    assert math.isinf(res.diameter)
    assert res.kappa == 0 and res.lambda_ == 0
    assert res.to_dict()["diameter"] is None


def test_metrics_single_vertex():
    res = graph_metrics(Graph(1, ()))
    assert res.connected and res.diameter == 0
    assert res.kappa == 0 and res.lambda_ == 0


def test_diameter_one_iff_complete():
    rng = RngStream(13)
    for _ in range(50):
        g = _random_graph(5, 0.5, rng)
        complete = len(g.edges) == 10
        assert (diameter(g) <= 1) == complete or g.n < 2


# -- connectivity ------------------------------------------------------------------


def test_vertex_connectivity_examples():
    assert vertex_connectivity(Graph.complete(4)) == 3
    cycle5 = Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert vertex_connectivity(cycle5) == 2
    assert vertex_connectivity(TWO_TRIANGLES) == 1
    with pytest.raises(ValueError):
        vertex_connectivity(Graph(1, ()))


def test_edge_connectivity_examples():
    assert edge_connectivity(Graph.complete(4)) == 3
    assert edge_connectivity(PATH3) == 1
    assert edge_connectivity(TWO_TRIANGLES) == 2
    with pytest.raises(ValueError):
        edge_connectivity(Graph(1, ()))


def test_brute_force_examples():
    assert brute_force_connectivity(Graph.complete(4)) == (3, 3)
    cycle5 = Graph.from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert brute_force_connectivity(cycle5) == (2, 2)
    assert brute_force_connectivity(TWO_TRIANGLES) == (1, 2)
    with pytest.raises(ValueError, match="capped"):
        brute_force_connectivity(Graph.complete(8))


def test_flow_agrees_with_brute_force_on_random_graphs():
    rng = RngStream(14)
    for trial in range(60):
        n = 2 + rng.below(6)
        p = (1 + rng.below(9)) / 10
        g = _random_graph(n, p, rng)
        expected = brute_force_connectivity(g)
        got = (vertex_connectivity(g), edge_connectivity(g))
        assert got == expected, f"trial {trial}: {g} expected {expected}, got {got}"


def test_whitney_chain_on_random_graphs():
    rng = RngStream(15)
    for _ in range(80):
        g = _random_graph(3 + rng.below(6), 0.4, rng)
        res = graph_metrics(g)
        assert res.kappa <= res.lambda_ <= res.min_degree


def test_disconnected_graph_has_zero_connectivity():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert vertex_connectivity(g) == 0
    assert edge_connectivity(g) == 0


def test_star_with_isolated_vertex():
    # vertex 0 adjacent to all but one isolated vertex elsewhere
    g = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2)])
    assert vertex_connectivity(g) == 0
    assert edge_connectivity(g) == 0
