from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bareiss_det
from rational_ktheory.exceptions import SpecValidationError
from rational_ktheory.graph_algebra import DirectedGraph, builtin_table, graph_k_theory
from rational_ktheory.integer_linalg import same_pointed_group
from rational_ktheory.quadratic import case_k_theory


def test_cuntz_two():
    kt = graph_k_theory(DirectedGraph(1, {(0, 0): 2}))
    assert kt.k0.is_trivial and kt.k1.is_trivial


def test_two_vertex_graph():
    kt = graph_k_theory(DirectedGraph(2, {(0, 0): 2, (1, 1): 2, (0, 1): 1, (1, 0): 1}))
    assert kt.matrix.tolist() == [[1, 1], [1, 1]]
    assert (str(kt.k0), str(kt.k1), kt.k0.unit_status) == ("Z", "Z", "zero")


def test_infinite_loop_vertex():
    kt = graph_k_theory(DirectedGraph(1, {(0, 0): 1}, {0}))
    assert (str(kt.k0), str(kt.k1), kt.k0.unit_status) == ("Z", "0", "generator")


def test_table_matches_cases():
    rows = builtin_table()
    assert [r.case for r in rows] == ["Case0", "Case1", "Case3", "Case2"]
    assert [r.algebra for r in rows] == ["O2", "Q2", "Oinf", "Q2inf"]
    for row in rows:
        kt = graph_k_theory(row.graph)
        k0, k1, unit = case_k_theory(row.case)
        assert kt.k0.forget_unit() == k0.forget_unit() and kt.k1 == k1
        assert same_pointed_group(kt.k0, k0) and kt.k0.unit_status == unit


def test_json_round_trip():
    for row in builtin_table():
        assert DirectedGraph.from_json(row.graph.to_json()) == row.graph


def test_validation():
    with pytest.raises(SpecValidationError):
        DirectedGraph.from_json({"vertices": 2, "edges": [[0, 2, 1]]})
    with pytest.raises(SpecValidationError):
        DirectedGraph.from_json({"vertices": 0})
    with pytest.raises(SpecValidationError):
        DirectedGraph.from_json({"vertices": 1, "edges": [[0, 0, 0]]})
    with pytest.raises(SpecValidationError):
        DirectedGraph.from_json({"edges": []})


@st.composite
def receiving_graphs(draw):
    """Finite graphs in which every vertex receives at least one edge."""
    n = draw(st.integers(1, 5))
    mult = draw(st.lists(st.lists(st.integers(0, 3), min_size=n, max_size=n), min_size=n, max_size=n))
    for v in range(n):
        if not any(mult[w][v] for w in range(n)):
            mult[draw(st.integers(0, n - 1))][v] = 1
    edges = {(w, v): m for w, row in enumerate(mult) for v, m in enumerate(row) if m}
    return DirectedGraph(n, edges), mult


@settings(max_examples=150, deadline=None)
@given(receiving_graphs())
def test_nonsingular_graphs_have_finite_k0(data):
    g, a = data
    n = g.vertex_count
    det = bareiss_det([[a[i][j] - (i == j) for j in range(n)] for i in range(n)])
    if det == 0:
        return
    kt = graph_k_theory(g)
    assert kt.k1.is_trivial
    assert kt.k0.order == abs(det)
