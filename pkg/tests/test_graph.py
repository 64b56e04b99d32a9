from __future__ import annotations

import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosetforge.graph import SimpleGraph, components, from_edge_list, from_sparse6, read_graph, to_sparse6, write_graph


@st.composite
def graphs(draw, max_n=80):
    n = draw(st.integers(min_value=0, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if not pairs:
        return SimpleGraph(n, [[] for _ in range(n)])
    p = draw(st.floats(min_value=0.0, max_value=0.5))
    seed = draw(st.integers(min_value=0, max_value=2**31))
    rng = random.Random(seed)
    return SimpleGraph.from_edges(n, [e for e in pairs if rng.random() < p])


def _to_nx(g: SimpleGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


@settings(max_examples=200)
@given(graphs())
def test_sparse6_bytes_match_networkx(g):
    ours = to_sparse6(g, header=False)
    theirs = nx.to_sparse6_bytes(_to_nx(g), header=False)
    assert ours == theirs


@settings(max_examples=200)
@given(graphs())
def test_sparse6_round_trip(g):
    assert from_sparse6(to_sparse6(g)) == g
    assert from_sparse6(to_sparse6(g, header=True)) == g


@pytest.mark.parametrize("n", [62, 63, 64, 65, 258047 // 1000, 300])
def test_sparse6_vertex_count_encodings(n):
    g = SimpleGraph.from_edges(n, [(0, n - 1)] if n > 1 else [])
    assert to_sparse6(g) == nx.to_sparse6_bytes(_to_nx(g), header=False)
    assert from_sparse6(to_sparse6(g)) == g


def test_networkx_output_decodes():
    h = nx.petersen_graph()
    data = nx.to_sparse6_bytes(h, header=True)
    g = from_sparse6(data)
    assert g.n == 10 and g.valency() == 3 and g.edge_count() == 15


def test_invalid_graphs_are_rejected():
    with pytest.raises(ValueError):
        SimpleGraph(2, [[1], []])
    with pytest.raises(ValueError):
        SimpleGraph.from_edges(2, [(0, 0)])
    with pytest.raises(ValueError):
        from_sparse6(b"G?")


def test_edge_list_and_files(tmp_path):
    g = from_edge_list("# square\n0 1\n1 2\n2 3\n3 0\n")
    assert g.valency() == 2 and g.is_connected()
    for fmt in ("sparse6", "edges"):
        path = tmp_path / f"g.{fmt}"
        write_graph(g, str(path), fmt)
        assert read_graph(str(path)) == g
    with pytest.raises(ValueError):
        write_graph(g, str(tmp_path / "x"), "dot")


def test_components_and_relabel():
    g = SimpleGraph.from_edges(5, [(0, 1), (2, 3)])
    assert components(g) == [[0, 1], [2, 3], [4]]
    assert not g.is_connected()
    r = g.relabel([4, 3, 2, 1, 0])
    assert r.has_edge(4, 3) and r.has_edge(2, 1)
    assert g.is_automorphism([1, 0, 3, 2, 4])
    assert not g.is_automorphism([0, 2, 1, 3, 4])
