from __future__ import annotations

import random

import networkx as nx
import pytest
from networkx.algorithms.isomorphism import GraphMatcher

from cosetforge.chain import PermGroup
from cosetforge.graph import SimpleGraph
from cosetforge.limits import CapExceeded
from cosetforge.symmetry import (
    OrderedPartition,
    are_isomorphic,
    aut_report,
    automorphism_group,
    count_s_arcs,
    is_s_arc_transitive,
    max_arc_transitivity,
    refine,
)
from oracles import aut_order, count_s_arcs as brute_s_arcs


def _from_nx(h: nx.Graph) -> SimpleGraph:
    h = nx.convert_node_labels_to_integers(h)
    return SimpleGraph.from_edges(h.number_of_nodes(), h.edges())


def _matcher_count(h: nx.Graph) -> int:
    return sum(1 for _ in GraphMatcher(h, h).isomorphisms_iter())


ATLAS = nx.graph_atlas_g()  # every graph on at most 7 vertices, up to isomorphism


def test_aut_order_on_every_graph_up_to_seven_vertices():
    bad = []
    for i, h in enumerate(ATLAS):
        g = _from_nx(h)
        want = aut_order(g.n, g.edges()) if g.n <= 5 else _matcher_count(h)
        if automorphism_group(g).order() != want:
            bad.append(i)
    assert not bad


@pytest.mark.parametrize("seed", range(50))
def test_aut_order_on_random_graphs(seed):
    rng = random.Random(seed)
    n = rng.randint(6, 13)
    h = nx.gnp_random_graph(n, rng.uniform(0.15, 0.6), seed=seed)
    g = _from_nx(h)
    res = automorphism_group(g)
    assert res.order() == _matcher_count(h)
    assert all(g.is_automorphism(p) for p in res.generators)


@pytest.mark.parametrize(
    "h,order,max_s",
    [
        (nx.petersen_graph(), 120, 3),
        (nx.heawood_graph(), 336, 4),
        (nx.cubical_graph(), 48, 2),
        (nx.complete_graph(5), 120, 2),
        (nx.cycle_graph(7), 14, 8),
        (nx.complete_bipartite_graph(3, 3), 72, 3),
    ],
)
def test_known_symmetric_graphs(h, order, max_s):
    g = _from_nx(h)
    aut = automorphism_group(g).group
    assert aut.order() == order
    assert max_arc_transitivity(aut, g) == max_s


def test_s_arc_transitivity_of_a_subgroup():
    # the rotations of a 6-cycle are transitive on vertices but not on arcs
    g = _from_nx(nx.cycle_graph(6))
    rot = PermGroup([(1, 2, 3, 4, 5, 0)])
    assert is_s_arc_transitive(rot, g, 0)
    assert not is_s_arc_transitive(rot, g, 1)
    with pytest.raises(ValueError):
        is_s_arc_transitive(PermGroup([(1, 0, 2, 3, 4, 5)]), g, 1)


@pytest.mark.parametrize("seed", range(20))
def test_s_arc_counts_match_enumeration(seed):
    rng = random.Random(seed)
    h = nx.random_regular_graph(rng.choice([2, 3, 4, 5]), rng.choice([10, 20, 40, 60]), seed=seed)
    g = _from_nx(h)
    adj = [list(g.neighbors(v)) for v in range(g.n)]
    for s in range(0, 4):
        assert count_s_arcs(g, s) == brute_s_arcs(adj, s)


def test_s_arc_count_needs_a_regular_graph():
    with pytest.raises(ValueError):
        count_s_arcs(_from_nx(nx.path_graph(4)), 1)


def test_s_arc_count_on_a_500_vertex_graph():
    h = nx.random_regular_graph(4, 500, seed=7)
    g = _from_nx(h)
    adj = [list(g.neighbors(v)) for v in range(g.n)]
    assert count_s_arcs(g, 2) == brute_s_arcs(adj, 2) == 500 * 4 * 3


def test_isomorphism_witness():
    rng = random.Random(3)
    g = _from_nx(nx.petersen_graph())
    perm = list(range(10))
    rng.shuffle(perm)
    m = are_isomorphic(g, g.relabel(perm))
    assert m is not None and g.relabel(m) == g.relabel(perm)
    assert are_isomorphic(g, _from_nx(nx.circulant_graph(10, [1, 2]))) is None


def test_refinement_gives_equitable_degree_cells():
    g = _from_nx(nx.star_graph(4))
    part = OrderedPartition.unit(g.n)
    refine(g, part)
    assert sorted(map(len, part.cells)) == [1, 4]


def test_aut_cap_and_report():
    g = _from_nx(nx.petersen_graph())
    with pytest.raises(CapExceeded):
        automorphism_group(g, cap=5)
    rep = aut_report(g)
    assert rep["order"] == "120" and rep["max_s"] == 3 and rep["vertex_transitive"]
