import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdiff.levelgraph import Edge, LevelGraph, MarkedPoint, Vertex

from instances import three_level_chain, two_loop_vertex


def test_genus_examples():
    assert LevelGraph([Vertex(0, 2, 0)]).genus_total() == 2
    assert two_loop_vertex().graph.genus_total() == 2
    assert three_level_chain().graph.genus_total() == 3


def test_edge_classification():
    chain = three_level_chain().graph
    assert chain.classify_edges() == {1: "vertical", 2: "vertical", 3: "vertical"}
    loops = two_loop_vertex().graph
    assert set(loops.classify_edges().values()) == {"horizontal"}


def test_subgraphs_of_chain():
    g = three_level_chain().graph
    above = g.subgraph("above", -2)
    assert above.vertices == {1, 2}
    assert set(above.edges) == {1, 2}
    assert [(h.edge, h.side) for h in above.dangling] == [(3, "plus")]
    assert g.subgraph("at", -1).vertices == {2}
    assert g.subgraph("at_or_above", -1).vertices == {1, 2}
    assert g.subgraph("below", 0).vertices == {2, 3}
    with pytest.raises(ValueError):
        g.subgraph("beside", 0)


def test_levels_and_half_edges():
    g = three_level_chain().graph
    assert g.levels() == [0, -1, -2]
    assert [(h.edge, h.side, h.order) for h in g.half_edges(2)] == [(1, "minus", -4), (2, "minus", -4), (3, "plus", 0)]
    assert g.is_local_maximum(1) and not g.is_local_maximum(2)
    assert two_loop_vertex().graph.is_local_maximum(0)


def test_check_reports_problems():
    bad_order = LevelGraph([Vertex(0, 1, 0), Vertex(1, 1, -1)], [Edge(0, 1, 0, 0, -2)])
    assert ("level_order", 0) in {(c, w) for c, w, _ in bad_order.check()}
    disconnected = LevelGraph([Vertex(0, 2, 0), Vertex(1, 2, 0)])
    assert "disconnected" in {c for c, _, _ in disconnected.check()}
    unstable = LevelGraph([Vertex(0, 0, 0)])
    assert "unstable" in {c for c, _, _ in unstable.check()}
    dangling = LevelGraph([Vertex(0, 1, 0)], [Edge(0, 0, 7, 0, -2)])
    assert "unknown_vertex" in {c for c, _, _ in dangling.check()}
    assert LevelGraph([]).check()[0][0] == "empty_graph"
    duplicate = LevelGraph([Vertex(0, 1, 0), Vertex(0, 1, 0)])
    assert "duplicate_vertex" in {c for c, _, _ in duplicate.check()}


def test_normalize_levels_is_idempotent():
    g = LevelGraph([Vertex("a", 1, 7), Vertex("b", 0, 3, (MarkedPoint(0),) * 3), Vertex("c", 1, 7)],
                   [Edge(0, "a", "b", 0, -2), Edge(1, "c", "b", 0, -2)])
    n = g.normalize_levels()
    assert [v.level for v in n.vertices] == [0, -1, 0]
    assert n.normalize_levels() == n
    assert n.classify_edges() == g.classify_edges()


def test_mixed_id_types_sort_deterministically():
    g = LevelGraph([Vertex("x", 1, 0), Vertex(2, 1, 0), Vertex(1, 1, 0)], [Edge(0, 1, 2, -1, -1), Edge(1, 2, "x", -1, -1)])
    assert g.vertex_ids() == [1, 2, "x"]


@st.composite
def random_graphs(draw):
    n = draw(st.integers(1, 6))
    levels = [draw(st.integers(-3, 0)) for _ in range(n)]
    vertices = [Vertex(i, draw(st.integers(0, 2)), levels[i]) for i in range(n)]
    edges = []
    for j in range(draw(st.integers(0, 8))):
        a, b = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if levels[a] < levels[b]:
            a, b = b, a
        edges.append(Edge(j, a, b, 0, -2))
    return LevelGraph(vertices, edges)


def _nx_graph(g, vertices=None):
    h = nx.MultiGraph()
    keep = set(g.vertex_ids() if vertices is None else vertices)
    h.add_nodes_from(keep)
    h.add_edges_from((e.v_plus, e.v_minus) for e in g.edges if e.v_plus in keep and e.v_minus in keep)
    return h


@settings(max_examples=200, deadline=None)
@given(random_graphs(), st.integers(-3, 0))
def test_components_match_networkx(g, level):
    for predicate in ("above", "at", "at_or_above", "below"):
        frag = g.subgraph(predicate, level)
        ours = sorted(sorted(c.vertices) for c in g.connected_components(frag))
        theirs = sorted(sorted(c) for c in nx.connected_components(_nx_graph(g, frag.vertices)))
        assert ours == theirs
        for c in g.connected_components(frag):
            assert set(c.edges) <= set(frag.edges)


@settings(max_examples=200, deadline=None)
@given(random_graphs(), st.integers(-3, 0))
def test_level_pieces_partition_vertices(g, level):
    above = g.subgraph("above", level).vertices
    at = g.subgraph("at", level).vertices
    below = g.subgraph("below", level).vertices
    assert above | at | below == set(g.vertex_ids())
    assert not (above & at) and not (above & below) and not (at & below)


@settings(max_examples=200, deadline=None)
@given(random_graphs())
def test_genus_matches_betti_number(g):
    h = _nx_graph(g)
    betti = h.number_of_edges() - h.number_of_nodes() + nx.number_connected_components(h)
    assert g.genus_total() == sum(v.genus for v in g.vertices) + betti
