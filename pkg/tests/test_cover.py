import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kdiff import Edge, LevelGraph, MarkedPoint, TwistedKDifferential, Vertex, parse_cycnum
from kdiff.cover import (
    LabeledCover,
    enumerate_normalized_covers,
    enumerated_edges,
    forced_horizontal_offsets,
    lifted_differential,
    lifted_level_graph,
    lifted_order,
    local_cover,
    preimage_count,
)
from kdiff.generate import random_instances
from kdiff.grc import BudgetExceeded
from kdiff.twisted import validate

from instances import cubic_single_zero, three_level_chain, two_level_abelian, two_loop_vertex


def test_cubic_single_zero_cover():
    data = local_cover(cubic_single_zero(), 0)
    assert data.components == 1
    assert data.component_genus == 4
    assert data.lifted_orders() == [2, 2, 2]
    assert data.riemann_hurwitz_holds()


def test_identity_cover_for_k1():
    t = two_level_abelian()
    for vid in t.graph.vertex_ids():
        data = local_cover(t, vid)
        assert data.component_genus == t.graph.vertex(vid).genus
        assert all(p.preimages == 1 and p.lifted_order == p.order for p in data.points)


def test_odd_pole_of_square():
    # k = 2, genus 0, orders (-3, -3, 2): one preimage each at the poles, lifted order -2
    assert preimage_count(2, -3) == 1
    assert lifted_order(2, -3) == -2
    t = TwistedKDifferential(2, LevelGraph([Vertex(0, 0, 0, (MarkedPoint(-3), MarkedPoint(-3), MarkedPoint(2)), 1)]))
    data = local_cover(t, 0)
    assert data.component_genus == 0
    assert sorted(data.lifted_orders()) == [-2, -2, 1, 1]
    assert data.riemann_hurwitz_holds()


def test_power_vertex_splits_into_copies():
    data = local_cover(three_level_chain(), 1)
    assert data.components == 2
    assert data.component_genus == 1
    assert data.lifted_orders() == [0, 0, 0, 0]


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_preimage_lifted_order_bookkeeping(k):
    for m in range(-3 * k, 3 * k + 1):
        r = preimage_count(k, m)
        assert r * (lifted_order(k, m) + 1) == m + k
        assert (lifted_order(k, m) >= -1) == (m >= -k)
        # the two ends of a node lift to orders summing to -2
        assert lifted_order(k, m) + lifted_order(k, -2 * k - m) == -2


def test_riemann_hurwitz_on_generated_vertices():
    checked = 0
    for t in random_instances(300, seed=11, ks=(2, 3, 4, 6)):
        for vid in t.graph.vertex_ids():
            assert local_cover(t, vid).riemann_hurwitz_holds()
            checked += 1
    assert checked >= 300


def _explicit_components(k, vertices, gluings):
    h = nx.Graph()
    h.add_nodes_from((v, j) for v in vertices for j in range(k))
    for u, w, o in gluings:
        for j in range(k):
            h.add_edge((u, j), (w, (j + o) % k))
    return list(nx.connected_components(h))


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 6), st.integers(1, 5), st.data())
def test_labeled_cover_matches_explicit_cover(k, n, data):
    gluings = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(0, 2 * k)),
                                 max_size=8))
    cover = LabeledCover(k, range(n))
    for u, w, o in gluings:
        cover.glue(u, w, o)
    explicit = _explicit_components(k, range(n), gluings)
    assert cover.component_count() == len(explicit)
    for comp in explicit:
        labels = {cover.label(v, j) for v, j in comp}
        assert len(labels) == 1
    # deck transformation permutes components
    shifted = {frozenset((v, (j + 1) % k) for v, j in comp) for comp in explicit}
    assert shifted == {frozenset(c) for c in explicit}


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(1, 4), st.data())
def test_relabelling_one_vertex_keeps_count(k, n, data):
    gluings = data.draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1), st.integers(0, k - 1)),
                                 max_size=6))
    v, s = data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, k - 1))
    moved = []
    for a, b, o in gluings:
        # copy j of v becomes copy j + s
        o2 = o + (s if b == v else 0) - (s if a == v else 0)
        moved.append((a, b, o2))
    c1, c2 = LabeledCover(k, range(n)), LabeledCover(k, range(n))
    for g in gluings:
        c1.glue(*g)
    for g in moved:
        c2.glue(*g)
    assert c1.component_count() == c2.component_count()


def test_loop_gluings():
    crossed = forced_horizontal_offsets(two_loop_vertex(True))
    assert crossed.offsets == {1: 1, 2: 1}
    assert crossed.component_counts == [(0, [0], 1)]
    straight = forced_horizontal_offsets(two_loop_vertex(False))
    assert straight.offsets == {1: 0, 2: 0}
    assert straight.component_counts == [(0, [0], 2)]


def test_single_horizontal_edge_offset():
    verts = [Vertex(0, 0, 0, (MarkedPoint(0), MarkedPoint(0)), 2), Vertex(1, 0, 0, (MarkedPoint(0), MarkedPoint(0)), 2)]
    edge = Edge(0, 0, 1, -2, -2, parse_cycnum("1"), parse_cycnum("-1"))
    edge2 = Edge(1, 0, 1, -2, -2, parse_cycnum("-1"), parse_cycnum("1"))
    t = TwistedKDifferential(2, LevelGraph(verts, [edge, edge2]))
    assert validate(t).ok
    report = forced_horizontal_offsets(t)
    assert report.offsets[0] == 0
    assert report.component_counts == [(0, [0, 1], 2)]


def test_enumeration_counts():
    chain = three_level_chain()
    assert enumerated_edges(chain) == [1, 2, 3]
    assignments = list(enumerate_normalized_covers(chain))
    assert len(assignments) == 8
    assert len({tuple(sorted(a.items())) for a in assignments}) == 8
    assert len(list(enumerate_normalized_covers(two_level_abelian()))) == 1
    assert list(enumerate_normalized_covers(cubic_single_zero())) == [{}]
    with pytest.raises(BudgetExceeded):
        list(enumerate_normalized_covers(chain, budget=7))


def test_prim_vertices_need_no_enumeration():
    t = three_level_chain()
    verts = [v if v.id != 1 else Vertex(1, 1, 0, (), 1) for v in t.graph.vertices]
    t2 = t.with_graph(t.graph.replace_vertices(verts))
    # the top vertex is no longer a square, so nothing above level -1 qualifies
    assert enumerated_edges(t2) == []


def _edges(g):
    return sorted((e.id, e.v_plus, e.v_minus) for e in g.edges)


def test_lifted_graph_straight_offsets():
    g = lifted_level_graph(three_level_chain(), {1: 0, 2: 0, 3: 0})
    assert g.vertex_ids() == ["1.0", "1.1", "2.0", "2.1", "3.0"]
    assert _edges(g) == [("1.0", "1.0", "2.0"), ("1.1", "1.1", "2.1"), ("2.0", "1.0", "2.0"), ("2.1", "1.1", "2.1"),
                         ("3.0", "2.0", "3.0"), ("3.1", "2.1", "3.0")]
    above = g.subgraph("above", -2)
    assert len(g.connected_components(above)) == 2


def test_lifted_graph_criss_cross():
    g = lifted_level_graph(three_level_chain(), {1: 0, 2: 1, 3: 0})
    assert ("2.0", "1.0", "2.1") in _edges(g)
    above = g.subgraph("above", -2)
    assert len(g.connected_components(above)) == 1


def test_lifted_graph_of_k1_is_the_graph():
    t = two_level_abelian()
    g = lifted_level_graph(t, {})
    assert [(v.genus, v.level, v.marked_orders) for v in g.vertices] == \
        [(v.genus, v.level, v.marked_orders) for v in t.graph.vertices]
    assert len(g.edges) == len(t.graph.edges)


def test_lifted_orders_satisfy_abelian_partial_order():
    for t in random_instances(200, seed=5, ks=(2, 3, 4)):
        offsets = next(enumerate_normalized_covers(t))
        g = lifted_level_graph(t, offsets)
        for e in g.edges:
            assert e.order_plus + e.order_minus == -2
            assert e.order_plus >= -1
            assert (e.order_plus == -1) == g.is_horizontal(e)


def test_lifted_differential_of_connected_cover_is_valid():
    lifted = lifted_differential(two_loop_vertex(True), {1: 1, 2: 1})
    assert lifted.graph.is_connected()
    assert validate(lifted).ok
    assert lifted.graph.genus_total() == 3
