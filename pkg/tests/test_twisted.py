import random
from dataclasses import replace

import pytest

from kdiff import CycNum, Edge, LevelGraph, MarkedPoint, TwistedKDifferential, Vertex, parse_cycnum, root_of_unity
from kdiff.generate import random_instances
from kdiff.twisted import InvalidInstanceError, gauge_half_edge, gauge_vertex, scale_roots, type_signature, validate

from instances import cubic_single_zero, three_level_chain, two_level_abelian, two_loop_vertex


def codes(t):
    return validate(t).codes()


def test_hand_built_instances_are_valid():
    for t in (three_level_chain(), two_loop_vertex(), two_loop_vertex(False), cubic_single_zero(), two_level_abelian()):
        assert validate(t).ok


def test_signatures():
    assert type_signature(three_level_chain()) == type_signature(three_level_chain("1", "-1", "0"))
    sig = type_signature(three_level_chain())
    assert (sig.genus, sig.mu) == (3, (4, 3, 1))
    assert sum(sig.mu) == 2 * (2 * 3 - 2)
    sig = type_signature(cubic_single_zero())
    assert (sig.genus, sig.mu) == (2, (6,))


def test_unstable_single_vertex_is_rejected():
    t = TwistedKDifferential(1, LevelGraph([Vertex(0, 0, 0, (), 1)]))
    assert "unstable" in codes(t)
    with pytest.raises(InvalidInstanceError):
        type_signature(t)


def _edit_vertex(t, vid, **changes):
    verts = [replace(v, **changes) if v.id == vid else v for v in t.graph.vertices]
    return t.with_graph(t.graph.replace_vertices(verts))


def _edit_edge(t, eid, **changes):
    edges = [replace(e, **changes) if e.id == eid else e for e in t.graph.edges]
    return t.with_graph(t.graph.replace_edges(edges))


def test_degree_violation_names_vertex():
    t = _edit_vertex(three_level_chain(), 2, marked=(MarkedPoint(3),))
    issues = [i for i in validate(t).problems if i.code == "degree"]
    assert [i.where for i in issues] == [2]


def test_matching_orders_and_partial_order():
    t = _edit_edge(three_level_chain(), 3, order_minus=-3)
    assert "matching_orders" in codes(t)
    t = _edit_edge(three_level_chain(), 1, order_plus=-3, order_minus=-1)
    assert "partial_order" in codes(t)
    loops = two_loop_vertex()
    t = _edit_edge(loops, 1, order_plus=-1, order_minus=-3)
    assert "partial_order" in codes(t)


def test_power_divisor_must_divide_orders():
    t = _edit_vertex(three_level_chain(), 3, power_divisor=2)
    assert "power_divisor" in codes(t)
    t = _edit_vertex(three_level_chain(), 3, power_divisor=3)
    assert "bad_power_divisor" in codes(t)
    t = _edit_vertex(three_level_chain(), 3, power_divisor=None)
    assert "missing_power_divisor" in codes(t)


def test_roots_required_and_conventional_zeros():
    t = _edit_edge(three_level_chain(), 3, root_minus=None)
    assert "missing_root" in codes(t)
    t = _edit_edge(three_level_chain(), 3, root_plus=parse_cycnum("1"))
    assert "nonzero_conventional_root" in codes(t)
    t = _edit_edge(two_loop_vertex(), 1, root_plus=CycNum.zero(2), root_minus=CycNum.zero(2))
    assert "zero_horizontal_root" in codes(t)


def test_horizontal_residues_must_match():
    t = _edit_edge(two_loop_vertex(False), 1, root_plus=parse_cycnum("z4"))
    assert "matching_residues" in codes(t)


def test_odd_k_horizontal_matching_uses_sign():
    # k = 3: residues match when root_plus^3 = -root_minus^3, e.g. roots 1 and -1
    v = Vertex(0, 1, 0, (MarkedPoint(6),), 3)
    good = TwistedKDifferential(3, LevelGraph([v], [Edge(0, 0, 0, -3, -3, parse_cycnum("1"), parse_cycnum("-1"))]))
    assert "matching_residues" not in codes(good)
    bad = TwistedKDifferential(3, LevelGraph([v], [Edge(0, 0, 0, -3, -3, parse_cycnum("1"), parse_cycnum("1"))]))
    assert "matching_residues" in codes(bad)
    for j in range(3):
        rotated = parse_cycnum("-1") * root_of_unity(3, j)
        t = TwistedKDifferential(3, LevelGraph([v], [Edge(0, 0, 0, -3, -3, parse_cycnum("1"), rotated)]))
        assert "matching_residues" not in codes(t)


def test_residue_theorem_at_full_power_vertex():
    t = three_level_chain("1", "1", "0")
    assert "residue_theorem" in codes(t)
    assert "residue_theorem" not in codes(three_level_chain("1", "-1", "0"))


def test_residue_theorem_skipped_without_marked_residues():
    report = validate(two_level_abelian(top_pole=True))
    assert report.ok
    assert [w.code for w in report.warnings] == ["residue_theorem_skipped"]


def test_k1_horizontal_condition_is_opposite_residues():
    v = Vertex(0, 1, 0, (MarkedPoint(2),), 1)
    ok = TwistedKDifferential(1, LevelGraph([v], [Edge(0, 0, 0, -1, -1, parse_cycnum("2"), parse_cycnum("-2"))]))
    assert validate(ok).ok
    bad = TwistedKDifferential(1, LevelGraph([v], [Edge(0, 0, 0, -1, -1, parse_cycnum("2"), parse_cycnum("2"))]))
    assert "matching_residues" in codes(bad)


def test_generated_instances_satisfy_global_degree():
    for t in random_instances(200, seed=3, ks=(1, 2, 3, 4)):
        sig = type_signature(t)
        assert sig.degree_ok


def _verdict(t):
    return validate(t).ok


@pytest.mark.parametrize("seed", range(5))
def test_validation_is_gauge_invariant(seed):
    rng = random.Random(seed)
    for t in random_instances(40, seed=seed, ks=(2, 3, 4)):
        assert _verdict(scale_roots(t, parse_cycnum(rng.choice(["2", "-1/3", "1+z5", "z8^3"])))) is True
        full = [v.id for v in t.graph.vertices if t.is_full_power(v.id)]
        if full:
            assert _verdict(gauge_vertex(t, rng.choice(full), rng.randrange(t.k))) is True
        for e in t.graph.edges:
            if not t.graph.is_horizontal(e) and not t.is_full_power(e.v_minus):
                assert _verdict(gauge_half_edge(t, e.id, "minus", rng.randrange(t.k))) is True
    broken = three_level_chain("1", "1", "0")
    assert _verdict(gauge_vertex(broken, 2, 1)) is False
    assert _verdict(scale_roots(broken, parse_cycnum("z3"))) is False
