"""Cyclic covers: per-vertex canonical cover data and labeled normalized covers.

A normalized cover over a zone of full-power vertices is k copies of each
vertex, indexed by Z_k, glued along edges by offsets: copy ``j`` of the
upper end of edge ``e`` meets copy ``j + o(e)`` of its lower end.  Only the
offsets are stored; components are found with a union-find that tracks
Z_k-valued potentials, so the k copies never get materialised.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .levelgraph import Edge, LevelGraph, MarkedPoint, Vertex, id_key
from .twisted import TwistedKDifferential

__all__ = [
    "PointCover",
    "LocalCoverData",
    "LabeledCover",
    "HorizontalOffsets",
    "local_cover",
    "preimage_count",
    "lifted_order",
    "forced_offset",
    "forced_horizontal_offsets",
    "enumerated_edges",
    "enumerate_normalized_covers",
    "lifted_level_graph",
    "lifted_differential",
]


def preimage_count(k: int, order: int) -> int:
    return math.gcd(k, order)


def lifted_order(k: int, order: int) -> int:
    """Order of the abelian k-th root at each preimage of a point of the given order."""
    r = math.gcd(k, order)
    return (k - r + order) // r


@dataclass(frozen=True)
class PointCover:
    """Cover data of one special point: a marked point or one end of an edge."""

    kind: str  # "marked" or "half_edge"
    key: object  # marked index, or (edge id, side)
    order: int
    preimages: int
    ramification: int
    lifted_order: int


@dataclass(frozen=True)
class LocalCoverData:
    vertex: object
    k: int
    genus: int
    components: int
    points: tuple[PointCover, ...]
    component_genus: int

    @property
    def total_genus_sum(self) -> int:
        return self.components * self.component_genus

    def lifted_orders(self) -> list[int]:
        """All lifted orders, each repeated once per preimage."""
        return [p.lifted_order for p in self.points for _ in range(p.preimages)]

    def riemann_hurwitz_holds(self) -> bool:
        per_component = sum(self.lifted_orders())
        return self.components * (2 * self.component_genus - 2) == per_component


def local_cover(t: TwistedKDifferential, vid) -> LocalCoverData:
    """Canonical cover of the vertex differential at ``vid``.

    The cover has ``d_v`` components, all of the same genus; each is the
    canonical cover of the primitive (k/d_v)-differential.
    """
    k = t.k
    v = t.graph.vertex(vid)
    d = t.power_divisor(vid)
    points = []
    for i, p in enumerate(v.marked):
        r = preimage_count(k, p.order)
        points.append(PointCover("marked", i, p.order, r, k // r, lifted_order(k, p.order)))
    for h in t.graph.half_edges(vid):
        r = preimage_count(k, h.order)
        points.append(PointCover("half_edge", (h.edge, h.side), h.order, r, k // r, lifted_order(k, h.order)))
    k_prim = k // d
    twice = 2 + 2 * k_prim * (v.genus - 1) + k_prim * len(points) - sum(p.preimages // d for p in points)
    if twice % 2:
        raise ValueError(f"odd Riemann-Hurwitz numerator at vertex {vid!r}; orders are inconsistent")
    return LocalCoverData(vid, k, v.genus, d, tuple(points), twice // 2)


class LabeledCover:
    """Components of a k-sheeted labeled cover, tracked by weighted union-find.

    Nodes are base vertices; the cover has nodes ``(vertex, j)`` for j in Z_k.
    ``glue(u, w, o)`` identifies ``(u, j)`` with ``(w, j + o)`` for all j.
    """

    def __init__(self, k: int, vertices: Iterable = ()):
        self.k = k
        self._parent: dict = {}
        self._potential: dict = {}  # (x, j) ~ (parent, j + potential)
        self._period: dict = {}  # at roots: gcd of all loop monodromies
        for v in vertices:
            self.add(v)

    def add(self, v) -> None:
        if v not in self._parent:
            self._parent[v] = v
            self._potential[v] = 0
            self._period[v] = 0

    def _find(self, x) -> tuple[object, int]:
        path = []
        while self._parent[x] != x:
            path.append(x)
            x = self._parent[x]
        root = x
        # compress, accumulating potentials from the top of the path down
        acc = 0
        for y in reversed(path):
            acc += self._potential[y]
            self._parent[y] = root
            self._potential[y] = acc
        return root, (self._potential[path[0]] if path else 0)

    def find(self, v) -> tuple[object, int]:
        """Root of ``v`` and the offset p with (v, j) ~ (root, j + p)."""
        return self._find(v)

    def glue(self, u, w, offset: int) -> None:
        self.add(u)
        self.add(w)
        ru, pu = self._find(u)
        rw, pw = self._find(w)
        shift = pu - offset - pw
        if ru == rw:
            self._period[ru] = math.gcd(self._period[ru], shift)
            return
        self._parent[rw] = ru
        self._potential[rw] = shift
        self._period[ru] = math.gcd(self._period[ru], self._period[rw])
        del self._period[rw]

    def _classes(self, root) -> int:
        return math.gcd(self._period[root], self.k)

    def base_components(self) -> list[list]:
        groups: dict = {}
        for v in self._parent:
            groups.setdefault(self._find(v)[0], []).append(v)
        return [sorted(g, key=id_key) for g in groups.values()]

    def component_count(self) -> int:
        return sum(self._classes(r) for r in self._period)

    def component_counts(self) -> dict:
        """Per base component (keyed by its least vertex) the number of cover components above it."""
        out = {}
        for members in self.base_components():
            root = self._find(members[0])[0]
            out[members[0]] = self._classes(root)
        return out

    def is_trivial(self) -> bool:
        """True when every base component carries exactly k cover components."""
        return all(self._classes(r) == self.k for r in self._period)

    def label(self, v, j: int) -> tuple[object, int]:
        """Identifier of the cover component containing ``(v, j)``."""
        root, p = self._find(v)
        return root, (j + p) % self._classes(root)


def forced_offset(t: TwistedKDifferential, e: Edge) -> Optional[int]:
    """The unique o in Z_k with zeta_k^o * root_minus = -root_plus, or None."""
    rp, rm = t.root_plus(e), t.root_minus(e)
    if rm.is_zero():
        return None
    target = -rp
    for o in range(t.k):
        if rm.times_root(o, t.k) == target:
            return o
    return None


@dataclass
class HorizontalOffsets:
    offsets: dict = field(default_factory=dict)
    inconsistent: list = field(default_factory=list)  # edges where no offset exists
    component_counts: list = field(default_factory=list)  # (level, vertices, count)


def forced_horizontal_offsets(t: TwistedKDifferential, zone: Optional[Iterable] = None) -> HorizontalOffsets:
    """Forced offsets on horizontal edges inside ``zone`` (default: whole graph).

    Also reports, per connected piece of each level inside the zone, how many
    components the cover glued only along horizontal edges has.
    """
    g = t.graph
    members = set(g.vertex_ids()) if zone is None else set(zone)
    result = HorizontalOffsets()
    for level in g.levels():
        piece = g.induced(v for v in members if g.level(v) == level)
        for comp in g.connected_components(piece):
            cover = LabeledCover(t.k, comp.sorted_vertices())
            for eid in comp.edges:
                e = g.edge(eid)
                o = forced_offset(t, e)
                if o is None:
                    result.inconsistent.append(eid)
                    continue
                result.offsets[eid] = o
                cover.glue(e.v_plus, e.v_minus, o)
            result.component_counts.append((level, comp.sorted_vertices(), cover.component_count()))
    return result


def _next_level_below(levels: list[int], level: int) -> Optional[int]:
    lower = [x for x in levels if x < level]
    return max(lower) if lower else None


def relevant_zones(t: TwistedKDifferential) -> list[tuple[int, list]]:
    """Pairs (L, Y) where Y is a component of the graph above L that is a full-power, pole-free zone."""
    g = t.graph
    levels = g.levels()
    out = []
    for L in levels[1:]:
        for comp in g.connected_components(g.subgraph("above", L)):
            vs = comp.sorted_vertices()
            if all(t.is_full_power(v) and not t.has_marked_pole(v) for v in vs):
                out.append((L, vs))
    return out


def enumerated_edges(t: TwistedKDifferential) -> list:
    """Vertical edges whose offsets can influence the cover criterion, in enumeration order.

    An edge qualifies when its upper vertex lies in a full-power, pole-free
    component of the graph strictly above the next level below that vertex.
    Order: lower end's level descending, then edge id.
    """
    g = t.graph
    levels = g.levels()
    good: set = set()
    for L, vs in relevant_zones(t):
        good.update(vs)
    chosen = []
    for e in g.vertical_edges():
        v = e.v_plus
        if v not in good:
            continue
        below = _next_level_below(levels, g.level(v))
        comp = next(c for c in g.connected_components(g.subgraph("above", below)) if v in c.vertices)
        if all(t.is_full_power(u) and not t.has_marked_pole(u) for u in comp.vertices):
            chosen.append(e)
    chosen.sort(key=lambda e: (-g.level(e.v_minus), id_key(e.id)))
    return [e.id for e in chosen]


def enumerate_normalized_covers(t: TwistedKDifferential, budget: Optional[int] = None) -> Iterator[dict]:
    """All complete offset assignments, in lexicographic order over :func:`enumerated_edges`.

    Horizontal offsets are forced (0 where no offset exists) and every other
    edge gets offset 0.  Raises :class:`BudgetExceeded` before yielding
    anything if the count exceeds ``budget``.
    """
    from .grc import BudgetExceeded, resolve_budget

    budget = resolve_budget(budget)
    free = enumerated_edges(t)
    total = t.k ** len(free)
    if total > budget:
        raise BudgetExceeded(f"{total} cover assignments exceed the budget of {budget}")
    base = {e.id: 0 for e in t.graph.edges}
    base.update(forced_horizontal_offsets(t).offsets)
    for combo in itertools.product(range(t.k), repeat=len(free)):
        offsets = dict(base)
        offsets.update(zip(free, combo))
        yield offsets


def _lift_id(x, i) -> str:
    return f"{x}.{i}"


def lifted_level_graph(t: TwistedKDifferential, offsets: dict) -> LevelGraph:
    """Dual graph of the normalized cover determined by ``offsets``.

    Vertex ``"v.c"`` is component c of the cover of v; the preimage i of a
    point sits on component ``i mod d_v``.  Edge ``"e.i"`` joins preimage i
    of the upper end with preimage ``i + o(e)`` of the lower end.  Residue
    roots are carried along (preimage i of a root r gets zeta^i r), so the
    result is a twisted abelian differential when read with k = 1.
    """
    g, k = t.graph, t.k
    verts = []
    for v in g.vertices:
        data = local_cover(t, v.id)
        d = data.components
        marked_by_comp: dict = {c: [] for c in range(d)}
        for i, p in enumerate(v.marked):
            r = preimage_count(k, p.order)
            root = t.marked_residue(p)
            for a in range(r):
                lifted_root = None if root is None else root * t.zeta(a)
                if not t.has_residue(p.order):
                    lifted_root = None
                marked_by_comp[a % d].append(MarkedPoint(lifted_order(k, p.order), lifted_root))
        for c in range(d):
            verts.append(Vertex(_lift_id(v.id, c), data.component_genus, v.level, tuple(marked_by_comp[c]), 1))
    edges = []
    for e in g.edges:
        r = preimage_count(k, e.order_plus)
        o = offsets.get(e.id, 0)
        d_plus = t.power_divisor(e.v_plus)
        d_minus = t.power_divisor(e.v_minus)
        rp, rm = t.root_plus(e), t.root_minus(e)
        for i in range(r):
            j = (i + o) % r
            edges.append(Edge(
                _lift_id(e.id, i),
                _lift_id(e.v_plus, i % d_plus),
                _lift_id(e.v_minus, j % d_minus),
                lifted_order(k, e.order_plus),
                lifted_order(k, e.order_minus),
                rp * t.zeta(i) if t.has_residue(e.order_plus) else None,
                rm * t.zeta(i + o) if t.has_residue(e.order_minus) else None,
            ))
    return LevelGraph(verts, edges)


def lifted_differential(t: TwistedKDifferential, offsets: dict) -> TwistedKDifferential:
    """The cover as a twisted abelian differential (k = 1)."""
    return TwistedKDifferential(1, lifted_level_graph(t, offsets))
