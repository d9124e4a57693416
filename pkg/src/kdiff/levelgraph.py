"""Level graphs: dual graphs of nodal curves with a level function.

Every edge stores two oriented ends.  The *plus* end sits on the upper
vertex and the *minus* end on the lower one; for horizontal edges the
choice is arbitrary but fixed.  Self-edges and multi-edges are ordinary
edges here.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Callable, Hashable, Iterable, Optional

from .cyclotomic import CycNum

__all__ = [
    "MarkedPoint",
    "Vertex",
    "Edge",
    "HalfEdge",
    "LevelGraph",
    "Fragment",
    "id_key",
]

VertexId = Hashable
EdgeId = Hashable


def id_key(x) -> tuple:
    """Sort key putting integer ids before string ids."""
    return (isinstance(x, str), x)


@dataclass(frozen=True)
class MarkedPoint:
    order: int
    residue_root: Optional[CycNum] = None


@dataclass(frozen=True)
class Vertex:
    id: VertexId
    genus: int
    level: int
    marked: tuple[MarkedPoint, ...] = ()
    power_divisor: Optional[int] = None

    @property
    def marked_orders(self) -> tuple[int, ...]:
        return tuple(p.order for p in self.marked)


@dataclass(frozen=True)
class Edge:
    id: EdgeId
    v_plus: VertexId
    v_minus: VertexId
    order_plus: int
    order_minus: int
    root_plus: Optional[CycNum] = None
    root_minus: Optional[CycNum] = None

    @property
    def is_loop(self) -> bool:
        return self.v_plus == self.v_minus


@dataclass(frozen=True)
class HalfEdge:
    """One end of an edge: which edge, which side, where it sits, its order."""

    edge: EdgeId
    side: str  # "plus" or "minus"
    vertex: VertexId
    order: int


@dataclass(frozen=True)
class Fragment:
    """A vertex-induced piece of a level graph.

    ``edges`` holds the edges with both ends inside; ``dangling`` holds the
    half-edges inside the piece whose edge leaves it.
    """

    vertices: frozenset
    edges: tuple = ()
    dangling: tuple[HalfEdge, ...] = ()

    def __len__(self):
        return len(self.vertices)

    def sorted_vertices(self) -> list:
        return sorted(self.vertices, key=id_key)


class LevelGraph:
    """Immutable level graph.

    Construction does not enforce connectivity, stability or level order;
    :meth:`check` reports such problems so callers can decide what to do.
    """

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Edge] = ()):
        self._vertices = tuple(sorted(vertices, key=lambda v: id_key(v.id)))
        self._edges = tuple(sorted(edges, key=lambda e: id_key(e.id)))
        self._vmap = {v.id: v for v in self._vertices}
        self._emap = {e.id: e for e in self._edges}
        inc: dict = defaultdict(list)
        for e in self._edges:
            inc[e.v_plus].append(HalfEdge(e.id, "plus", e.v_plus, e.order_plus))
            inc[e.v_minus].append(HalfEdge(e.id, "minus", e.v_minus, e.order_minus))
        self._incident = {k: tuple(v) for k, v in inc.items()}

    # -- access ------------------------------------------------------------

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    def vertex(self, vid) -> Vertex:
        return self._vmap[vid]

    def edge(self, eid) -> Edge:
        return self._emap[eid]

    def has_vertex(self, vid) -> bool:
        return vid in self._vmap

    def vertex_ids(self) -> list:
        return [v.id for v in self._vertices]

    def level(self, vid) -> int:
        return self._vmap[vid].level

    def levels(self) -> list[int]:
        """Distinct levels, top first."""
        return sorted({v.level for v in self._vertices}, reverse=True)

    def half_edges(self, vid) -> tuple[HalfEdge, ...]:
        return self._incident.get(vid, ())

    def is_horizontal(self, e: Edge) -> bool:
        return self.level(e.v_plus) == self.level(e.v_minus)

    def horizontal_edges(self) -> list[Edge]:
        return [e for e in self._edges if self.is_horizontal(e)]

    def vertical_edges(self) -> list[Edge]:
        return [e for e in self._edges if not self.is_horizontal(e)]

    def __len__(self):
        return len(self._vertices)

    def __eq__(self, other):
        if not isinstance(other, LevelGraph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        return f"LevelGraph({len(self._vertices)} vertices, {len(self._edges)} edges)"

    # -- operations --------------------------------------------------------

    def classify_edges(self) -> dict:
        """Map each edge id to ``"horizontal"`` or ``"vertical"``."""
        return {e.id: ("horizontal" if self.is_horizontal(e) else "vertical") for e in self._edges}

    def genus_total(self) -> int:
        """Arithmetic genus: sum of vertex genera plus the first Betti number."""
        b1 = len(self._edges) - len(self._vertices) + self._count_components(self.vertex_ids())
        return sum(v.genus for v in self._vertices) + b1

    def subgraph(self, predicate: str, level: int) -> Fragment:
        """Vertex-induced piece for ``predicate`` in {"above", "at", "at_or_above", "below"}."""
        tests: dict[str, Callable[[int], bool]] = {
            "above": lambda x: x > level,
            "at": lambda x: x == level,
            "at_or_above": lambda x: x >= level,
            "below": lambda x: x < level,
        }
        try:
            keep = tests[predicate]
        except KeyError:
            raise ValueError(f"unknown predicate {predicate!r}") from None
        return self.induced({v.id for v in self._vertices if keep(v.level)})

    def induced(self, vertex_ids: Iterable) -> Fragment:
        vs = frozenset(vertex_ids)
        inner = []
        dangling = []
        for e in self._edges:
            a, b = e.v_plus in vs, e.v_minus in vs
            if a and b:
                inner.append(e.id)
            elif a:
                dangling.append(HalfEdge(e.id, "plus", e.v_plus, e.order_plus))
            elif b:
                dangling.append(HalfEdge(e.id, "minus", e.v_minus, e.order_minus))
        return Fragment(vs, tuple(inner), tuple(dangling))

    def connected_components(self, fragment: Optional[Fragment] = None) -> list[Fragment]:
        """Split a fragment (default: the whole graph) into connected pieces.

        Pieces are ordered by their least vertex id.
        """
        if fragment is None:
            fragment = self.induced(self.vertex_ids())
        parent = {v: v for v in fragment.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for eid in fragment.edges:
            e = self._emap[eid]
            ra, rb = find(e.v_plus), find(e.v_minus)
            if ra != rb:
                parent[ra] = rb
        groups: dict = defaultdict(set)
        for v in fragment.vertices:
            groups[find(v)].add(v)
        pieces = []
        for members in groups.values():
            edges = tuple(eid for eid in fragment.edges if self._emap[eid].v_plus in members)
            dangling = tuple(h for h in fragment.dangling if h.vertex in members)
            pieces.append(Fragment(frozenset(members), edges, dangling))
        pieces.sort(key=lambda f: id_key(min(f.vertices, key=id_key)))
        return pieces

    def _count_components(self, vertex_ids) -> int:
        return len(self.connected_components(self.induced(vertex_ids)))

    def is_connected(self) -> bool:
        return self._count_components(self.vertex_ids()) <= 1

    def normalize_levels(self) -> "LevelGraph":
        """Relabel levels as 0, -1, -2, ... preserving their order."""
        ranks = {lvl: -i for i, lvl in enumerate(self.levels())}
        return LevelGraph([replace(v, level=ranks[v.level]) for v in self._vertices], self._edges)

    def with_levels(self, levels: dict) -> "LevelGraph":
        return LevelGraph([replace(v, level=levels[v.id]) for v in self._vertices], self._edges)

    def replace_edges(self, edges: Iterable[Edge]) -> "LevelGraph":
        return LevelGraph(self._vertices, edges)

    def replace_vertices(self, vertices: Iterable[Vertex]) -> "LevelGraph":
        return LevelGraph(vertices, self._edges)

    def is_local_maximum(self, vid) -> bool:
        """No neighbour sits strictly higher; self-edges are ignored."""
        lvl = self.level(vid)
        for h in self.half_edges(vid):
            e = self._emap[h.edge]
            other = e.v_minus if h.side == "plus" else e.v_plus
            if other != vid and self.level(other) > lvl:
                return False
        return True

    def check(self) -> list[tuple[str, object, str]]:
        """Structural and graph-level problems as ``(code, id, message)`` triples."""
        problems = []
        seen = set()
        for v in self._vertices:
            if v.id in seen:
                problems.append(("duplicate_vertex", v.id, f"vertex id {v.id!r} repeated"))
            seen.add(v.id)
            if not isinstance(v.genus, int) or v.genus < 0:
                problems.append(("bad_genus", v.id, f"genus {v.genus!r} is not a non-negative integer"))
        eseen = set()
        dangling_ref = False
        for e in self._edges:
            if e.id in eseen:
                problems.append(("duplicate_edge", e.id, f"edge id {e.id!r} repeated"))
            eseen.add(e.id)
            for end in (e.v_plus, e.v_minus):
                if end not in self._vmap:
                    problems.append(("unknown_vertex", e.id, f"edge {e.id!r} refers to unknown vertex {end!r}"))
                    dangling_ref = True
        if dangling_ref or not self._vertices:
            if not self._vertices:
                problems.append(("empty_graph", None, "graph has no vertices"))
            return problems
        for e in self._edges:
            if self.level(e.v_plus) < self.level(e.v_minus):
                problems.append(("level_order", e.id, f"plus end of edge {e.id!r} sits below its minus end"))
        if not self.is_connected():
            problems.append(("disconnected", None, "graph is not connected"))
        for v in self._vertices:
            if 2 * v.genus - 2 + len(self.half_edges(v.id)) + len(v.marked) <= 0:
                problems.append(("unstable", v.id, f"vertex {v.id!r} is not stable"))
        return problems

