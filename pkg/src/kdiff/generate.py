"""Instance generators and the sweep harness comparing the two residue criteria.

Shapes are connected level graphs (loops and multi-edges allowed) with
vertices indexed so levels never increase with the index; two shapes
related by a level-preserving relabelling are generated once.

Every generated instance passes :func:`kdiff.twisted.validate`.  Degree
identities are solved by choosing the genus and one marked zero per
vertex, and the residue theorem at full-power vertices by solving for one
incoming root.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

from .cyclotomic import CycNum, root_of_unity
from .grc import BudgetExceeded, check_4ab, check_condition_4, check_condition_4hat
from .levelgraph import Edge, LevelGraph, MarkedPoint, Vertex
from .twisted import InvalidInstanceError, TwistedKDifferential, validate

__all__ = [
    "Shape",
    "VERTEX_KINDS",
    "level_shapes",
    "default_palette",
    "exhaustive_instances",
    "exhaustive_size",
    "EXHAUSTIVE_KINDS",
    "random_instances",
    "SweepSummary",
    "sweep",
]

VERTEX_KINDS = ("full", "pole", "prim")


@dataclass(frozen=True)
class Shape:
    levels: tuple[int, ...]  # non-increasing, starting at 0
    edges: tuple[tuple[int, int], ...]  # (upper index, lower index), sorted

    @property
    def size(self) -> int:
        return len(self.levels)

    def is_horizontal(self, edge: tuple[int, int]) -> bool:
        return self.levels[edge[0]] == self.levels[edge[1]]


def _compositions(n: int) -> Iterator[tuple[int, ...]]:
    """Level vectors of n vertices: 0 for the first block, then -1, ..."""
    for cuts in itertools.product((False, True), repeat=n - 1):
        level, out = 0, [0]
        for cut in cuts:
            level -= cut
            out.append(level)
        yield tuple(out)


def _level_preserving_perms(levels: tuple[int, ...]) -> list[tuple[int, ...]]:
    blocks: dict = {}
    for i, lvl in enumerate(levels):
        blocks.setdefault(lvl, []).append(i)
    groups = [blocks[lvl] for lvl in sorted(blocks, reverse=True)]
    perms = []
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        perm = [0] * len(levels)
        for src, dst in zip(groups, choice):
            for a, b in zip(src, dst):
                perm[a] = b
        perms.append(tuple(perm))
    return perms


def _relabel(edges, perm) -> tuple:
    return tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges))


def _connected(n: int, edges) -> bool:
    seen, stack = {0}, [0]
    adj: dict = {i: set() for i in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    while stack:
        for w in adj[stack.pop()] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == n


def level_shapes(max_vertices: int, max_edges: int) -> list[Shape]:
    """Connected level-graph shapes up to level-preserving relabelling, in a fixed order."""
    shapes = []
    for n in range(1, max_vertices + 1):
        pairs = [(a, b) for a in range(n) for b in range(a, n)]
        for levels in _compositions(n):
            perms = _level_preserving_perms(levels)
            seen = set()
            for m in range(0, max_edges + 1):
                for edges in itertools.combinations_with_replacement(pairs, m):
                    if not _connected(n, edges):
                        continue
                    canon = min(_relabel(edges, p) for p in perms)
                    if canon in seen:
                        continue
                    seen.add(canon)
                    shapes.append(Shape(levels, canon))
    return shapes


def _automorphisms(shape: Shape) -> list[tuple[int, ...]]:
    return [p for p in _level_preserving_perms(shape.levels) if _relabel(shape.edges, p) == shape.edges]


def default_palette(k: int) -> list[CycNum]:
    """Root palette 0, 1, -1, zeta_k, 1 + zeta_k, without repeats (k = 1, 2 collapse)."""
    z = root_of_unity(k, 1)
    one = CycNum.one(k)
    return _distinct([CycNum.zero(k), one, -one, z, one + z])


def _distinct(values: Sequence[CycNum]) -> list[CycNum]:
    out: list[CycNum] = []
    for v in values:
        if v not in out:
            out.append(v)
    return out


# -- assembling instances ----------------------------------------------------------

def _vertex_data(k: int, kind: str, half_edge_sum: int, half_edges: int):
    """Genus and marked points making the degree identity and stability hold."""
    genus = 0
    while True:
        rest = k * (2 * genus - 2) - half_edge_sum
        if kind == "pole":
            marked = [rest + k, -k]
            ok = rest + k >= 0
        else:
            marked = [rest] if rest > 0 else []
            ok = rest >= 0
        if ok and 2 * genus - 2 + half_edges + len(marked) > 0:
            return genus, [MarkedPoint(m) for m in marked]
        genus += 1


def _build(shape: Shape, k: int, kinds: Sequence[str], orders: Sequence[tuple[int, int]],
           minus_roots: Sequence[Optional[CycNum]], plus_roots: Sequence[Optional[CycNum]],
           divisors: Optional[Sequence[int]] = None) -> TwistedKDifferential:
    n = shape.size
    sums = [0] * n
    counts = [0] * n
    for (a, b), (op, om) in zip(shape.edges, orders):
        sums[a] += op
        sums[b] += om
        counts[a] += 1
        counts[b] += 1
    vertices = []
    for i in range(n):
        genus, marked = _vertex_data(k, kinds[i], sums[i], counts[i])
        d = divisors[i] if divisors is not None else (k if kinds[i] in ("full", "pole") else 1)
        vertices.append(Vertex(i, genus, shape.levels[i], tuple(marked), d))
    edges = [Edge(j, a, b, op, om, rp, rm)
             for j, ((a, b), (op, om), rp, rm) in enumerate(zip(shape.edges, orders, plus_roots, minus_roots))]
    return TwistedKDifferential(k, LevelGraph(vertices, edges))


def _solve_residue_theorem(shape: Shape, k: int, kinds, orders, minus_roots, plus_roots) -> Optional[list]:
    """Adjust one incoming vertical root per pole-free full-power vertex so its residues sum to zero.

    Returns the adjusted minus roots, or None when some vertex has nothing to adjust
    and its residues do not already cancel.
    """
    minus_roots = list(minus_roots)
    for v in range(shape.size):
        if kinds[v] != "full":
            continue
        carries = lambda order: order % k == 0 and order <= -k
        incoming = [j for j, ((a, b), (_, om)) in enumerate(zip(shape.edges, orders))
                    if b == v and carries(om) and not shape.is_horizontal((a, b))]
        free = incoming[-1] if incoming else None
        total = CycNum.zero(2 * k)
        for j, ((a, b), (op, om)) in enumerate(zip(shape.edges, orders)):
            if b == v and carries(om) and j != free:
                total = total + minus_roots[j]
            if a == v and carries(op):
                total = total + plus_roots[j]
        if free is None:
            if not total.is_zero():
                return None
        else:
            minus_roots[free] = -total
    return minus_roots


def _kind_assignments(shape: Shape, kinds: Sequence[str]) -> list[tuple[str, ...]]:
    autos = _automorphisms(shape)
    out = []
    for combo in itertools.product(kinds, repeat=shape.size):
        # keep one representative per automorphism orbit
        if all(tuple(combo[p[i]] for i in range(shape.size)) >= combo for p in autos):
            out.append(combo)
    return out


def _relevant_vertical(shape: Shape, kinds) -> list[bool]:
    """Vertical edges whose root can matter: the upper vertex sits in a full-power, pole-free zone."""
    n = shape.size
    out = []
    for a, b in shape.edges:
        if shape.is_horizontal((a, b)):
            out.append(False)
            continue
        below = max(lvl for lvl in shape.levels if lvl < shape.levels[a])
        members = {i for i in range(n) if shape.levels[i] > below}
        comp, stack = {a}, [a]
        while stack:
            x = stack.pop()
            for c, d in shape.edges:
                for u, w in ((c, d), (d, c)):
                    if u == x and w in members and w not in comp:
                        comp.add(w)
                        stack.append(w)
        out.append(all(kinds[i] == "full" for i in comp))
    return out


def _solved_slots(shape: Shape, kinds) -> set:
    """Edges whose lower root is fixed by the residue theorem at a full-power vertex."""
    out = set()
    for v in range(shape.size):
        if kinds[v] == "full":
            incoming = [j for j, (a, b) in enumerate(shape.edges) if b == v and not shape.is_horizontal((a, b))]
            if incoming:
                out.add(incoming[-1])
    return out


EXHAUSTIVE_KINDS = ("full", "prim")


def exhaustive_instances(max_vertices: int = 4, max_edges: int = 5, ks: Iterable[int] = (2, 3),
                         palette: Optional[Sequence[CycNum]] = None,
                         kinds: Sequence[str] = EXHAUSTIVE_KINDS,
                         per_shape_cap: Optional[int] = None) -> Iterator[TwistedKDifferential]:
    """Every instance of the exhaustive family, in a deterministic order.

    With ``per_shape_cap`` set, each (shape, vertex kinds) pair keeps at most
    that many root assignments, taken at evenly spaced positions of its
    enumeration; shapes and kinds are still covered completely.

    Vertical edges carry orders (0, -2k) and a palette root below.  A
    horizontal edge carries root 1 below and, when both ends are full
    powers, each of the k roots matching it above.  Roots that cannot
    affect either criterion are fixed: those on vertical edges leaving a
    zone that is not full-power and pole-free are 0, and one incoming root
    per full-power vertex is solved from the residue theorem.  Without
    marked poles the "pole" kind decides exactly like "prim", so it is
    left out by default.
    """
    for k in ks:
        pal = list(palette) if palette is not None else default_palette(k)
        pal = _distinct([r.embed(math.lcm(2 * k, r.order)) for r in pal])
        zero = CycNum.zero(2 * k)
        one = CycNum.one(2 * k)
        for shape in level_shapes(max_vertices, max_edges):
            horizontal = [shape.is_horizontal(e) for e in shape.edges]
            orders = [(-k, -k) if h else (0, -2 * k) for h in horizontal]
            for kind in _kind_assignments(shape, kinds):
                choices = _root_choices(shape, _slots(shape, k, kind, pal, zero, one))
                if per_shape_cap is not None:
                    choices = _spread(list(choices), per_shape_cap)
                for choice in choices:
                    minus = [r for r, _ in choice]
                    plus = [None if o is None else -(r * root_of_unity(k, o)) for r, o in choice]
                    minus = _solve_residue_theorem(shape, k, kind, orders, minus, plus)
                    if minus is None:
                        continue
                    t = _build(shape, k, kind, orders, minus, plus)
                    if validate(t).ok:
                        yield t


def _slots(shape: Shape, k: int, kind, pal, zero, one) -> list[list]:
    relevant = _relevant_vertical(shape, kind)
    solved = _solved_slots(shape, kind)
    slots = []
    for j, (a, b) in enumerate(shape.edges):
        if shape.is_horizontal((a, b)):
            both_full = kind[a] == "full" and kind[b] == "full"
            slots.append([(one, o) for o in (range(k) if both_full else [0])])
        elif relevant[j] and j not in solved:
            slots.append([(r, None) for r in pal])
        else:
            slots.append([(zero, None)])
    return slots


def _root_choices(shape: Shape, slots: list[list]) -> Iterator[tuple]:
    """Product of the slots, skipping reorderings among interchangeable parallel edges.

    Parallel edges with the same option list are interchangeable, so only
    non-decreasing option indices along each such run are produced.
    """
    runs = []
    for j in range(1, len(slots)):
        if shape.edges[j] == shape.edges[j - 1] and len(slots[j]) > 1 and slots[j] == slots[j - 1]:
            runs.append(j)
    for idx in itertools.product(*(range(len(s)) for s in slots)):
        if all(idx[j - 1] <= idx[j] for j in runs):
            yield tuple(s[i] for s, i in zip(slots, idx))


def _spread(items: list, cap: int) -> list:
    """At most ``cap`` items at evenly spaced positions (centred in each stretch)."""
    if len(items) <= cap:
        return items
    n = len(items)
    return [items[(2 * i + 1) * n // (2 * cap)] for i in range(cap)]


def exhaustive_size(max_vertices: int = 4, max_edges: int = 5, ks: Iterable[int] = (2, 3),
                    palette_size: Optional[int] = None, kinds: Sequence[str] = EXHAUSTIVE_KINDS,
                    per_shape_cap: Optional[int] = None) -> int:
    """Number of candidates :func:`exhaustive_instances` considers (before validity filtering)."""
    total = 0
    for k in ks:
        size = palette_size if palette_size is not None else len(default_palette(k))
        for shape in level_shapes(max_vertices, max_edges):
            for kind in _kind_assignments(shape, kinds):
                n = sum(1 for _ in _root_choices(shape, _slots(shape, k, kind, range(size), 0, 1)))
                total += n if per_shape_cap is None else min(n, per_shape_cap)
    return total


def random_instances(count: int, seed: int = 0, max_vertices: int = 4, max_edges: int = 5,
                     ks: Iterable[int] = (2, 3), palette: Optional[Sequence[CycNum]] = None,
                     max_tries: int = 100) -> Iterator[TwistedKDifferential]:
    """``count`` seeded random valid instances.

    Unlike the exhaustive family, vertical orders vary (so some roots vanish
    by convention) and power divisors range over all divisors of k.
    """
    rng = random.Random(seed)
    ks = list(ks)
    shapes = level_shapes(max_vertices, max_edges)
    produced = 0
    while produced < count:
        for _ in range(max_tries):
            t = _random_candidate(rng, rng.choice(shapes), rng.choice(ks), palette)
            if t is not None and validate(t).ok:
                yield t
                produced += 1
                break
        else:
            raise RuntimeError("random generator failed to find a valid instance")


def _random_candidate(rng: random.Random, shape: Shape, k: int, palette) -> Optional[TwistedKDifferential]:
    pal = list(palette) if palette is not None else default_palette(k)
    pal = [r.embed(math.lcm(2 * k, r.order)) for r in pal]
    nonzero = [r for r in pal if not r.is_zero()]
    kinds = [rng.choice(VERTEX_KINDS) for _ in range(shape.size)]
    orders, minus, plus = [], [], []
    for e in shape.edges:
        if shape.is_horizontal(e):
            r = rng.choice(nonzero)
            orders.append((-k, -k))
            minus.append(r)
            plus.append(-(r * root_of_unity(k, rng.randrange(k))))
        else:
            # keep the upper order divisible by every power divisor in play
            op = k * rng.randrange(0, 2) if rng.random() < 0.7 else rng.randrange(-k + 1, k + 1)
            om = -2 * k - op
            orders.append((op, om))
            minus.append(rng.choice(pal) if om % k == 0 else None)
            plus.append(None)
    minus = _solve_residue_theorem(shape, k, kinds, orders, minus, plus)
    if minus is None:
        return None
    divisors = []
    n = shape.size
    sums = [[] for _ in range(n)]
    for (a, b), (op, om) in zip(shape.edges, orders):
        sums[a].append(op)
        sums[b].append(om)
    for i in range(n):
        g = math.gcd(k, *sums[i]) if sums[i] else k
        if kinds[i] == "prim":
            choices = [d for d in range(1, k) if g % d == 0] or [1]
            divisors.append(rng.choice(choices))
        elif g == k:
            divisors.append(k)
        else:
            return None
    t = _build(shape, k, kinds, orders, minus, plus, divisors)
    return t


# -- the sweep --------------------------------------------------------------------

@dataclass
class SweepSummary:
    instances: int = 0
    agreements: int = 0
    disagreements: int = 0
    indeterminate: int = 0
    holds: int = 0
    fails: int = 0
    elapsed: float = 0.0
    disagreeing: list = field(default_factory=list)

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "instances": self.instances,
            "agreements": self.agreements,
            "disagreements": self.disagreements,
            "indeterminate": self.indeterminate,
            "holds": self.holds,
            "fails": self.fails,
            "disagreeing": self.disagreeing,
        }
        if timing:
            out["seconds"] = round(self.elapsed, 3)
        return out


def compare(t: TwistedKDifferential, budget: Optional[int] = None,
            validated: bool = False) -> tuple[Optional[bool], Optional[bool]]:
    """Verdicts of the direct criterion and of the reference criterion for one instance.

    The reference is the cover search for k >= 2 and the abelian condition for k = 1.
    """
    if not validated and not validate(t).ok:
        raise InvalidInstanceError(validate(t))
    direct = check_condition_4(t, budget, validated=True).holds
    if t.k == 1:
        return direct, check_4ab(t, validated=True).holds
    return direct, check_condition_4hat(t, budget, validated=True).holds


def sweep(instances: Iterable[TwistedKDifferential], budget: Optional[int] = None,
          limit: Optional[int] = None, keep: int = 10, validated: bool = True) -> SweepSummary:
    """Cross-check every instance; remembers up to ``keep`` disagreements by index.

    Generated instances are valid by construction; pass ``validated=False``
    for instances from elsewhere.
    """
    from .serialize import instance_to_json

    summary = SweepSummary()
    start = time.perf_counter()
    for index, t in enumerate(instances):
        if limit is not None and index >= limit:
            break
        summary.instances += 1
        try:
            a, b = compare(t, budget, validated)
        except BudgetExceeded:
            a = b = None
        if a is None or b is None:
            summary.indeterminate += 1
        elif a == b:
            summary.agreements += 1
            summary.holds += a
            summary.fails += not a
        else:
            summary.disagreements += 1
            if len(summary.disagreeing) < keep:
                summary.disagreeing.append({"index": index, "direct": a, "reference": b,
                                            "instance": instance_to_json(t)})
    summary.elapsed = time.perf_counter() - start
    return summary
