"""Twisted k-differentials as decorated level graphs, and their validation.

A twisted k-differential is stored combinatorially: the level graph with
zero/pole orders at marked points and at both ends of every node, the
power divisor ``d_v`` of each vertex, and k-th roots of k-residues.

Roots, not k-residues, are the stored data; the k-residue is ``root**k``.
At a vertex with ``d_v == k`` all roots are residues of one fixed abelian
k-th root of the vertex differential.  At other vertices each half-edge
carries its own independent choice of root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Optional

from .cyclotomic import CycNum, root_of_unity
from .levelgraph import Edge, LevelGraph, MarkedPoint

__all__ = [
    "TwistedKDifferential",
    "Issue",
    "ValidationReport",
    "InvalidInstanceError",
    "TypeSignature",
    "validate",
    "type_signature",
    "scale_roots",
    "gauge_vertex",
    "gauge_half_edge",
]


class InvalidInstanceError(ValueError):
    """Raised when an operation needs a valid twisted differential and did not get one."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        lines = "; ".join(i.message for i in report.problems[:5])
        super().__init__(f"invalid twisted differential: {lines}")


@dataclass(frozen=True)
class Issue:
    severity: str  # "structural", "violation" or "warning"
    code: str
    where: object
    message: str

    def to_json(self) -> dict:
        return {"severity": self.severity, "code": self.code, "where": self.where, "message": self.message}


@dataclass
class ValidationReport:
    issues: list[Issue] = field(default_factory=list)

    @property
    def problems(self) -> list[Issue]:
        return [i for i in self.issues if i.severity != "warning"]

    @property
    def structural(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == "structural"]

    @property
    def violations(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == "violation"]

    @property
    def warnings(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.problems

    def codes(self) -> set[str]:
        return {i.code for i in self.problems}

    def to_json(self) -> dict:
        return {"valid": self.ok, "issues": [i.to_json() for i in self.issues]}

    def __bool__(self):
        return self.ok


class TwistedKDifferential:
    """A level graph decorated as a twisted k-differential.

    The power divisor of each vertex is read from ``Vertex.power_divisor``.
    """

    def __init__(self, k: int, graph: LevelGraph):
        self.k = k
        self.graph = graph

    def __repr__(self):
        return f"TwistedKDifferential(k={self.k}, {self.graph!r})"

    def __eq__(self, other):
        if not isinstance(other, TwistedKDifferential):
            return NotImplemented
        return self.k == other.k and self.graph == other.graph

    __hash__ = None  # type: ignore[assignment]

    def power_divisor(self, vid) -> int:
        d = self.graph.vertex(vid).power_divisor
        if d is None:
            raise ValueError(f"vertex {vid!r} has no power divisor")
        return d

    def is_full_power(self, vid) -> bool:
        """True when the vertex differential is a k-th power of an abelian one."""
        return self.power_divisor(vid) == self.k

    def has_marked_pole(self, vid) -> bool:
        return any(p.order < 0 for p in self.graph.vertex(vid).marked)

    def has_residue(self, order: int) -> bool:
        """Whether a point of this order carries a (possibly nonzero) k-residue."""
        return order <= -self.k and order % self.k == 0

    @cached_property
    def working_order(self) -> int:
        """Cyclotomic order M = lcm(2k, orders of all roots) used for all arithmetic."""
        m = 2 * self.k
        for e in self.graph.edges:
            for r in (e.root_plus, e.root_minus):
                if r is not None:
                    m = math.lcm(m, r.order)
        for v in self.graph.vertices:
            for p in v.marked:
                if p.residue_root is not None:
                    m = math.lcm(m, p.residue_root.order)
        return m

    def zeta(self, j: int = 1) -> CycNum:
        """zeta_k^j inside the working field."""
        m = self.working_order
        return root_of_unity(m, (j % self.k) * (m // self.k))

    def _coerce(self, r: Optional[CycNum]) -> CycNum:
        m = self.working_order
        if r is None:
            return CycNum.zero(m)
        return r.embed(m)

    def root_minus(self, e: Edge) -> CycNum:
        """Root at the lower end, zero whenever the k-residue vanishes by convention."""
        if not self.has_residue(e.order_minus):
            return CycNum.zero(self.working_order)
        return self._coerce(e.root_minus)

    def root_plus(self, e: Edge) -> CycNum:
        if not self.has_residue(e.order_plus):
            return CycNum.zero(self.working_order)
        return self._coerce(e.root_plus)

    def marked_residue(self, p: MarkedPoint) -> Optional[CycNum]:
        if not self.has_residue(p.order):
            return CycNum.zero(self.working_order)
        if p.residue_root is None:
            return None
        return self._coerce(p.residue_root)

    def polar_roots(self, vid) -> list[tuple[object, str, CycNum]]:
        """Roots at node branches of ``vid`` that can carry a residue."""
        out = []
        for h in self.graph.half_edges(vid):
            e = self.graph.edge(h.edge)
            if self.has_residue(h.order):
                r = self.root_plus(e) if h.side == "plus" else self.root_minus(e)
                out.append((h.edge, h.side, r))
        return out

    def with_graph(self, graph: LevelGraph) -> "TwistedKDifferential":
        return TwistedKDifferential(self.k, graph)


@dataclass(frozen=True)
class TypeSignature:
    genus: int
    mu: tuple[int, ...]
    k: int

    @property
    def degree_ok(self) -> bool:
        return sum(self.mu) == self.k * (2 * self.genus - 2)

    @property
    def n(self) -> int:
        return len(self.mu)


def _structural(t: TwistedKDifferential) -> list[Issue]:
    issues = [Issue("structural", code, where, msg) for code, where, msg in t.graph.check()
              if code in {"duplicate_vertex", "duplicate_edge", "unknown_vertex", "empty_graph", "bad_genus"}]
    if not isinstance(t.k, int) or t.k < 1:
        issues.append(Issue("structural", "bad_k", None, f"k must be a positive integer, got {t.k!r}"))
        return issues
    for v in t.graph.vertices:
        d = v.power_divisor
        if d is None:
            issues.append(Issue("structural", "missing_power_divisor", v.id, f"vertex {v.id!r} has no power divisor"))
        elif not isinstance(d, int) or d < 1 or t.k % d:
            issues.append(Issue("structural", "bad_power_divisor", v.id,
                                f"power divisor {d!r} of vertex {v.id!r} does not divide k={t.k}"))
    return issues


def validate(t: TwistedKDifferential) -> ValidationReport:
    """Check the defining conditions of a twisted k-differential on its level graph.

    Reports, with the offending vertex or edge: graph problems (connectivity,
    stability, level order), the degree identity at each vertex, matching
    orders, the partial-order condition, the power divisor, presence and
    vanishing of roots, matching k-residues at horizontal nodes, and the
    residue theorem at vertices that are k-th powers.
    """
    report = ValidationReport(_structural(t))
    if report.structural:
        return report
    g, k = t.graph, t.k
    add = report.issues.append

    for code, where, msg in g.check():
        add(Issue("violation", code, where, msg))

    for v in g.vertices:
        total = sum(v.marked_orders) + sum(h.order for h in g.half_edges(v.id))
        if total != k * (2 * v.genus - 2):
            add(Issue("violation", "degree", v.id,
                      f"orders at vertex {v.id!r} sum to {total}, expected {k * (2 * v.genus - 2)}"))
        orders = list(v.marked_orders) + [h.order for h in g.half_edges(v.id)]
        gcd = math.gcd(k, *orders) if orders else k
        if gcd % v.power_divisor:
            add(Issue("violation", "power_divisor", v.id,
                      f"power divisor {v.power_divisor} of vertex {v.id!r} does not divide gcd {gcd}"))

    for e in g.edges:
        if e.order_plus + e.order_minus != -2 * k:
            add(Issue("violation", "matching_orders", e.id,
                      f"orders {e.order_plus}, {e.order_minus} at edge {e.id!r} do not sum to {-2 * k}"))
        horizontal = g.is_horizontal(e)
        if e.order_plus < -k or e.order_minus < -k and horizontal:
            add(Issue("violation", "partial_order", e.id, f"edge {e.id!r} has an upper end of order below {-k}"))
        elif horizontal and not (e.order_plus == -k and e.order_minus == -k):
            add(Issue("violation", "partial_order", e.id, f"horizontal edge {e.id!r} needs orders {-k}, {-k}"))
        elif not horizontal and not (e.order_plus > -k and e.order_minus < -k):
            add(Issue("violation", "partial_order", e.id,
                      f"vertical edge {e.id!r} needs order above {-k} on top and below {-k} on the bottom"))

        for side, order, root in (("plus", e.order_plus, e.root_plus), ("minus", e.order_minus, e.root_minus)):
            if t.has_residue(order):
                if root is None:
                    add(Issue("violation", "missing_root", e.id, f"edge {e.id!r} needs a residue root at its {side} end"))
                elif horizontal and root.is_zero():
                    add(Issue("violation", "zero_horizontal_root", e.id,
                              f"horizontal edge {e.id!r} has a vanishing residue at its {side} end"))
            elif root is not None and not root.is_zero():
                add(Issue("violation", "nonzero_conventional_root", e.id,
                          f"k-residue at the {side} end of edge {e.id!r} is zero by convention"))

        if horizontal and e.root_plus is not None and e.root_minus is not None:
            if not _residues_match(t, e):
                add(Issue("violation", "matching_residues", e.id, f"k-residues at horizontal edge {e.id!r} do not match"))

    for v in g.vertices:
        for i, p in enumerate(v.marked):
            if p.residue_root is not None and not t.has_residue(p.order) and not p.residue_root.is_zero():
                add(Issue("violation", "nonzero_conventional_root", v.id,
                          f"marked point {i} of vertex {v.id!r} has zero k-residue by convention"))
        if v.power_divisor != k:
            continue
        roots = [r for _, _, r in t.polar_roots(v.id)]
        missing = False
        for p in v.marked:
            if p.order < 0:
                r = t.marked_residue(p)
                if r is None:
                    missing = True
                else:
                    roots.append(r)
        if missing:
            add(Issue("warning", "residue_theorem_skipped", v.id,
                      f"residue theorem at vertex {v.id!r} not checked: marked pole residues absent"))
            continue
        total = CycNum.zero(t.working_order)
        for r in roots:
            total = total + r
        if not total.is_zero():
            add(Issue("violation", "residue_theorem", v.id, f"residues of the k-th root at vertex {v.id!r} do not sum to zero"))

    sig = _signature(t)
    if not sig.degree_ok and not any(i.code == "degree" for i in report.issues):
        add(Issue("violation", "signature", None, "marked orders do not sum to k(2g-2)"))
    return report


def _residues_match(t: TwistedKDifferential, e: Edge) -> bool:
    """root_plus^k == (-1)^k root_minus^k, tested as -root_plus = zeta_k^o root_minus for some o.

    The two are equivalent because zeta_k lies in the working field.
    """
    rp, rm = t.root_plus(e), t.root_minus(e)
    if rm.is_zero():
        return rp.is_zero()
    target = -rp
    return any(rm.times_root(o, t.k) == target for o in range(t.k))


def _signature(t: TwistedKDifferential) -> TypeSignature:
    mu = tuple(o for v in t.graph.vertices for o in v.marked_orders)
    return TypeSignature(t.graph.genus_total(), mu, t.k)


def type_signature(t: TwistedKDifferential) -> TypeSignature:
    """Genus and concatenated marked orders of a valid instance."""
    report = validate(t)
    if not report.ok:
        raise InvalidInstanceError(report)
    return _signature(t)


# -- gauge transformations --------------------------------------------------

def _mul(r: Optional[CycNum], c: CycNum) -> Optional[CycNum]:
    return None if r is None else r * c


def scale_roots(t: TwistedKDifferential, c: CycNum) -> TwistedKDifferential:
    """Multiply every stored root by the same nonzero scalar."""
    if c.is_zero():
        raise ValueError("scaling factor must be nonzero")
    g = t.graph
    edges = [replace(e, root_plus=_mul(e.root_plus, c), root_minus=_mul(e.root_minus, c)) for e in g.edges]
    verts = [replace(v, marked=tuple(replace(p, residue_root=_mul(p.residue_root, c)) for p in v.marked))
             for v in g.vertices]
    return t.with_graph(LevelGraph(verts, edges))


def gauge_vertex(t: TwistedKDifferential, vid, j: int) -> TwistedKDifferential:
    """Multiply every root attached to ``vid`` by zeta_k^j (a change of k-th root there)."""
    z = t.zeta(j)
    g = t.graph
    edges = []
    for e in g.edges:
        rp, rm = e.root_plus, e.root_minus
        if e.v_plus == vid:
            rp = _mul(rp, z)
        if e.v_minus == vid:
            rm = _mul(rm, z)
        edges.append(replace(e, root_plus=rp, root_minus=rm))
    verts = [v if v.id != vid else
             replace(v, marked=tuple(replace(p, residue_root=_mul(p.residue_root, z)) for p in v.marked))
             for v in g.vertices]
    return t.with_graph(LevelGraph(verts, edges))


def gauge_half_edge(t: TwistedKDifferential, eid, side: str, j: int) -> TwistedKDifferential:
    """Multiply the root at one end of one edge by zeta_k^j."""
    z = t.zeta(j)
    edges = []
    for e in t.graph.edges:
        if e.id == eid:
            if side == "plus":
                e = replace(e, root_plus=_mul(e.root_plus, z))
            elif side == "minus":
                e = replace(e, root_minus=_mul(e.root_minus, z))
            else:
                raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")
        edges.append(e)
    return t.with_graph(t.graph.replace_edges(edges))
