"""Global residue conditions deciding whether a twisted k-differential smooths.

Two independent deciders live here:

* :func:`check_condition_4` walks every level ``L`` and every component
  ``Y`` of the graph above ``L`` and looks for one of five reasons the
  residue condition is satisfied there (cases ``"i"`` to ``"v"``).
* :func:`check_condition_4hat` searches for a normalized cover whose
  abelian residues satisfy the abelian global residue condition.

The two are expected to agree on every valid instance, which is what the
sweep harness in :mod:`kdiff.generate` checks.
"""

from __future__ import annotations

import itertools
import math
import os
from functools import lru_cache
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from .cover import LabeledCover, enumerated_edges, forced_horizontal_offsets, forced_offset, relevant_zones
from .cyclotomic import CycNum, root_of_unity
from .levelgraph import id_key
from .twisted import InvalidInstanceError, TwistedKDifferential, validate

__all__ = [
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "resolve_budget",
    "p_nk_evaluate",
    "p_nk_vanishes",
    "InstanceVerdict",
    "GRCReport",
    "CoverVerdict",
    "check_condition_4",
    "check_4ab",
    "check_condition_4hat",
    "cover_offsets_pass",
    "verify_instance",
]

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """An enumeration needed more steps than its budget allows."""


def resolve_budget(budget: Optional[int] = None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get("KDIFF_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


class _Counter:
    def __init__(self, budget: Optional[int]):
        self.budget = resolve_budget(budget)
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.budget:
            raise BudgetExceeded(f"enumeration budget of {self.budget} exceeded")


# -- integer images of zeta-orbits ----------------------------------------------

def _orbits(roots: Sequence[CycNum], k: int) -> list[list[tuple[int, ...]]]:
    """For each root r, the vectors of zeta_k^j r (j in Z_k), scaled to integers.

    All roots share one scale factor, so vanishing of a signed sum of these
    vectors is exactly vanishing of the corresponding field elements.
    """
    if not roots:
        return []
    order = math.lcm(k, *(r.order for r in roots))
    rows = [_orbit(r.embed(order).coeffs, order, k) for r in roots]
    scale = math.lcm(*(c.denominator for row in rows for c in row[0]))
    return [[tuple(int(c * scale) for c in vec) for vec in row] for row in rows]


@lru_cache(maxsize=4096)
def _orbit(coeffs: tuple, order: int, k: int) -> tuple:
    r = CycNum(order, coeffs)
    return tuple(r.times_root(j, k).coeffs for j in range(k))


def _add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


# -- the symmetric polynomial P_{N,k} ---------------------------------------------

def p_nk_evaluate(roots: Sequence[CycNum], k: int, budget: Optional[int] = None) -> CycNum:
    """Product of r_1 zeta^j_1 + ... + r_N zeta^j_N over all k^N exponent tuples.

    The value depends only on the k-th powers of the roots.  Brute force;
    the number of factors is checked against the budget first.
    """
    roots = list(roots)
    limit = resolve_budget(budget)
    if k ** len(roots) > limit:
        raise BudgetExceeded(f"{k}^{len(roots)} factors exceed the budget of {limit}")
    if not roots:
        return CycNum.one(k)
    order = math.lcm(k, *(r.order for r in roots))
    roots = [r.embed(order) for r in roots]
    zetas = [root_of_unity(order, j * (order // k)) for j in range(k)]
    result = CycNum.one(order)
    for exps in itertools.product(range(k), repeat=len(roots)):
        term = CycNum.zero(order)
        for r, j in zip(roots, exps):
            term = term + r * zetas[j]
        result = result * term
    return result


def p_nk_vanishes(roots: Sequence[CycNum], k: int, budget: Optional[int] = None) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Decide whether P_{N,k} vanishes at the k-th powers of ``roots``.

    Returns the first exponent tuple (with leading exponent 0) making the
    twisted sum vanish, in lexicographic order.  An empty list vanishes.
    """
    exps = _first_vanishing(_orbits(list(roots), k), k, _Counter(budget))
    return exps is not None, exps


def _first_vanishing(orbits, k: int, counter: _Counter) -> Optional[tuple[int, ...]]:
    if not orbits:
        return ()
    for tail in itertools.product(range(k), repeat=len(orbits) - 1):
        counter.spend()
        total = orbits[0][0]
        for row, j in zip(orbits[1:], tail):
            total = _add(total, row[j])
        if not any(total):
            return (0,) + tail
    return None


# -- reports --------------------------------------------------------------------

@dataclass
class InstanceVerdict:
    level: int
    component_vertices: list
    case: str  # "i".."v", "violated" or "indeterminate"
    witness: Optional[dict] = None
    satisfied_cases: Optional[list] = None

    @property
    def satisfied(self) -> Optional[bool]:
        if self.case == "indeterminate":
            return None
        return self.case != "violated"

    def to_json(self) -> dict:
        out = {"level": self.level, "component_vertices": self.component_vertices,
               "case": self.case, "witness": self.witness}
        if self.satisfied_cases is not None:
            out["satisfied_cases"] = self.satisfied_cases
        return out


@dataclass
class GRCReport:
    instances: list[InstanceVerdict] = field(default_factory=list)

    @property
    def holds(self) -> Optional[bool]:
        """False if any instance fails, None if undecided somewhere, else True."""
        verdicts = [i.satisfied for i in self.instances]
        if False in verdicts:
            return False
        if None in verdicts:
            return None
        return True

    @property
    def status(self) -> str:
        return {True: "holds", False: "violated", None: "indeterminate"}[self.holds]

    def violated(self) -> list[InstanceVerdict]:
        return [i for i in self.instances if i.case == "violated"]

    def to_json(self) -> dict:
        return {"holds": self.holds, "status": self.status, "instances": [i.to_json() for i in self.instances]}


class CoverVerdict(NamedTuple):
    """Outcome of the cover criterion; ``holds`` is None when the budget ran out."""

    holds: Optional[bool]
    witness: Optional[dict]

    @property
    def status(self) -> str:
        return {True: "holds", False: "violated", None: "indeterminate"}[self.holds]

    def to_json(self) -> dict:
        return {"holds": self.holds, "status": self.status, "witness": self.witness}


def _require_valid(t: TwistedKDifferential) -> None:
    report = validate(t)
    if not report.ok:
        raise InvalidInstanceError(report)


def _levels_and_components(t: TwistedKDifferential):
    g = t.graph
    for L in g.levels()[1:]:
        for comp in g.connected_components(g.subgraph("above", L)):
            yield L, comp.sorted_vertices()


def _down_edges(t: TwistedKDifferential, members: set, level: int) -> list:
    """Edges from ``members`` down to vertices at exactly ``level``, by id."""
    g = t.graph
    return [e for e in g.edges if e.v_plus in members and e.v_minus not in members and g.level(e.v_minus) == level]


# -- condition (4), case by case ------------------------------------------------

def _case_marked_pole(t, members):
    for v in members:
        if t.has_marked_pole(v):
            return {"vertex": v}
    return None


def _case_not_full_power(t, members):
    for v in members:
        if not t.is_full_power(v):
            return {"vertex": v, "power_divisor": t.power_divisor(v)}
    return None


def _case_horizontal_mismatch(t, members):
    report = forced_horizontal_offsets(t, members)
    for level, vs, count in report.component_counts:
        if count < t.k:
            return {"level": level, "vertices": vs, "components": count}
    return None


def _cancelling_offsets(t, edges, counter) -> list[tuple[int, ...]]:
    """Offset tuples (first entry 0) with sum of zeta^o(e) root_minus(e) equal to zero."""
    if not edges:
        return [()]
    orbits = _orbits([t.root_minus(e) for e in edges], t.k)
    found = []
    for tail in itertools.product(range(t.k), repeat=len(edges) - 1):
        counter.spend()
        total = orbits[0][0]
        for row, j in zip(orbits[1:], tail):
            total = _add(total, row[j])
        if not any(total):
            found.append((0,) + tail)
    return found


def _case_criss_cross(t, members, counter):
    """Search for a level K inside Y with cancelling offsets that glue some copies together."""
    g, k = t.graph, t.k
    levels = sorted({g.level(v) for v in members}, reverse=True)
    for K in levels[1:]:
        upper = {v for v in members if g.level(v) > K}
        at_k = sorted((v for v in members if g.level(v) == K), key=id_key)
        edges = [e for e in g.vertical_edges() if e.v_minus in at_k and e.v_plus in members]
        if not edges:
            continue
        pieces = g.connected_components(g.induced(upper))
        owner = {v: i for i, piece in enumerate(pieces) for v in piece.vertices}
        per_piece = [[e for e in edges if owner[e.v_plus] == i] for i in range(len(pieces))]
        solutions = [_cancelling_offsets(t, es, counter) for es in per_piece]
        if any(not s for s in solutions):
            continue
        horizontal = [(e.v_plus, e.v_minus, forced_offset(t, e)) for e in g.horizontal_edges()
                      if e.v_plus in at_k and e.v_minus in at_k]
        for choice in itertools.product(*solutions):
            counter.spend()
            cover = LabeledCover(k, [("piece", i) for i in range(len(pieces))] + at_k)
            for u, w, o in horizontal:
                cover.glue(u, w, o)
            offsets = {}
            for i, (es, os_) in enumerate(zip(per_piece, choice)):
                for e, o in zip(es, os_):
                    cover.glue(("piece", i), e.v_minus, o)
                    offsets[e.id] = o
            if not cover.is_trivial():
                return {"K": K, "offsets": offsets}
    return None


def _case_p_vanishes(t, members, L, counter):
    edges = _down_edges(t, set(members), L)
    exps = _first_vanishing(_orbits([t.root_minus(e) for e in edges], t.k), t.k, counter)
    if exps is not None:
        return {"edges": [e.id for e in edges], "exponents": list(exps)}
    return None


def _judge(t, L, members, counter, all_cases: bool) -> InstanceVerdict:
    checks = [
        ("i", lambda: _case_marked_pole(t, members)),
        ("ii", lambda: _case_not_full_power(t, members)),
        ("iii", lambda: _case_horizontal_mismatch(t, members)),
        ("iv", lambda: _case_criss_cross(t, members, counter)),
        ("v", lambda: _case_p_vanishes(t, members, L, counter)),
    ]
    first = None
    satisfied = [] if all_cases else None
    for name, run in checks:
        # cases iii and iv presuppose every vertex of Y is a full k-th power
        if name in ("iii", "iv") and _case_not_full_power(t, members):
            continue
        try:
            witness = run()
        except BudgetExceeded:
            if first is None and not all_cases:
                return InstanceVerdict(L, members, "indeterminate")
            continue
        if witness is not None:
            if first is None:
                first = (name, witness)
            if not all_cases:
                break
            satisfied.append(name)
    if first is None:
        return InstanceVerdict(L, members, "violated", None, satisfied)
    return InstanceVerdict(L, members, first[0], first[1], satisfied)


def check_condition_4(t: TwistedKDifferential, budget: Optional[int] = None, all_cases: bool = False,
                      validated: bool = False) -> GRCReport:
    """Direct global k-residue condition, one verdict per (level, component above it).

    With ``all_cases`` every case is evaluated and recorded, not only the first.
    Pass ``validated=True`` to skip re-validating an instance already known to be valid.
    """
    if not validated:
        _require_valid(t)
    counter = _Counter(budget)
    report = GRCReport()
    for L, members in _levels_and_components(t):
        report.instances.append(_judge(t, L, members, counter, all_cases))
    return report


def check_4ab(t: TwistedKDifferential, validated: bool = False) -> GRCReport:
    """Global residue condition for twisted abelian differentials (k = 1)."""
    if t.k != 1:
        raise ValueError(f"check_4ab needs k = 1, got k = {t.k}")
    if not validated:
        _require_valid(t)
    report = GRCReport()
    for L, members in _levels_and_components(t):
        pole = _case_marked_pole(t, members)
        if pole is not None:
            report.instances.append(InstanceVerdict(L, members, "i", pole))
            continue
        edges = _down_edges(t, set(members), L)
        total = CycNum.zero(t.working_order)
        for e in edges:
            total = total + t.root_minus(e)
        if total.is_zero():
            report.instances.append(InstanceVerdict(L, members, "v", {"edges": [e.id for e in edges]}))
        else:
            report.instances.append(InstanceVerdict(L, members, "violated"))
    return report


# -- condition (4-hat): search over normalized covers -------------------------------

class _ZoneConstraint:
    """Residue condition of one full-power, pole-free component above a level."""

    def __init__(self, t: TwistedKDifferential, L: int, members: list, position: dict):
        g = t.graph
        self.level = L
        self.members = members
        inside = set(members)
        self.internal = []  # (upper, lower, edge id or None, forced offset)
        for e in g.edges:
            if e.v_plus in inside and e.v_minus in inside:
                if g.is_horizontal(e):
                    self.internal.append((e.v_plus, e.v_minus, None, forced_offset(t, e)))
                else:
                    self.internal.append((e.v_plus, e.v_minus, e.id, None))
        self.down = _down_edges(t, inside, L)
        self.orbits = _orbits([t.root_minus(e) for e in self.down], t.k)
        used = [position[eid] for _, _, eid, _ in self.internal if eid is not None]
        used += [position[e.id] for e in self.down]
        self.depth = max(used, default=-1)

    def passes(self, k: int, offsets: dict) -> bool:
        cover = LabeledCover(k, self.members)
        for u, w, eid, forced in self.internal:
            cover.glue(u, w, forced if eid is None else offsets[eid])
        if not cover.is_trivial():
            return True
        # k components: copy c of the whole zone carries zeta^c times this sum
        total = None
        for e, row in zip(self.down, self.orbits):
            _, p = cover.find(e.v_plus)
            vec = row[(offsets[e.id] - p) % k]
            total = vec if total is None else _add(total, vec)
        return total is None or not any(total)


def _constraints(t: TwistedKDifferential, order: list) -> list[_ZoneConstraint]:
    position = {eid: i for i, eid in enumerate(order)}
    return [_ZoneConstraint(t, L, members, position) for L, members in relevant_zones(t)]


def cover_offsets_pass(t: TwistedKDifferential, offsets: dict) -> bool:
    """Whether the normalized cover given by ``offsets`` satisfies every abelian residue condition."""
    order = enumerated_edges(t)
    return all(c.passes(t.k, offsets) for c in _constraints(t, order))


def check_condition_4hat(t: TwistedKDifferential, budget: Optional[int] = None,
                         validated: bool = False) -> CoverVerdict:
    """Search normalized covers for one satisfying the abelian global residue condition.

    The search is a depth-first walk over offsets in the lexicographic order
    of :func:`kdiff.cover.enumerated_edges`; each component's condition is
    tested as soon as all of its offsets are fixed.  The first assignment
    found equals the first one a plain product enumeration would find.
    """
    if not validated:
        _require_valid(t)
    k = t.k
    order = enumerated_edges(t)
    constraints = _constraints(t, order)
    by_depth: dict = {}
    for c in constraints:
        by_depth.setdefault(c.depth, []).append(c)
    offsets: dict = {}
    if not all(c.passes(k, offsets) for c in by_depth.get(-1, [])):
        return CoverVerdict(False, None)
    counter = _Counter(budget)

    def search(i: int) -> bool:
        if i == len(order):
            return True
        for o in range(k):
            counter.spend()
            offsets[order[i]] = o
            if all(c.passes(k, offsets) for c in by_depth.get(i, [])) and search(i + 1):
                return True
        del offsets[order[i]]
        return False

    try:
        found = search(0)
    except BudgetExceeded:
        return CoverVerdict(None, None)
    if not found:
        return CoverVerdict(False, None)
    return CoverVerdict(True, {eid: offsets[eid] for eid in order})


# -- witness re-verification ----------------------------------------------------

def verify_instance(t: TwistedKDifferential, verdict: InstanceVerdict) -> bool:
    """Re-check a satisfied verdict of :func:`check_condition_4` from its witness alone."""
    g, k = t.graph, t.k
    members = verdict.component_vertices
    w = verdict.witness
    if verdict.case == "i":
        return w["vertex"] in members and t.has_marked_pole(w["vertex"])
    if verdict.case == "ii":
        return w["vertex"] in members and not t.is_full_power(w["vertex"])
    if verdict.case == "iii":
        cover = LabeledCover(k, w["vertices"])
        inside = set(w["vertices"])
        for e in g.horizontal_edges():
            if e.v_plus in inside and e.v_minus in inside:
                cover.glue(e.v_plus, e.v_minus, forced_offset(t, e))
        return cover.component_count() == w["components"] < k
    if verdict.case == "iv":
        K, offsets = w["K"], w["offsets"]
        upper = [v for v in members if g.level(v) > K]
        at_k = [v for v in members if g.level(v) == K]
        edges = [e for e in g.vertical_edges() if e.v_minus in at_k and e.v_plus in members]
        if not edges or {e.id for e in edges} != set(offsets):
            return False
        pieces = g.connected_components(g.induced(upper))
        cover = LabeledCover(k, [("piece", i) for i in range(len(pieces))] + at_k)
        for e in g.horizontal_edges():
            if e.v_plus in at_k and e.v_minus in at_k:
                cover.glue(e.v_plus, e.v_minus, forced_offset(t, e))
        for i, piece in enumerate(pieces):
            total = CycNum.zero(t.working_order)
            for e in edges:
                if e.v_plus in piece.vertices:
                    total = total + t.root_minus(e) * t.zeta(offsets[e.id])
                    cover.glue(("piece", i), e.v_minus, offsets[e.id])
            if not total.is_zero():
                return False
        return not cover.is_trivial()
    if verdict.case == "v":
        edges = _down_edges(t, set(members), verdict.level)
        if [e.id for e in edges] != w["edges"]:
            return False
        total = CycNum.zero(t.working_order)
        for e, j in zip(edges, w["exponents"]):
            total = total + t.root_minus(e) * t.zeta(j)
        return total.is_zero()
    return False
