"""JSON reading and writing of twisted k-differentials.

Layout::

    {"k": 2,
     "vertices": [{"id": 1, "genus": 1, "level": 0, "power_divisor": 2,
                   "marked": [{"order": 4, "residue_root": "1"}]}],
     "edges": [{"id": 1, "v_plus": 1, "v_minus": 2, "order_plus": 0,
                "order_minus": -4, "root_plus": null, "root_minus": "z4"}]}

Roots are anything :meth:`CycNum.from_json` accepts.  A marked point may
be given as a bare integer order.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

from .cyclotomic import CycNum
from .levelgraph import Edge, LevelGraph, MarkedPoint, Vertex
from .twisted import TwistedKDifferential

__all__ = ["InstanceFormatError", "instance_to_json", "instance_from_json", "load_instance", "dump_instance", "dumps"]

_TOP = {"k", "vertices", "edges"}
_VERTEX = {"id", "genus", "level", "marked", "power_divisor"}
_MARKED = {"order", "residue_root"}
_EDGE = {"id", "v_plus", "v_minus", "order_plus", "order_minus", "root_plus", "root_minus"}


class InstanceFormatError(ValueError):
    """The input is not a well-formed instance file."""


def _root_to_json(r: Optional[CycNum]):
    return None if r is None else r.to_json()


def instance_to_json(t: TwistedKDifferential) -> dict:
    vertices = []
    for v in t.graph.vertices:
        vertices.append({
            "id": v.id,
            "genus": v.genus,
            "level": v.level,
            "power_divisor": v.power_divisor,
            "marked": [{"order": p.order, "residue_root": _root_to_json(p.residue_root)} for p in v.marked],
        })
    edges = []
    for e in t.graph.edges:
        edges.append({
            "id": e.id, "v_plus": e.v_plus, "v_minus": e.v_minus,
            "order_plus": e.order_plus, "order_minus": e.order_minus,
            "root_plus": _root_to_json(e.root_plus), "root_minus": _root_to_json(e.root_minus),
        })
    return {"k": t.k, "vertices": vertices, "edges": edges}


def dumps(t: TwistedKDifferential) -> str:
    return json.dumps(instance_to_json(t), indent=2, sort_keys=True)


def dump_instance(t: TwistedKDifferential, path) -> None:
    Path(path).write_text(dumps(t) + "\n")


class _Reader:
    def __init__(self, strict: bool):
        self.strict = strict
        self.warnings: list[str] = []

    def fields(self, obj, allowed: set, required: set, where: str) -> dict:
        if not isinstance(obj, dict):
            raise InstanceFormatError(f"{where}: expected an object, got {type(obj).__name__}")
        missing = required - set(obj)
        if missing:
            raise InstanceFormatError(f"{where}: missing field(s) {sorted(missing)}")
        extra = set(obj) - allowed
        if extra:
            msg = f"{where}: unknown field(s) {sorted(extra)}"
            if self.strict:
                raise InstanceFormatError(msg)
            self.warnings.append(msg)
        return obj

    @staticmethod
    def integer(value, where: str) -> int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise InstanceFormatError(f"{where}: expected an integer, got {value!r}")
        return value

    @staticmethod
    def ident(value, where: str):
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            raise InstanceFormatError(f"{where}: ids must be integers or strings, got {value!r}")
        return value

    @staticmethod
    def root(value, where: str) -> Optional[CycNum]:
        if value is None:
            return None
        try:
            return CycNum.from_json(value)
        except (TypeError, ValueError) as exc:
            raise InstanceFormatError(f"{where}: {exc}") from None

    def marked(self, obj, where: str) -> MarkedPoint:
        if isinstance(obj, int) and not isinstance(obj, bool):
            return MarkedPoint(obj)
        self.fields(obj, _MARKED, {"order"}, where)
        return MarkedPoint(self.integer(obj["order"], f"{where}.order"),
                           self.root(obj.get("residue_root"), f"{where}.residue_root"))

    def vertex(self, obj, where: str) -> Vertex:
        self.fields(obj, _VERTEX, {"id", "genus", "level"}, where)
        marked = obj.get("marked", [])
        if not isinstance(marked, list):
            raise InstanceFormatError(f"{where}.marked: expected a list")
        d = obj.get("power_divisor")
        return Vertex(
            self.ident(obj["id"], f"{where}.id"),
            self.integer(obj["genus"], f"{where}.genus"),
            self.integer(obj["level"], f"{where}.level"),
            tuple(self.marked(m, f"{where}.marked[{i}]") for i, m in enumerate(marked)),
            None if d is None else self.integer(d, f"{where}.power_divisor"),
        )

    def edge(self, obj, where: str) -> Edge:
        self.fields(obj, _EDGE, {"id", "v_plus", "v_minus", "order_plus", "order_minus"}, where)
        return Edge(
            self.ident(obj["id"], f"{where}.id"),
            self.ident(obj["v_plus"], f"{where}.v_plus"),
            self.ident(obj["v_minus"], f"{where}.v_minus"),
            self.integer(obj["order_plus"], f"{where}.order_plus"),
            self.integer(obj["order_minus"], f"{where}.order_minus"),
            self.root(obj.get("root_plus"), f"{where}.root_plus"),
            self.root(obj.get("root_minus"), f"{where}.root_minus"),
        )


def instance_from_json(data, strict: bool = True) -> tuple[TwistedKDifferential, list[str]]:
    """Build an instance from parsed JSON; returns it with any lenient-mode warnings.

    Unknown fields raise in strict mode and are collected as warnings otherwise.
    """
    reader = _Reader(strict)
    reader.fields(data, _TOP, {"k", "vertices"}, "instance")
    k = reader.integer(data["k"], "k")
    if not isinstance(data["vertices"], list) or not isinstance(data.get("edges", []), list):
        raise InstanceFormatError("vertices and edges must be lists")
    vertices = [reader.vertex(v, f"vertices[{i}]") for i, v in enumerate(data["vertices"])]
    edges = [reader.edge(e, f"edges[{i}]") for i, e in enumerate(data.get("edges", []))]
    return TwistedKDifferential(k, LevelGraph(vertices, edges)), reader.warnings


def load_instance(path, strict: bool = True) -> tuple[TwistedKDifferential, list[str]]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return instance_from_json(data, strict)
