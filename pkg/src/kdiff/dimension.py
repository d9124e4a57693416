"""Dimension counts for strata of k-differentials and spaces of twisted differentials."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Optional

from .twisted import TwistedKDifferential, type_signature

__all__ = ["stratum_dim", "twisted_dim", "ResidueCounts", "residue_counts", "DimensionReport", "dimension_report"]


def stratum_dim(g: int, n: int, k: int, is_holomorphic_abelian_power: bool) -> int:
    """Dimension of the stratum of k-differentials of genus g with n marked points.

    One more than usual when the stratum parametrises k-th powers of
    holomorphic abelian differentials.
    """
    if g < 0:
        raise ValueError(f"genus must be non-negative, got {g}")
    if n < 1:
        raise ValueError("strata without marked points are not modelled")
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    return 2 * g - 1 + n if is_holomorphic_abelian_power else 2 * g - 2 + n


def _is_ab(mu, k: int, component_kind: str) -> bool:
    if component_kind not in ("ab", "non-ab"):
        raise ValueError(f"component_kind must be 'ab' or 'non-ab', got {component_kind!r}")
    if k == 1:
        return all(m >= 0 for m in mu)
    if component_kind == "non-ab":
        return False
    if any(m % k for m in mu):
        raise ValueError("a stratum of k-th powers needs every order divisible by k")
    return all(m >= 0 for m in mu)


def twisted_dim(t: TwistedKDifferential, component_kind: str = "non-ab") -> int:
    """Expected dimension of the space of twisted differentials of this shape.

    The space is either empty or of this dimension; emptiness is not decided.
    For k = 1 the kind is read off from the signature.
    """
    sig = type_signature(t)
    ab = _is_ab(sig.mu, t.k, component_kind)
    return stratum_dim(sig.genus, sig.n, t.k, ab) - len(t.graph.horizontal_edges())


@dataclass(frozen=True)
class ResidueCounts:
    k: int
    vertices: int  # c or c_k: relevant vertices without poles
    local_maxima: int  # c_M or c_{k,M}
    lower: int  # c_L or c_{k,L}
    no_marked_poles: int  # delta_P, only meaningful for k = 1
    edges: int  # all edges for k = 1, edges with k | orders otherwise
    residue_space_dim: int
    grc_space_dim: int
    independent_conditions: int

    def to_json(self) -> dict:
        return asdict(self)


def residue_counts(t: TwistedKDifferential) -> ResidueCounts:
    """Counts of pole-free vertices, local maxima and residue-space dimensions.

    For k = 1 every vertex and edge is used and a pole is any negative
    marked order.  For k >= 2 only full-power vertices and edges whose orders
    are divisible by k count, and a pole is a marked order of at most -k.
    """
    g, k = t.graph, t.k
    if k == 1:
        relevant = list(g.vertices)
        edges = len(g.edges)
        is_pole = lambda m: m < 0
    else:
        relevant = [v for v in g.vertices if t.is_full_power(v.id)]
        edges = sum(1 for e in g.edges if e.order_plus % k == 0)
        is_pole = lambda m: m <= -k
    pole_free = [v for v in relevant if not any(is_pole(m) for m in v.marked_orders)]
    c = len(pole_free)
    c_max = sum(1 for v in pole_free if g.is_local_maximum(v.id))
    c_low = c - c_max
    if k == 1:
        delta = int(not any(m < 0 for v in g.vertices for m in v.marked_orders))
        grc_dim = edges - (c - delta)
        independent = c_max - delta
    else:
        delta = 0
        grc_dim = edges - c
        independent = c_max
    return ResidueCounts(k, c, c_max, c_low, delta, edges, edges - c_low, grc_dim, independent)


@dataclass(frozen=True)
class DimensionReport:
    stratum_dim: int
    horizontal_edges: int
    twisted_dim: int
    component_kind: str
    counts: ResidueCounts
    conditional: bool = True  # the space may be empty

    def to_json(self) -> dict:
        out = asdict(self)
        out["counts"] = self.counts.to_json()
        return out


def dimension_report(t: TwistedKDifferential, component_kind: Optional[str] = None) -> DimensionReport:
    """All dimension data of a valid instance; the kind defaults to ``"non-ab"`` for k >= 2."""
    kind = component_kind or ("ab" if t.k == 1 else "non-ab")
    sig = type_signature(t)
    ab = _is_ab(sig.mu, t.k, kind)
    h = len(t.graph.horizontal_edges())
    full = stratum_dim(sig.genus, sig.n, t.k, ab)
    return DimensionReport(full, h, full - h, kind, residue_counts(t))
