"""Exact combinatorics of twisted k-differentials on level graphs.

Decides whether a twisted k-differential lies in the boundary of its
stratum, by a direct global k-residue test and by a search over
normalized cyclic covers, and provides the accompanying dimension counts.
"""

from .cover import (
    LabeledCover,
    LocalCoverData,
    enumerate_normalized_covers,
    forced_horizontal_offsets,
    lifted_level_graph,
    local_cover,
)
from .cyclotomic import CycNum, arith, cyclotomic_polynomial, parse_cycnum, root_of_unity
from .dimension import dimension_report, residue_counts, stratum_dim, twisted_dim
from .grc import (
    BudgetExceeded,
    GRCReport,
    check_4ab,
    check_condition_4,
    check_condition_4hat,
    p_nk_evaluate,
    p_nk_vanishes,
)
from .levelgraph import Edge, LevelGraph, MarkedPoint, Vertex
from .serialize import instance_from_json, instance_to_json, load_instance
from .twisted import TwistedKDifferential, ValidationReport, type_signature, validate

__version__ = "0.1.0"

__all__ = [
    "CycNum", "arith", "cyclotomic_polynomial", "parse_cycnum", "root_of_unity",
    "Edge", "LevelGraph", "MarkedPoint", "Vertex",
    "TwistedKDifferential", "ValidationReport", "type_signature", "validate",
    "LabeledCover", "LocalCoverData", "enumerate_normalized_covers", "forced_horizontal_offsets",
    "lifted_level_graph", "local_cover",
    "BudgetExceeded", "GRCReport", "check_4ab", "check_condition_4", "check_condition_4hat",
    "p_nk_evaluate", "p_nk_vanishes",
    "dimension_report", "residue_counts", "stratum_dim", "twisted_dim",
    "instance_from_json", "instance_to_json", "load_instance",
]
