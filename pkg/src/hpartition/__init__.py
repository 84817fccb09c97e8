"""H-partition toolkit: decide, verify, generate and emit.

Public surface re-exported here; see README for the CLI.
"""

from .analysis import (
    classify,
    is_conflicting,
    is_non_maximal,
    isolated_labels,
    n_dot,
    n_full,
    twin_classes,
)
from .graphs import (
    LABELS,
    EdgeKind,
    Graph,
    ModelGraph,
    ParseError,
    Partition,
    Strategy,
    is_h_isomorphic,
    parse_graph,
    parse_model,
    serialize_graph,
    serialize_model,
    verify_partition,
)
from .oracle import OracleCapExceeded, oracle_possible_sets, oracle_solve
from .solver import (
    Decision,
    Fixpoint,
    PartialLabeling,
    PropagationAudit,
    Rejected,
    certificate,
    finish_generic,
    finish_pairlock,
    finish_twin,
    has_h_isomorphic_base,
    impossible_labels,
    propagate,
    solve,
    solve_isolated,
)

__all__ = [
    "LABELS",
    "EdgeKind",
    "Graph",
    "ModelGraph",
    "ParseError",
    "Partition",
    "Strategy",
    "Decision",
    "Fixpoint",
    "PartialLabeling",
    "PropagationAudit",
    "Rejected",
    "OracleCapExceeded",
    "certificate",
    "classify",
    "finish_generic",
    "finish_pairlock",
    "finish_twin",
    "has_h_isomorphic_base",
    "impossible_labels",
    "is_conflicting",
    "is_h_isomorphic",
    "is_non_maximal",
    "isolated_labels",
    "n_dot",
    "n_full",
    "oracle_possible_sets",
    "oracle_solve",
    "parse_graph",
    "parse_model",
    "propagate",
    "serialize_graph",
    "serialize_model",
    "solve",
    "solve_isolated",
    "twin_classes",
    "verify_partition",
]

__version__ = "0.1.0"
