"""Double domination on maximal outerplanar graphs.

Implements the constructive proof that every maximal outerplanar graph with
n >= 4 vertices and k bad vertices has a double dominating set of size at
most (n + k)/2, together with exact solvers, certified traces, generators
and a stress harness around the reduction engine.
"""

from .constructive import (
    BASE_MAX_N,
    CertifiedResult,
    ReductionRule,
    ReductionTrace,
    TraceStep,
    apply_rule,
    base_case_solve,
    certify,
    load_rules,
    solve_bound,
)
from .domination import (
    CSV_COLUMNS,
    DEFAULT_EXACT_LIMIT,
    BadVertexReport,
    BoundReport,
    DominationMode,
    bad_vertices,
    bound_report,
    coverage_counts,
    csv_header,
    exact_limit,
    exact_min_double_dom,
    exact_min_two_dom,
    is_double_dominating,
    is_two_dominating,
    to_csv_row,
)
from .dual_tree import (
    EAR,
    INTERNAL,
    SIDE,
    BranchShape,
    PathTree,
    Deviation,
    DualTree,
    ReductionSite,
    Triangle,
    build_dual_tree,
    dual_to_dot,
    find_reduction_site,
    match_branch_shape,
    nearest_degree3,
)
from .errors import (
    BadParameter,
    BoundViolated,
    CertificationFailed,
    CrossingChords,
    DeviationPresent,
    DuplicateOrDegenerateChord,
    EmptyOrDisconnected,
    Infeasible,
    MopError,
    NoDegree3Node,
    NoRuleApplies,
    NotALeaf,
    NotMaximalOuterplanar,
    OutOfRange,
    PreconditionTooSmall,
    ResultNotMaximalOuterplanar,
    RuleMismatch,
    TooLarge,
    TooSmall,
    UnknownFixture,
    VertexOutOfRange,
    WrongChordCount,
)
from .generators import (
    MAX_ENUMERATE_N,
    catalan,
    enumerate_all,
    fan,
    fixture,
    fixture_names,
    random_mop,
    snake,
)
from .graph_core import (
    MopGraph,
    build_mop,
    canonical_form,
    from_json,
    neighbors,
    parse_edge_list,
    recognize_mop,
    reduce_graph,
    same_up_to_relabelling,
    to_dot,
    to_edge_list,
    to_json,
)

__version__ = "0.1.0"

__all__ = [
    "BASE_MAX_N",
    "CSV_COLUMNS",
    "DEFAULT_EXACT_LIMIT",
    "EAR",
    "INTERNAL",
    "SIDE",
    "MAX_ENUMERATE_N",
    "BadParameter",
    "BadVertexReport",
    "BoundReport",
    "BoundViolated",
    "BranchShape",
    "CertificationFailed",
    "CertifiedResult",
    "CrossingChords",
    "Deviation",
    "DeviationPresent",
    "DominationMode",
    "DualTree",
    "DuplicateOrDegenerateChord",
    "EmptyOrDisconnected",
    "Infeasible",
    "MopError",
    "MopGraph",
    "NoDegree3Node",
    "NoRuleApplies",
    "NotALeaf",
    "NotMaximalOuterplanar",
    "OutOfRange",
    "PathTree",
    "PreconditionTooSmall",
    "ReductionRule",
    "ReductionSite",
    "ReductionTrace",
    "ResultNotMaximalOuterplanar",
    "RuleMismatch",
    "TooLarge",
    "TooSmall",
    "TraceStep",
    "Triangle",
    "UnknownFixture",
    "VertexOutOfRange",
    "WrongChordCount",
    "apply_rule",
    "bad_vertices",
    "base_case_solve",
    "bound_report",
    "build_dual_tree",
    "build_mop",
    "canonical_form",
    "catalan",
    "certify",
    "coverage_counts",
    "csv_header",
    "dual_to_dot",
    "enumerate_all",
    "exact_limit",
    "exact_min_double_dom",
    "exact_min_two_dom",
    "fan",
    "find_reduction_site",
    "fixture",
    "fixture_names",
    "from_json",
    "is_double_dominating",
    "is_two_dominating",
    "load_rules",
    "match_branch_shape",
    "nearest_degree3",
    "neighbors",
    "parse_edge_list",
    "random_mop",
    "recognize_mop",
    "reduce_graph",
    "same_up_to_relabelling",
    "snake",
    "solve_bound",
    "to_csv_row",
    "to_dot",
    "to_edge_list",
    "to_json",
]
