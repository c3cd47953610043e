"""Atoms, coatoms, and the extremal coatom/atom gap of Bruhat intervals.

The package computes, for intervals [u, v] of the symmetric group in
Bruhat order, the transpositions labeling atom and coatom covers, the
graphs those labels span on {1..n}, and the extremal statistics of the
coatom-minus-atom gap, whose maximum over S_n is floor(n^2/4) - n + 1.
An enumeration engine verifies the extremal statements exhaustively for
small n; its hot kernels run compiled when the optional extension is
built (``bruhatkit._kernels.BACKEND`` says which backend is live).
"""

from ._kernels import BACKEND
from .extremal import (
    f,
    f_delta,
    floor_lemma_holds,
    gap_bound_report,
    is_opt_top,
    max_coatoms,
    opt_top_permutations,
    theorem_a_value,
)
from .graphs import (
    LabeledGraph,
    SetPartition,
    atom_graph,
    check_components_equal,
    coatom_graph,
    component_sizes,
    components,
    to_dot,
)
from .order import (
    CoverLabelSet,
    Interval,
    atom_count,
    atom_labels,
    bruhat_leq,
    bruhat_leq_oracle,
    coatom_count,
    coatom_labels,
    is_cover,
)
from .enumerator import (
    OrderCache,
    ScanResult,
    build_order_cache,
    load_cache,
    save_cache,
    scan_max_gap,
)
from .perm import (
    MAX_DEGREE,
    Permutation,
    Transposition,
    all_transpositions,
    compose,
    enumerate_sn,
    format_permutation,
    identity,
    inverse,
    length,
    longest_element,
    parse_permutation,
    rank,
    right_mul,
    unrank,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "MAX_DEGREE",
    "CoverLabelSet",
    "Interval",
    "LabeledGraph",
    "OrderCache",
    "Permutation",
    "ScanResult",
    "SetPartition",
    "Transposition",
    "all_transpositions",
    "atom_count",
    "atom_graph",
    "atom_labels",
    "bruhat_leq",
    "bruhat_leq_oracle",
    "build_order_cache",
    "check_components_equal",
    "coatom_count",
    "coatom_graph",
    "coatom_labels",
    "compose",
    "component_sizes",
    "components",
    "enumerate_sn",
    "f",
    "f_delta",
    "floor_lemma_holds",
    "format_permutation",
    "gap_bound_report",
    "identity",
    "inverse",
    "is_cover",
    "is_opt_top",
    "length",
    "load_cache",
    "longest_element",
    "max_coatoms",
    "opt_top_permutations",
    "parse_permutation",
    "rank",
    "right_mul",
    "save_cache",
    "scan_max_gap",
    "theorem_a_value",
    "to_dot",
    "unrank",
]
