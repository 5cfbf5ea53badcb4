"""Flag-shaped blockers of 123-avoiding permutation matrices: construction,
exhaustive verification, face ranks and minimum-blocker search."""

__version__ = "0.1.0"

from .blocker_model import (
    FlagSpec, PositionSet, cardinality, corner_forbidden_region, flag_positions,
    l_shape_positions, match_flag, parse_position_set, valid_flag_specs,
)
from .cardinality import achievable_cardinalities, audit, max_cardinality, paper_predicate
from .errors import (
    BlockerError, BudgetExhaustedError, IndexOutOfRangeError, InvalidSpecError,
    OrderMismatchError, OrderTooLargeError, PredicateRangeError,
)
from .oracle import (
    BlockerVerdict, hankel_coverage, intersection_count, is_blocker, is_minimal,
    is_minimum, is_minimum_by_certificate, once_intersecting_avoiders, private_witnesses,
)
from .perm_core import (
    Permutation, Symmetry, apply_symmetry, contains_123, enumerate_avoiders,
    hankel_label, lis_length,
)
from .polytope_rank import FaceReport, check_forbidden_corner, face_rank, rank_of_matrices
from .search_engine import (
    SearchConfig, SearchResult, conjecture_probe, enumerate_minimum_blockers, run_search,
)

