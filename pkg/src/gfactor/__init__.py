"""Approximate and exact generalized matching: f-factors and f-edge covers
with verifiable dual certificates."""

from .blossoms import (BlossomFamily, alternating_walk, i_set,
                       is_mature_cover, is_mature_factor)
from .certificates import (BoundReport, DualCertificate,
                           check_cover_slackness, check_factor_slackness,
                           check_invariant_scaled, check_invariant_uniform,
                           snapshot_duals, yz_cover, yz_factor)
from .edmonds import (IterationState, compute_search_set, is_eligible_scaled,
                      is_eligible_uniform, run_iteration)
from .io_cli import (GeneratorConfig, GraphFormatError, generate,
                     parse_certificate, parse_instance, serialize_certificate,
                     serialize_instance)
from .multigraph import (DeficiencyView, EdgeSubset, MultiGraphInstance,
                         StructuralError, complement, complement_demands,
                         validate_cover, validate_factor)
from .oracle import (enumerate_augmenting_walks, exact_max_weight_factor,
                     exact_min_weight_cover, has_augmenting_walk)
from .solvers import (Solution, SolveConfig, solve, solve_1_cover_via_matching,
                      solve_linear, solve_max_card_factor, solve_min_card_cover,
                      solve_min_weight_cover, solve_scaling, solve_small_weight)
from .walks import WalkResult, find_augmenting_walks

__version__ = "0.1.0"

__all__ = [
    "BlossomFamily", "BoundReport", "DeficiencyView", "DualCertificate",
    "EdgeSubset", "GeneratorConfig", "GraphFormatError", "IterationState",
    "MultiGraphInstance", "Solution", "SolveConfig", "StructuralError",
    "WalkResult", "alternating_walk", "check_cover_slackness",
    "check_factor_slackness", "check_invariant_scaled",
    "check_invariant_uniform", "complement", "complement_demands",
    "compute_search_set", "enumerate_augmenting_walks",
    "exact_max_weight_factor", "exact_min_weight_cover",
    "find_augmenting_walks", "generate", "has_augmenting_walk", "i_set",
    "is_eligible_scaled", "is_eligible_uniform", "is_mature_cover",
    "is_mature_factor", "parse_certificate", "parse_instance", "run_iteration",
    "serialize_certificate", "serialize_instance", "snapshot_duals", "solve",
    "solve_1_cover_via_matching", "solve_linear", "solve_max_card_factor",
    "solve_min_card_cover", "solve_min_weight_cover", "solve_scaling",
    "solve_small_weight", "validate_cover", "validate_factor", "yz_cover",
    "yz_factor",
]
