"""Elimination distance to first-order properties on small graphs.

Exact solvers for the three elimination-distance variants, a branching
algorithm for unbreakable graphs, MSOL expressions of the bounds, and the
set-cover reduction used for hardness fixtures.
"""

from .distance import (
    DistanceResult,
    ExactSolver,
    SizeCapError,
    Variant,
    ed_conn,
    ed_conn_via_sets,
    ed_depth,
    ed_prop,
    ed_prop_via_sets,
    validate_witness,
)
from .elimination import EliminationRepresentation, depth, validate_representation
from .formula import Formula, FormulaError, parse_formula, prefix_class, render_formula
from .fpt import FptResult, NotUnbreakableError, solve_unbreakable
from .graph import Graph, is_unbreakable, torso, tree_depth
from .hardness import SetCoverInstance, hard_formula, reduction_equivalence_check, setcover_to_graph
from .modelcheck import models
from .msol import emit_msol, eval_msol, render_msol
from .separation import SeparatingFamily, build_family, verify_family

__version__ = "0.1.0"

__all__ = [
    "DistanceResult",
    "EliminationRepresentation",
    "ExactSolver",
    "Formula",
    "FormulaError",
    "FptResult",
    "Graph",
    "NotUnbreakableError",
    "SeparatingFamily",
    "SetCoverInstance",
    "SizeCapError",
    "Variant",
    "build_family",
    "depth",
    "ed_conn",
    "ed_conn_via_sets",
    "ed_depth",
    "ed_prop",
    "ed_prop_via_sets",
    "emit_msol",
    "eval_msol",
    "hard_formula",
    "is_unbreakable",
    "models",
    "parse_formula",
    "prefix_class",
    "reduction_equivalence_check",
    "render_formula",
    "render_msol",
    "setcover_to_graph",
    "solve_unbreakable",
    "torso",
    "tree_depth",
    "validate_representation",
    "validate_witness",
    "verify_family",
]
