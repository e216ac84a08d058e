"""Identifiability of polytopes: is every linear map that permutes the
vertices a signed permutation?"""

from .automorphism import (
    GeneratorSet,
    OrderedPartition,
    SearchBudgetExceeded,
    TooLarge,
    automorphism_generators,
    brute_force_automorphisms,
    expand_group,
    refine_partition,
    sift_generators,
)
from .coloring import ColoredGraph, ColoringMatrix, build_colored_graph, coloring_matrix
from .identifiability import (
    AutomorphismWitness,
    IdentifiabilityReport,
    InvalidPolytope,
    brute_force_identifiability,
    check_identifiability,
    linear_map_for,
    verify_theorem_3_1,
)
from .linalg import Mat, determinant, invert, is_signed_permutation, rank, right_pseudoinverse, solve
from .permgroup import Permutation, StabilizerChain
from .polytope import (
    EmptyPolytope,
    GeneratorConfig,
    HRepresentation,
    Polytope,
    SparsityConstraint,
    UnboundedPolytope,
    check_bounded,
    enumerate_vertices,
    random_polytope_hrep,
    sample_generator_config,
    validate_polytope,
)

__version__ = "0.1.0"
