"""Tate resolutions of line bundles on Segre embeddings of P^a x P^b, in exact arithmetic."""

from .cohomology import classify, cohom_space, p_bounds, regularity, strand_range, tate_term
from .differentials import (
    FormTuple,
    assemble_differential,
    diagonal_for,
    jacobian_component_core,
    sylvester_delta,
    sylvester_delta_prime,
    sylvester_map_core,
    toric_jacobian,
    tree_jacobian,
)
from .linalg import RatMatrix, rank_exact
from .poly import BiPoly, QuadPoly, tilde
from .verify import check_duality, check_identities, check_regularity, check_strand, check_tree_lemma

__all__ = [
    "BiPoly", "FormTuple", "QuadPoly", "RatMatrix",
    "assemble_differential", "check_duality", "check_identities", "check_regularity",
    "check_strand", "check_tree_lemma", "classify", "cohom_space", "diagonal_for",
    "jacobian_component_core", "p_bounds", "rank_exact", "regularity", "strand_range",
    "sylvester_delta", "sylvester_delta_prime", "sylvester_map_core", "tate_term",
    "tilde", "toric_jacobian", "tree_jacobian",
]
