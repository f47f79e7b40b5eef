"""Exact rational arithmetic: polynomials, resultants, composed products, linear systems."""

from fractions import Fraction as ExactScalar

from .linalg import (
    ExactMatrix,
    InconsistentSystemError,
    LinearSolution,
    confluent_vandermonde,
    determinant,
    inverse,
    rank,
    solve_general,
)
from .poly import (
    DegreeLimitError,
    NEG_INF,
    UniPoly,
    as_fraction,
    composed_power,
    composed_product,
    discriminant,
    formal_monomial_poly,
    from_power_sums,
    interpolate,
    is_squarefree,
    poly_gcd,
    power_sums,
    resultant,
    squarefree_decomposition,
    squarefree_part,
)

__all__ = [
    "ExactScalar",
    "ExactMatrix",
    "InconsistentSystemError",
    "LinearSolution",
    "confluent_vandermonde",
    "determinant",
    "inverse",
    "rank",
    "solve_general",
    "DegreeLimitError",
    "NEG_INF",
    "UniPoly",
    "as_fraction",
    "composed_power",
    "composed_product",
    "discriminant",
    "formal_monomial_poly",
    "from_power_sums",
    "interpolate",
    "is_squarefree",
    "poly_gcd",
    "power_sums",
    "resultant",
    "squarefree_decomposition",
    "squarefree_part",
]
