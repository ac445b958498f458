"""Chow rings of moduli of point configurations on the projective line.

Exact computations over Q: the ambient ring A = Q[X_1..X_m, Y]/(X_i^2 - Y),
stability conditions for the m-subspace quiver, tautological relations and
graded quotients, automorphisms of A, and invariants separating the two
small desingularizations for even m.
"""

from .chowalgebra import ChowElement, ambient_hilbert, chow_mul, chow_pow, graded_basis
from .exactpoly import Poly, TorusRing, divided_difference, elementary_symmetric, substitute_chow, swap_y
from .presentation import (
    QuotientRing,
    RelationPair,
    build_quotient,
    is_zero_in_quotient,
    normal_form,
    poincare_polynomial,
    relation_oracle,
    relation_R,
    relation_S,
)
from .stability import (
    Stability,
    canonical,
    forbidden,
    is_coprime,
    is_deformation,
    is_nontrivial,
    theta_pm,
)

__version__ = "0.1.0"
