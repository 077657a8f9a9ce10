"""Combinatorics of virtual strings: homotopy, invariants, Gauss words, cobracket and skein polynomial."""

from .core import (
    ArrowDiagram,
    Bipartition,
    SizeLimitError,
    StringError,
    TRIVIAL,
    VirtualString,
    canonical_code,
    canonical_string,
    cable,
    homeomorphic,
    inverse,
    lattice_string,
    opposite,
    parse_diagram,
    parse_string,
    permutation_string,
    product,
    render_diagram,
    render_string,
)
from .invariants import (
    UPolynomial,
    based_matrix,
    genus,
    primitive_matrix,
    realize_u_polynomial,
    slice_obstructions,
    u_polynomial,
)
from .matrices import BasedMatrix, is_primitive, isomorphic, primitive_reduce, sigma_genus
from .moves import Budget, apply_move, applicable_moves, class_key, homotopic_heuristic, normalize
from .gauss import compatible_bipartitions, realizable, string_from_word
from .cobracket import cobracket, co_jacobi_check, dual_bracket
from .skein import eta, nabla, parse_forest, zeta

__version__ = "0.1.0"
