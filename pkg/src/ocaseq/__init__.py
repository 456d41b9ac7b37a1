"""Pseudorandom sequences from orthogonal cellular automata.

The pieces: GF(2) polynomial and bit-matrix arithmetic including
Sylvester matrices and matrix orders (gf2), local rules and the
no-boundary global map (ca), generated Latin squares and orthogonality
(squares), the paired-rule dynamical system with cycle decompositions
and keystreams (dynsys), exhaustive searches over rule pairs
(enumeration), and figure rendering (plots).  The ocaseq command wraps
all of it.
"""

from .ca import (
    AFFINE,
    LINEAR,
    NONLINEAR,
    Configuration,
    LocalRule,
    bipermutive_rules,
    classify_linearity,
    eval_rule,
    is_bipermutive,
    nbca_apply,
    poly_to_rule,
    rule_to_poly,
)
from .dynsys import (
    CycleDecomposition,
    SystemState,
    cycle_decomposition,
    h_step,
    is_oca_pair,
    keystream,
    pack_bits,
    period_of_state,
)
from .enumeration import (
    LinearEnumReport,
    SearchReport,
    enumerate_linear_pairs,
    enumerate_maximal_linear,
    partition_work,
    rule_polynomials,
    search_bipermutive,
)
from .gf2 import (
    BinPoly,
    GF2Matrix,
    factorize,
    gl_order,
    is_invertible,
    mat_mul,
    mat_pow,
    mat_vec,
    matrix_order,
    poly_degree,
    poly_gcd,
    poly_hex,
    poly_parse,
    sylvester_matrix,
)
from .squares import LatinSquare, are_orthogonal, is_latin, is_multipermutation, square_from_rule

__version__ = "0.1.0"
