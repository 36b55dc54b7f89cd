"""Combinatorial model of killing ramification along SNC divisors.

Modules: ``snc_complex`` (dual complexes, blow-ups), ``coloring`` (making a
complex n-colorable), ``modlinalg`` (Smith normal form, congruences mod r),
``schemes`` (function schemes and the verifier), ``residue_symbols``
(formal residue calculus), ``cli``.
"""
from .coloring import ColoredComplex, check_proper, color, color_dim2, insert_vertex_step
from .modlinalg import smith_normal_form, solve_mod
from .schemes import (
    Certificate,
    Counterexample,
    enumerate_scenarios,
    local_matrix,
    remark_scheme_3,
    remark_scheme_4,
    square_scheme,
    verify,
)
from .snc_complex import SncComplex, Vertex, adjacency, blow_up, validate

__version__ = "0.1.0"
