"""Deterministic polynomial identity testing over prime fields for read-once
oblivious ABPs, with black-box reductions from set-multilinear ABPs,
non-commutative ABPs, and (semi-)diagonal depth-4 circuits."""

from ._backend import BACKEND
from .diagonal import (
    DiagonalCircuit,
    Factor,
    Term,
    blackbox_pit_diagonal,
    diagonal_to_roabp,
    eval_diagonal,
    parse_diag,
)
from .field import (
    Field,
    LagrangeBasis,
    UniPoly,
    field_new,
    find_element_of_order,
    lagrange_basis,
    multiplicative_order,
)
from .generator import (
    GenParams,
    HittingSet,
    gen_abp,
    gen_direct,
    gen_eval_all,
    gen_params_new,
    gen_recursive,
    hitting_set,
)
from .linalg import SpanBasis, count_bad_alphas, extractor_points, merged_span_evals, span_equal
from .noncomm import (
    NcAbp,
    NcPoly,
    blackbox_pit_ncabp,
    homogeneous_part_abp,
    nc_abp_to_sm_abp,
    nc_hitting_set,
    parse_ncabp,
    phi,
    staircase_eval,
)
from .pit import (
    PitVerdict,
    blackbox_pit_roabp,
    bruteforce_pit,
    expand_dense,
    find_witness,
    schwartz_zippel,
    whitebox_pit_roabp,
)
from .roabp import (
    GraphAbp,
    Roabp,
    SmAbp,
    coeff_matrices,
    graph_to_matrix_form,
    matrix_to_graph_form,
    pad_to_power_of_two,
    parse_roabp,
    parse_smabp,
    sm_to_roabp,
)

__version__ = "0.1.0"
