"""Exact counting sequences for closed lambda-terms and the BCI(p)/BCK(p) classes."""

from .basic import (
    alpha,
    alpha_multinomial,
    alpha_series,
    catalan,
    motzkin,
    motzkin_bivar,
    motzkin_convolution,
    motzkin_leaf_bounded,
    motzkin_list,
    q_poly,
    q_poly_closed,
    q_poly_sum,
    zeta,
    zeta_lagrange,
    zeta_series,
)
from .bci import (
    bci_counts,
    bci_counts_upto_size,
    bci_index,
    bci_size,
    delta_apply,
    linearized_counts,
    linearized_list,
    phi_list,
)
from .bck import bck_counts, bck_counts_bivar, bck_counts_delta, bck_y_list, expansion_weight
from .closed import (
    closed_counts,
    closed_counts_debruijn,
    closed_counts_indirect,
    closed_list,
    lambda_tilde,
    tnk_table,
)
from .delta import (
    DeltaCache,
    DeltaValidationError,
    b_direct,
    b_recurrence_failures,
    delta_direct,
    delta_fast,
    delta_rows,
    delta_zeta,
    fast_path_status,
    validate_delta_fast,
)
from .table import CountTable, Family, RouteMismatch, compare_tables
from .dispatch import ROUTES, count_table, first_index
from .table import FAMILIES, PARAMETRIC
