"""Stochasticity parameter of quadratic residue sets, computed exactly."""
from .baseline import (
    binom_identity_check,
    s_average,
    s_average_bruteforce,
    torus_gap_tail,
    torus_gap_tail_mc,
)
from .exact_poly import (
    alpha_coeffs,
    beta_coeffs,
    fa_derivative_eval,
    fa_eval,
    ga_series,
    ga_tail_bound,
    p_polynomials,
)
from .harness import (
    aryan_ratio,
    compare_table,
    kr_tail,
    omega_membership,
    s_baseline_expansion_check,
    theorem13_check,
    theorem13_convergence,
    theorem15_diagnostic,
)
from .residues import (
    ResidueSet,
    gap_histogram,
    legendre_product_sum,
    max_gap,
    nonresidue_run_count,
    quadratic_residues,
    r_count,
    rn_count,
    stochasticity,
)

__version__ = "0.1.0"
