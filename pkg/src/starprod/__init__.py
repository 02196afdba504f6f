"""starprod: star-products of linear codes over GF(q).

Exact finite-field linear algebra, closed-form probability bounds on
the dimension of products of random codes, the exact rank-orbit walk of
sums of random rank <= 1 matrices, reproducible Monte Carlo campaigns,
and a square-code distinguisher.
"""

from .gf import GF, field_new, field_of_order
from .linalg import (
    MatrixGF,
    bilinear_form_eval,
    outer_product,
    projective_reps,
    row_space_equal,
    unvec,
    vec,
)
from .codes import (
    LinearCode,
    all_ones_code,
    dmax,
    dmin,
    dual,
    general_position_profile,
    rs_code,
    simplex_code,
    star_power,
    star_product,
    tensor_code,
    weight_enumerator,
    weight_enumerator_dual,
)
from .bounds import (
    BoundValue,
    bound_gap_markov,
    bound_prop_toy,
    bound_thm_dependent,
    bound_thm_dmax,
    bound_thm_psw,
    bound_thm_span,
    c_doubleprime,
    c_q,
    chi_q,
    count_rank,
    exact_cprime,
    gaussian_binomial,
    hyperplane_prob,
    kappa_valid,
    param_space_member,
    rho,
)
from .exactdist import (
    RankOrbitChain,
    build_chain,
    convergence_profile,
    exact_pn_bruteforce,
    exact_ps0,
    gap_bound_exact,
    n_decomp,
    ps0_sequence,
    ssw_bound_exact,
)
from .experiments import (
    DistinguisherReport,
    EstimateResult,
    ExperimentConfig,
    clopper_pearson,
    default_campaign,
    distinguish,
    estimate,
    sample_code_pair,
    sample_rank1,
    verify_campaign,
)
from .rng import SplitMix64, chunk_stream

__version__ = "0.1.0"

__all__ = [
    "GF", "field_new", "field_of_order",
    "MatrixGF", "bilinear_form_eval", "outer_product", "projective_reps",
    "row_space_equal", "unvec", "vec",
    "LinearCode", "all_ones_code", "dmax", "dmin", "dual",
    "general_position_profile", "rs_code", "simplex_code", "star_power",
    "star_product", "tensor_code", "weight_enumerator",
    "weight_enumerator_dual",
    "BoundValue", "bound_gap_markov", "bound_prop_toy",
    "bound_thm_dependent", "bound_thm_dmax", "bound_thm_psw",
    "bound_thm_span", "c_doubleprime", "c_q", "chi_q", "count_rank",
    "exact_cprime", "gaussian_binomial", "hyperplane_prob", "kappa_valid",
    "param_space_member", "rho",
    "RankOrbitChain", "build_chain", "convergence_profile",
    "exact_pn_bruteforce", "exact_ps0", "gap_bound_exact", "n_decomp",
    "ps0_sequence", "ssw_bound_exact",
    "DistinguisherReport", "EstimateResult", "ExperimentConfig",
    "clopper_pearson", "default_campaign", "distinguish", "estimate",
    "sample_code_pair", "sample_rank1", "verify_campaign",
    "SplitMix64", "chunk_stream",
]
