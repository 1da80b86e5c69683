"""Levy triplets, exponents and checkers for Hunt's hypothesis (H)."""

from .catalog import CatalogEntry, catalog_get, catalog_list
from .classifier import (
    Assertions,
    BretagnolleCase,
    HReport,
    bretagnolle_case,
    h_verdict,
    h_verdict_sum,
    hitting_set,
    kesten_hitting,
)
from .conditions import (
    DEFAULT_CONFIG,
    CheckConfig,
    GrowthFunctionFamily,
    SplitWitness,
    Status,
    Verdict,
    bg_indices,
    check_cba,
    check_hw,
    check_kf,
    check_loglog_local,
    check_nd,
    check_rao,
    check_repsi_growth,
    check_s,
    check_sym,
    check_thm25,
    check_thm26,
    check_type_alpha_beta,
    nu_alpha_mass,
    nu_alpha_verdict,
    pro123_limit,
    range_member,
)
from .errors import *  # noqa: F401,F403
from .exponent import (
    ExponentHandle,
    evaluate_psi,
    measure_fourier,
    one_energy,
    psi_parts,
)
from .model import (
    Atoms,
    FiniteMeasure,
    LevyMeasure,
    LevyTriplet,
    LogSingularDensity,
    PowerSumDensity,
    Reflected,
    ScaledRestriction,
    StablePowerDensity,
    TypeAlphaBetaDensity,
    decompose_pro35,
    decompose_thm25,
    signed_first_moment,
    split_pm,
    sum_triplets,
    truncated_moment,
    validate_triplet,
    variation_integral,
)
from .numerics import (
    integrate_adaptive,
    integrate_improper,
    liminf_ratio,
    limit_lambda,
)
from .pairs import (
    check_bg_rule,
    check_im_domination,
    check_pro43,
    check_pro312,
    lemma314_gamma,
    verify_lemma314,
)

__version__ = "0.1.0"
