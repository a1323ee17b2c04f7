"""Exact Meijer G evaluations and real-eigenvalue probabilities for products
of two real Gaussian matrices."""

from gpiq.errors import ConvergenceError, DomainError, StructuralError
from gpiq.exact import (
    HalfInt,
    PiMonomial,
    binomial_exact,
    gamma_exact,
    pochhammer_exact,
)
from gpiq.meijer import (
    JkIndex,
    MeijerParams,
    check_3f2_identity,
    hyp2f1_reg,
    meijer_g_general_z,
    meijer_g_jk,
    meijer_g_unit,
)
from gpiq.realprob import (
    ExactProbability,
    asymptotic_log,
    build_kernel,
    det_bareiss,
    prefactor,
    prob_all_real,
    probability_table,
    ratio_statistic,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "StructuralError",
    "HalfInt",
    "PiMonomial",
    "binomial_exact",
    "gamma_exact",
    "pochhammer_exact",
    "JkIndex",
    "MeijerParams",
    "check_3f2_identity",
    "hyp2f1_reg",
    "meijer_g_general_z",
    "meijer_g_jk",
    "meijer_g_unit",
    "ExactProbability",
    "asymptotic_log",
    "build_kernel",
    "det_bareiss",
    "prefactor",
    "prob_all_real",
    "probability_table",
    "ratio_statistic",
]
