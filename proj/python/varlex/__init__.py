"""Norms, extension verdicts and Marcinkiewicz-Zygmund constant estimation
on variable-exponent Lebesgue spaces. Thin wrapper over the C++ core."""

from ._varlex import (
    DomainError,
    Space,
    ValidationError,
    associate_norm,
    blowup_experiment,
    conjugate,
    conjugate_space,
    decide,
    decide_constant,
    estimate_k_lower,
    holder_check,
    interval_ipq,
    log_gamma,
    luxemburg_norm,
    mc_integration_lemma,
    mc_ratio_check,
    modular,
    moment_c,
    mz_certified_ratio,
    op_norm_lower,
    op_norm_upper_certified,
    sample_stable,
    summarize,
    truncate,
    vector_norm,
)

__all__ = [
    "DomainError",
    "Space",
    "ValidationError",
    "associate_norm",
    "blowup_experiment",
    "conjugate",
    "conjugate_space",
    "decide",
    "decide_constant",
    "estimate_k_lower",
    "holder_check",
    "interval_ipq",
    "log_gamma",
    "luxemburg_norm",
    "mc_integration_lemma",
    "mc_ratio_check",
    "modular",
    "moment_c",
    "mz_certified_ratio",
    "op_norm_lower",
    "op_norm_upper_certified",
    "sample_stable",
    "summarize",
    "truncate",
    "vector_norm",
]

__version__ = "0.1.0"
