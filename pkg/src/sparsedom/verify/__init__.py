"""Numeric verification harness: explicit constants, weighted inequalities, lemma checks."""
from .inequalities import (FS_VARIANTS, coifman_fefferman, compatibility_constant,
                           default_lambdas, normalize_symbols, sharp_maximal_check, weak_type_fs)
from .lemmas import LEMMAS, LemmaContext, holder_constant, lemma_suite
from .quadrature import (QuadratureResult, Phi, a_index, alpha_rk, beta_const, c_eps, k_phi,
                         k_weight, kphi_log_integrand, phi_family)

__all__ = [
    "FS_VARIANTS",
    "LEMMAS",
    "LemmaContext",
    "QuadratureResult",
    "Phi",
    "a_index",
    "alpha_rk",
    "beta_const",
    "c_eps",
    "coifman_fefferman",
    "compatibility_constant",
    "default_lambdas",
    "holder_constant",
    "k_phi",
    "k_weight",
    "kphi_log_integrand",
    "lemma_suite",
    "normalize_symbols",
    "phi_family",
    "sharp_maximal_check",
    "weak_type_fs",
]
