"""Mod-p Leopoldt transforms, reduced Iwasawa series, and finite independence checks."""

from .arith import FieldCtx, FqElem, ZpFixed, ell_exponent, fq_root_of_unity, make_field, padic_log, teichmuller
from .chars import DirichletChar, ThetaChar, char_from_index, conductor, distinct_mod_pi, enumerate_chars, parity
from .errors import (FieldTooSmall, HypothesisViolated, InvalidParameter, LeopoldtError, NotAPowerSeries,
                     NotInDomain, OrderUnavailable, PartialResult, PrecisionError)
from .independence import (PseudoPoly, UnitExpr, char_matrix_kernel, eigencomponent_split,
                           is_pseudo_poly_rational, qstar_class, sinnott_check, truncated_independence,
                           vandermonde_squares_det)
from .iwasawa import (IwasawaContext, IwasawaSeries, bernoulli_b1, constant_term_oracle, f_bar, f_chi_series,
                      f_chi_tilde_series, fw_expectation, iwasawa_series, lambda_invariant, lambda_minus,
                      make_context, to_Tf)
from .pseries import (RationalFn, TruncSeries, compose_unit_exponent, div_exact, expand_rational, involution,
                      mul_trunc, op_D, op_gamma, op_U, t_act, taylor_shift)
from .transform import gamma_transform

__version__ = "0.1.0"

__all__ = [
    "FieldCtx", "FqElem", "ZpFixed", "ell_exponent", "fq_root_of_unity", "make_field", "padic_log",
    "teichmuller", "DirichletChar", "ThetaChar", "char_from_index", "conductor", "distinct_mod_pi",
    "enumerate_chars", "parity", "FieldTooSmall", "HypothesisViolated", "InvalidParameter",
    "LeopoldtError", "NotAPowerSeries", "NotInDomain", "OrderUnavailable", "PartialResult",
    "PrecisionError", "PseudoPoly", "UnitExpr", "char_matrix_kernel", "eigencomponent_split",
    "is_pseudo_poly_rational", "qstar_class", "sinnott_check", "truncated_independence",
    "vandermonde_squares_det", "IwasawaContext", "IwasawaSeries", "bernoulli_b1",
    "constant_term_oracle", "f_bar", "f_chi_series", "f_chi_tilde_series", "fw_expectation",
    "iwasawa_series", "lambda_invariant", "lambda_minus", "make_context", "to_Tf", "RationalFn",
    "TruncSeries", "compose_unit_exponent", "div_exact", "expand_rational", "involution",
    "mul_trunc", "op_D", "op_gamma", "op_U", "t_act", "taylor_shift", "gamma_transform",
]
