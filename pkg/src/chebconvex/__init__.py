"""Convexity with respect to Chebyshev systems.

Determinant functionals of a system and of a system bordered by a candidate
function, sampled certification of the convexity notions built on their signs,
rational-module constructions of discontinuous examples, and exact checks of
the accompanying identities.
"""

from ._kernels import BACKEND
from .algebra import (AdditiveMap, GenPolynomial, ModuleFunction, ModulePoint, RationalModule,
                      build_jensen_affine, default_module, discontinuity_witness, eval_additive,
                      eval_genpoly, module_jensen_configs, module_simplex_tuples, module_wright_configs,
                      synthesize_wright)
from .certify import (check_omega_convex, check_omega_jensen, check_t_omega_convex, check_wright,
                      jensen_configs_from_wright, step_configs_to_jensen, wright_configs_from_tuples)
from .cli import emit_plot_data, ingest_csv, run
from .det import (DetValue, Mode, SimplexTuple, det_exact, det_float, phi, phi_bordered, phi_many,
                  phi_system, vandermonde_product)
from .funcs import (Callable, EvaluationError, Exponential, Expression, FuncHandle, Polynomial, Product,
                    Quotient, Tabulated)
from .identities import (GridFunction, chwc_perm_sum_check, chwc_ratio_check, divided_difference,
                         extend_from_dense_grid, factorization_check, finite_difference, fit_omega_affine,
                         qp_equation_check)
from .report import Certificate, Property, Report, Verdict, Witness
from .sampling import (equidistant_configs, sample_qp_triples, sample_simplex_tuples, sample_step_configs,
                       sample_wright_configs)
from .scalars import ExpSum, Surd, exp, parse_scalar, sqrt
from .systems import (ChebSystem, ExtendedSystem, Interval, extend_with, extend_with_power,
                      is_positive_chebyshev, make_polynomial_system, make_weighted_system)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AdditiveMap", "GenPolynomial", "ModuleFunction", "ModulePoint", "RationalModule",
    "build_jensen_affine", "default_module", "discontinuity_witness", "eval_additive", "eval_genpoly",
    "module_jensen_configs", "module_simplex_tuples", "module_wright_configs", "synthesize_wright",
    "check_omega_convex", "check_omega_jensen", "check_t_omega_convex", "check_wright",
    "jensen_configs_from_wright", "step_configs_to_jensen", "wright_configs_from_tuples",
    "emit_plot_data", "ingest_csv", "run",
    "DetValue", "Mode", "SimplexTuple", "det_exact", "det_float", "phi", "phi_bordered", "phi_many",
    "phi_system", "vandermonde_product",
    "Callable", "EvaluationError", "Exponential", "Expression", "FuncHandle", "Polynomial", "Product",
    "Quotient", "Tabulated",
    "GridFunction", "chwc_perm_sum_check", "chwc_ratio_check", "divided_difference",
    "extend_from_dense_grid", "factorization_check", "finite_difference", "fit_omega_affine",
    "qp_equation_check",
    "Certificate", "Property", "Report", "Verdict", "Witness",
    "equidistant_configs", "sample_qp_triples", "sample_simplex_tuples", "sample_step_configs",
    "sample_wright_configs",
    "ExpSum", "Surd", "exp", "parse_scalar", "sqrt",
    "ChebSystem", "ExtendedSystem", "Interval", "extend_with", "extend_with_power",
    "is_positive_chebyshev", "make_polynomial_system", "make_weighted_system",
]
