"""Heterogeneous finite mixtures by moment matching, Groebner bases and eigenvalues."""

from .eigensolve import companion_matrix, eig, filter_real, multiplication_matrix, solve_variety
from .hermite import HermiteCoeffs, he_eval, he_monomial_coeffs, monomial_to_hermite
from .mixfit import (
    FitReport,
    MixtureProblem,
    SolutionCandidate,
    build_system,
    eda_scan,
    fit,
    ks_statistic,
    solve_linear,
    solve_polynomial,
)
from .moments import (
    FamilySpec,
    MomentVector,
    Standardization,
    Unknown,
    empirical_raw_moments,
    exponential,
    family_cdf,
    gamma,
    gaussian,
    gram_charlier_coeffs,
    poisson,
    raw_moments,
    student_t,
    symbolic_raw_moments,
    uniform,
)
from .poly import GroebnerBasis, MultiPoly, QuotientBasis, buchberger, normal_form, parse_poly, quotient_basis

__version__ = "0.1.0"

__all__ = [
    "companion_matrix",
    "eig",
    "filter_real",
    "multiplication_matrix",
    "solve_variety",
    "HermiteCoeffs",
    "he_eval",
    "he_monomial_coeffs",
    "monomial_to_hermite",
    "FitReport",
    "MixtureProblem",
    "SolutionCandidate",
    "build_system",
    "eda_scan",
    "fit",
    "ks_statistic",
    "solve_linear",
    "solve_polynomial",
    "FamilySpec",
    "MomentVector",
    "Standardization",
    "Unknown",
    "empirical_raw_moments",
    "exponential",
    "family_cdf",
    "gamma",
    "gaussian",
    "gram_charlier_coeffs",
    "poisson",
    "raw_moments",
    "student_t",
    "symbolic_raw_moments",
    "uniform",
    "GroebnerBasis",
    "MultiPoly",
    "QuotientBasis",
    "buchberger",
    "normal_form",
    "parse_poly",
    "quotient_basis",
]
