"""p-adic continued fractions: expansion algorithms, convergents, periodicity
classification, Rédei expansions and the p-adic Jacobi-Perron algorithm."""

from .algorithms import AlgorithmId, context_for, expand, step, trace
from .analysis import (
    Certificate,
    Classification,
    Condition,
    ConvergenceReport,
    Verdict,
    approximation_lattice,
    check_convergence,
    classify,
    classify_quadratic,
    classify_rational,
    preperiod_constraints,
    purely_periodic_predicate,
    verify_valuation_identities,
)
from .cf import (
    Convergent,
    Expansion,
    Status,
    StatusKind,
    approximation_profile,
    convergents,
    evaluate,
    evaluate_finite,
    evaluate_periodic,
    matrix_form,
    predicted_profile,
)
from .errors import PadicError
from .mjp import MjpExpansion, jp_check_convergence, jp_convergents, jp_expand, jp_strong_convergence_profile
from .padic import Branch, Convention, PadicContext, Quadratic, digits, parse_number, sqrt_hensel, valuation
from .redei import browkin2_redei_match, redei_expansion

__all__ = [name for name in dir() if not name.startswith("_")]
