"""Closed-form and numerical solutions of fractional kinetic equations
forced by Srivastava polynomials.

The solution of ``N(t) - N0 f(t) = -r**alpha I^alpha N(t)`` is a finite sum
of Mittag-Leffler terms (:mod:`fkinetic.closed_form`), checked against a
product-trapezoid Volterra march (:mod:`fkinetic.oracle`).
"""
__version__ = "0.1.0"

from . import _backend
from .closed_form import (
    GammaMode,
    SeriesTerm,
    SolutionSeries,
    build_solution,
    eval_solution,
    particular_case,
    residual,
)
from .errors import (
    ConvergenceError,
    DomainError,
    FKineticError,
    OutputError,
    PoleError,
    SingularEvaluation,
    ValidationError,
)
from .frac_ops import SampledCurve, rl_integral_power, rl_integral_samples
from .oracle import OracleConfig, forcing, solve_numeric
from .problem import KineticProblem, Variant
from .special_functions import (
    AccuracyPolicy,
    MLPoint,
    gamma,
    mittag_leffler,
    ml,
    pochhammer,
    recip_gamma,
)
from .srivastava import (
    MonomialTerm,
    SrivastavaPoly,
    eval_poly,
    frac_derivative_terms,
    load_poly,
    make_poly,
)

backend = _backend.name
