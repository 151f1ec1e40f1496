"""Mittag-Leffler series solutions of the Srivastava-forced kinetic equations.

Every variant solves N(t) - N0 f(t) = -r**alpha I^alpha N(t) with a finite
sum of terms ``coeff * t**(beta-1) * E_{alpha,beta}(-r**alpha t**alpha)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import SingularEvaluation, ValidationError
from .problem import KineticProblem, Variant, forcing
from .special_functions import (
    DEFAULT_POLICY,
    AccuracyPolicy,
    gamma,
    log_abs_pochhammer,
    ml,
    pochhammer,
    recip_gamma,
)

__all__ = [
    "GammaMode",
    "SeriesTerm",
    "SolutionSeries",
    "build_solution",
    "eval_solution",
    "residual",
    "particular_case",
    "OVERFLOW_LIMIT",
]

OVERFLOW_LIMIT = 1e300


class GammaMode(enum.Enum):
    """Gamma factor attached to term k of the T1/T3 series.

    DERIVED uses Gamma(k+1), which is what the Laplace pair of t**k gives.
    LITERAL uses Gamma(alpha*k+1) as printed alongside that
    derivation; it does not satisfy the kinetic equation unless alpha = 1.
    T2 and T4 are the same in both modes.
    """

    DERIVED = "derived"
    LITERAL = "literal"

    @classmethod
    def parse(cls, value) -> "GammaMode":
        if isinstance(value, cls):
            return value
        text = str(value).lower()
        for mode in cls:
            if text in (mode.value, mode.name.lower()):
                return mode
        raise ValidationError(f"unknown gamma mode {value!r}")


@dataclass(frozen=True)
class SeriesTerm:
    """``coeff * t**t_power * E_{ml_alpha, ml_beta}(ml_rate * t**ml_alpha)``.

    When ``|coeff|`` would exceed ``OVERFLOW_LIMIT`` it is kept as
    ``sign * exp(log_abs_coeff)`` and ``coeff`` holds +-inf.
    """

    coeff: float
    t_power: float
    ml_alpha: float
    ml_beta: float
    ml_rate: float
    log_abs_coeff: float | None = None
    sign: float = 1.0

    @property
    def is_zero(self) -> bool:
        return self.log_abs_coeff is None and self.coeff == 0.0

    def scale_at(self, t: float) -> float:
        """``coeff * t**t_power``, recombining log-space coefficients."""
        if self.log_abs_coeff is None:
            return self.coeff * t**self.t_power
        return self.sign * math.exp(self.log_abs_coeff + self.t_power * math.log(t))


@dataclass(frozen=True)
class SolutionSeries:
    terms: tuple[SeriesTerm, ...]
    variant: Variant
    mode: GammaMode

    def __len__(self):
        return len(self.terms)

    def __call__(self, t: float, policy: AccuracyPolicy = DEFAULT_POLICY) -> float:
        return eval_solution(self, t, policy)


def _term(factors, log_factors, t_power, alpha, beta, rate) -> SeriesTerm:
    """Multiply ``factors`` directly; fall back to the signed log sum."""
    coeff = 1.0
    for f in factors:
        coeff *= f
    if math.isfinite(coeff) and abs(coeff) <= OVERFLOW_LIMIT:
        return SeriesTerm(coeff, t_power, alpha, beta, rate)
    sign, acc = 1.0, 0.0
    for s, la in log_factors():
        if s == 0.0:
            return SeriesTerm(0.0, t_power, alpha, beta, rate)
        sign *= s
        acc += la
    return SeriesTerm(sign * math.inf, t_power, alpha, beta, rate, acc, sign)


def _log_gamma(x):
    return (math.copysign(1.0, gamma(x)) if x < 0 else 1.0), math.lgamma(x)


def _log_value(v):
    if v == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, v), math.log(abs(v))


def build_solution(problem: KineticProblem, mode=GammaMode.DERIVED) -> SolutionSeries:
    """Closed-form series for the problem's variant.

    Term k carries b_k = (-w)_{pk}/k! A_{w,k} times N0 and a Gamma factor:
    T1/T3 use Gamma(k+1) (DERIVED) or Gamma(alpha*k+1) (LITERAL);
    T2/T4 use Gamma(alpha*k+1) c**(alpha*k) in either mode.
    """
    mode = GammaMode.parse(mode)
    v = problem.variant
    poly = problem.poly
    a = problem.alpha
    lam = problem.lam
    rate = -(problem.rate**a)
    terms = []
    for k, coeff_k in enumerate(poly.coeffs):
        n = poly.p * k
        if v.scaled_argument:
            g_arg = a * k + 1.0
            t_power = a * k - lam
            scale = problem.c ** (a * k)
            log_scale = a * k * math.log(problem.c)
        else:
            g_arg = (k + 1.0) if mode is GammaMode.DERIVED else (a * k + 1.0)
            t_power = k - lam
            scale = 1.0
            log_scale = 0.0
        ratio = pochhammer(-poly.w, n) / math.factorial(k) if k <= 170 else math.inf
        factors = (ratio * coeff_k, gamma(g_arg), scale)

        def log_factors(k=k, n=n, coeff_k=coeff_k, g_arg=g_arg, log_scale=log_scale):
            yield log_abs_pochhammer(-poly.w, n)
            yield 1.0, -math.lgamma(k + 1.0)
            yield _log_value(coeff_k)
            yield _log_gamma(g_arg)
            yield 1.0, log_scale
            yield _log_value(problem.n0)

        term = _term(factors, log_factors, t_power, a, t_power + 1.0, rate)
        if term.log_abs_coeff is None:
            term = SeriesTerm(problem.n0 * term.coeff, t_power, a, t_power + 1.0, rate)
            if not math.isfinite(term.coeff) or abs(term.coeff) > OVERFLOW_LIMIT:
                term = _term((math.inf,), log_factors, t_power, a, t_power + 1.0, rate)
        terms.append(term)
    return SolutionSeries(tuple(terms), v, mode)


def eval_solution(
    sol: SolutionSeries, t: float, policy: AccuracyPolicy = DEFAULT_POLICY
) -> float:
    """N(t) from the series; t = 0 is allowed unless a term has a negative power."""
    if t < 0:
        raise ValidationError(f"t must be >= 0, got {t}")
    total = 0.0
    for term in sol.terms:
        if term.is_zero:
            continue
        if t == 0:
            if term.t_power < 0:
                raise SingularEvaluation(
                    f"N(0) is singular: term with t**{term.t_power:g}"
                )
            if term.t_power == 0:
                total += _scaled_coeff(term) * recip_gamma(term.ml_beta)
            continue
        z = term.ml_rate * t**term.ml_alpha
        total += term.scale_at(t) * ml(term.ml_alpha, term.ml_beta, z, policy)
    return total


def _scaled_coeff(term):
    if term.log_abs_coeff is None:
        return term.coeff
    return term.sign * math.exp(term.log_abs_coeff)


def residual(
    problem: KineticProblem,
    sol: SolutionSeries,
    t: float,
    policy: AccuracyPolicy = DEFAULT_POLICY,
) -> float:
    """|N(t) - N0 f(t) + r**alpha I^alpha N(t)| evaluated analytically.

    Uses I^alpha[t**(b-1) E_{a,b}(r t**a)] = t**(a+b-1) E_{a,a+b}(r t**a)
    for every term, so an exact solution leaves only rounding.
    """
    if not t > 0:
        raise SingularEvaluation(f"residual needs t > 0, got {t}")
    a = problem.alpha
    n_val = 0.0
    int_val = 0.0
    for term in sol.terms:
        if term.is_zero:
            continue
        z = term.ml_rate * t**term.ml_alpha
        s = term.scale_at(t)
        n_val += s * ml(term.ml_alpha, term.ml_beta, z, policy)
        int_val += s * t**a * ml(term.ml_alpha, term.ml_beta + a, z, policy)
    f_val = forcing(problem, t)
    return abs(n_val - problem.n0 * f_val + problem.rate**a * int_val)


def particular_case(
    case: str,
    n0: float,
    alpha: float,
    poly,
    c: float = 1.0,
    d: float | None = None,
    lam: float = 0.0,
    mu: float = 0.0,
) -> SolutionSeries:
    """Series for the special parameter choices of the T2/T4 equations.

    "3.2": T2 with d = c          "3.4": T2 with c = 1
    "3.6": T4 with d = c          "3.8": T4 with c = 1
    ``mu`` is the extra shift in the Mittag-Leffler index of "3.6"/"3.8"
    (beta = alpha*(mu+k) - lam + 1); it has no stated meaning and
    mu = 0 recovers the general T4 series.
    """
    if case not in ("3.2", "3.4", "3.6", "3.8"):
        raise ValidationError(f"unknown particular case {case!r}")
    if case in ("3.2", "3.6"):
        rate, scale = c, c
    else:
        if d is None:
            raise ValidationError(f"case {case} needs d")
        rate, scale = d, 1.0
    derivative = case in ("3.6", "3.8")
    shift = lam if derivative else 0.0
    b = [pochhammer(-poly.w, poly.p * k) / math.factorial(k) * a_k
         for k, a_k in enumerate(poly.coeffs)]
    terms = []
    for k, b_k in enumerate(b):
        coeff = n0 * (b_k * gamma(alpha * k + 1.0) * (scale * 1.0) ** (alpha * k))
        beta = (alpha * (mu + k) if derivative else alpha * k) - shift + 1.0
        terms.append(SeriesTerm(coeff, alpha * k - shift, alpha, beta, -(rate**alpha)))
    variant = Variant.T4 if derivative else Variant.T2
    return SolutionSeries(tuple(terms), variant, GammaMode.DERIVED)
