"""Gamma, Pochhammer and two-parameter Mittag-Leffler evaluation."""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import _backend
from ._kernels_py import recip_gamma as _recip_gamma
from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "AccuracyPolicy",
    "MLPoint",
    "DEFAULT_POLICY",
    "gamma",
    "recip_gamma",
    "pochhammer",
    "log_abs_pochhammer",
    "mittag_leffler",
    "ml",
]


@dataclass(frozen=True)
class AccuracyPolicy:
    """Tolerances and term caps for Mittag-Leffler summation."""

    rel_tol: float = 1e-12
    abs_tol: float = 1e-300
    max_terms: int = 10_000
    asymptotic_threshold: float = 1e5
    # bound on the series' rounding error relative to 1 + |value|
    cancellation_tol: float = 1e-10

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be > 0, got {self.rel_tol}")
        if not self.abs_tol >= 0:
            raise DomainError(f"abs_tol must be >= 0, got {self.abs_tol}")
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise DomainError(f"max_terms must be a positive integer, got {self.max_terms}")
        if not self.asymptotic_threshold > 0:
            raise DomainError("asymptotic_threshold must be > 0")
        if not self.cancellation_tol > 0:
            raise DomainError("cancellation_tol must be > 0")


DEFAULT_POLICY = AccuracyPolicy()

_ROUNDING = 8 * 2.0**-52


@dataclass(frozen=True)
class MLPoint:
    """Parameters ``(alpha, beta)`` and argument ``z`` of E_{alpha,beta}(z)."""

    alpha: float
    beta: float
    z: float

    def __post_init__(self):
        if not self.alpha > 0 or not math.isfinite(self.alpha):
            raise DomainError(f"alpha must be finite and > 0, got {self.alpha}")
        if not (math.isfinite(self.beta) and math.isfinite(self.z)):
            raise DomainError("beta and z must be finite")


def _is_pole(x):
    return x <= 0 and x == math.floor(x)


def gamma(x: float) -> float:
    """Gamma function; raises :class:`PoleError` at 0, -1, -2, ..."""
    x = float(x)
    if _is_pole(x):
        raise PoleError(f"Gamma has a pole at {x}")
    try:
        return math.gamma(x)
    except OverflowError:
        return math.inf


def recip_gamma(x: float) -> float:
    """1/Gamma(x), entire; exactly 0.0 at the poles of Gamma."""
    return _recip_gamma(float(x))


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1) by direct product."""
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a nonnegative integer, got {n}")
    out = 1.0
    for i in range(int(n)):
        out *= a + i
        if out == 0.0:
            break
    return out


def log_abs_pochhammer(a: float, n: int) -> tuple[float, float]:
    """``(sign, log|(a)_n|)``; sign is 0.0 when the product vanishes."""
    sign = 1.0
    acc = 0.0
    for i in range(int(n)):
        f = a + i
        if f == 0.0:
            return 0.0, -math.inf
        if f < 0:
            sign = -sign
        acc += math.log(abs(f))
    return sign, acc


def mittag_leffler(p: MLPoint, policy: AccuracyPolicy = DEFAULT_POLICY) -> float:
    """E_{alpha,beta}(z) = sum_n z**n / Gamma(alpha*n + beta) by Taylor series.

    The series is summed with Neumaier compensation and stops once two
    consecutive terms fall below ``rel_tol*|partial| + abs_tol``. Arguments
    with ``|z|`` beyond ``policy.asymptotic_threshold`` are rejected, and so
    are results whose terms cancel so badly that the rounding error
    estimate exceeds ``cancellation_tol * (1 + |value|)``.
    """
    if abs(p.z) > policy.asymptotic_threshold:
        raise DomainError(
            f"|z|={abs(p.z):g} exceeds asymptotic_threshold={policy.asymptotic_threshold:g}"
        )
    if p.z == 0.0:
        return recip_gamma(p.beta)
    value, n_terms, ok, sum_abs = _backend.active().ml_series(
        float(p.alpha), float(p.beta), float(p.z),
        float(policy.rel_tol), float(policy.abs_tol), int(policy.max_terms),
    )
    if not ok:
        raise ConvergenceError(
            f"E_{{{p.alpha},{p.beta}}}({p.z}) not converged after {n_terms} terms"
        )
    if not math.isfinite(value):
        raise ConvergenceError(f"E_{{{p.alpha},{p.beta}}}({p.z}) overflowed")
    if _ROUNDING * sum_abs > policy.cancellation_tol * (1.0 + abs(value)):
        raise ConvergenceError(
            f"E_{{{p.alpha},{p.beta}}}({p.z}): series cancellation, "
            f"sum|term|={sum_abs:.3g} against value {value:.3g}"
        )
    return value


def ml(alpha: float, beta: float, z: float, policy: AccuracyPolicy = DEFAULT_POLICY) -> float:
    """Shorthand for ``mittag_leffler(MLPoint(alpha, beta, z), policy)``."""
    return mittag_leffler(MLPoint(alpha, beta, z), policy)
