"""Numerical ground truth: march the weakly singular Volterra equation

    N(t) = N0 f(t) - r**alpha (I^alpha N)(t)

on a uniform grid with product-trapezoid weights. Shares nothing with the
closed-form series except the forcing polynomial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import DomainError, SingularEvaluation
from .frac_ops import SampledCurve, rl_integral_power, trapezoid_weights
from .problem import KineticProblem, forcing, forcing_terms
from .srivastava import MonomialTerm

__all__ = ["OracleConfig", "forcing", "forcing_samples", "split_singular", "solve_numeric"]

MAX_SPAN = 16.0
MAX_STEP = 0.1


@dataclass(frozen=True)
class OracleConfig:
    h: float
    n_steps: int
    t_eval_min_index: int = 10

    def __post_init__(self):
        if not self.h > 0:
            raise DomainError(f"h must be > 0, got {self.h}")
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise DomainError(f"n_steps must be a positive integer, got {self.n_steps}")
        if int(self.t_eval_min_index) != self.t_eval_min_index or self.t_eval_min_index < 1:
            raise DomainError("t_eval_min_index must be a positive integer")
        if self.h > MAX_STEP:
            raise DomainError(f"h={self.h} exceeds {MAX_STEP}")
        if self.h * self.n_steps > MAX_SPAN:
            raise DomainError(f"grid span h*n_steps={self.h * self.n_steps:g} exceeds {MAX_SPAN}")

    @classmethod
    def covering(cls, t_end: float, h: float, t_eval_min_index: int = 10) -> "OracleConfig":
        """Smallest grid with step h reaching t_end."""
        n = max(1, math.ceil(t_end / h - 1e-9))
        return cls(h, n, t_eval_min_index)

    @property
    def times(self) -> np.ndarray:
        return self.h * np.arange(self.n_steps + 1)


def forcing_samples(problem: KineticProblem, times: np.ndarray) -> tuple[np.ndarray, bool]:
    """``N0 * f`` on the grid; the flag is False when f(0) is singular."""
    terms = forcing_terms(problem)
    g = np.zeros(times.shape[0])
    for m in terms:
        if m.coeff == 0.0:
            continue
        with np.errstate(divide="ignore"):
            g += m.coeff * times**m.power
    finite0 = True
    try:
        g[0] = forcing(problem, 0.0)
    except SingularEvaluation:
        finite0 = False
        g[0] = math.nan
    return problem.n0 * g, finite0


def split_singular(problem: KineticProblem):
    """Separate the unbounded part of the solution near t = 0.

    Returns ``(singular, regular)`` monomial lists with
    N = sum(singular) + u, where u solves the same Volterra equation with
    bounded forcing ``sum(regular)``. Each pass moves every negative power
    t**m of the current forcing into ``singular`` and feeds back
    -r**alpha I^alpha t**m, which is t**(m+alpha) by the exact monomial rule.
    """
    a = problem.alpha
    lam = problem.rate**a
    regular = [MonomialTerm(problem.n0 * m.coeff, m.power)
               for m in forcing_terms(problem) if m.coeff != 0.0]
    singular = []
    while True:
        neg = [m for m in regular if m.power < 0]
        if not neg:
            return singular, regular
        singular.extend(neg)
        regular = [m for m in regular if m.power >= 0]
        for m in neg:
            regular.append(
                MonomialTerm(-lam * m.coeff * rl_integral_power(m.power, a, 1.0), m.power + a)
            )


def _samples(terms, times):
    out = np.zeros(times.shape[0])
    with np.errstate(divide="ignore"):
        for m in terms:
            out += m.coeff * times**m.power
    return out


def solve_numeric(problem: KineticProblem, cfg: OracleConfig) -> SampledCurve:
    """Implicit product-trapezoid march; one scalar solve per node.

    For a singular forcing (lambda > 0) the monomials that blow up at 0
    are handled analytically (see :func:`split_singular`) and only the
    bounded remainder is marched. Node 0 of the returned curve is then a
    linear extrapolation from nodes 1 and 2 and carries no information.
    """
    a = problem.alpha
    n_nodes = cfg.n_steps + 1
    times = cfg.times
    singular, regular = split_singular(problem)
    g = _samples(regular, times)
    g[0] = sum(m.coeff for m in regular if m.power == 0)
    interior, endpoint, scale = trapezoid_weights(a, n_nodes)
    lam = problem.rate**a * cfg.h**a * scale
    seed = np.zeros(n_nodes)
    seed[0] = g[0]
    values = _backend.active().volterra_march(g, interior, endpoint, lam, 1, seed)
    if singular:
        values[1:] += _samples(singular, times[1:])
        if n_nodes > 2:
            values[0] = 2.0 * values[1] - values[2]
        else:
            values[0] = values[1]
    return SampledCurve(0.0, cfg.h, values)
