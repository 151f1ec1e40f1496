"""Riemann-Liouville fractional integral: exact on monomials, product
trapezoid on uniformly sampled curves."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import DomainError, ValidationError
from .special_functions import gamma, recip_gamma

__all__ = [
    "SampledCurve",
    "rl_integral_power",
    "rl_integral_samples",
    "trapezoid_weights",
]


@dataclass(frozen=True)
class SampledCurve:
    """Values on the uniform grid ``t0 + i*h``."""

    t0: float
    h: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if not self.t0 >= 0:
            raise ValidationError(f"t0 must be >= 0, got {self.t0}")
        if not self.h > 0:
            raise ValidationError(f"h must be > 0, got {self.h}")
        if vals.ndim != 1 or vals.shape[0] < 2:
            raise ValidationError("a sampled curve needs at least 2 values")
        if not np.all(np.isfinite(vals)):
            raise ValidationError("sampled values must be finite")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.values.shape[0])

    def __len__(self):
        return self.values.shape[0]


def rl_integral_power(mu: float, alpha: float, t: float) -> float:
    """I^alpha t**mu = Gamma(mu+1)/Gamma(mu+alpha+1) t**(mu+alpha)."""
    if not mu > -1:
        raise DomainError(f"t**{mu} is not integrable at 0")
    if not alpha > 0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    if not t >= 0:
        raise DomainError(f"t must be >= 0, got {t}")
    return gamma(mu + 1.0) * recip_gamma(mu + 1.0 + alpha) * t ** (mu + alpha)


def _second_difference(q, m):
    # (m+1)**q - 2 m**q + (m-1)**q without cancellation for large m
    inv = 1.0 / m
    return m**q * (
        np.expm1(q * np.log1p(inv)) + np.expm1(q * np.log1p(-inv))
    )


def trapezoid_weights(alpha: float, n_nodes: int) -> tuple[np.ndarray, np.ndarray, float]:
    """Product-trapezoid weights for ``int_0^{t_n} (t_n-u)**(alpha-1) f(u) du``.

    Returns ``(interior, endpoint, scale)`` such that the fractional
    integral at node n >= 1 is approximated by::

        h**alpha * scale * (endpoint[n]*f[0] + sum_{j=1}^{n-1} interior[n-j]*f[j] + f[n])

    with ``scale = 1/Gamma(alpha + 2)``, which already folds in the
    1/Gamma(alpha) of the integral. ``interior[0]`` is the diagonal weight 1.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    q = alpha + 1.0
    interior = np.empty(n_nodes)
    endpoint = np.zeros(n_nodes)
    interior[0] = 1.0
    if n_nodes > 1:
        interior[1] = 2.0**q - 2.0
        endpoint[1] = alpha
    if n_nodes > 2:
        m = np.arange(2, n_nodes, dtype=float)
        interior[2:] = _second_difference(q, m)
        # (n-1)**q - (n-1-alpha) n**alpha = n**alpha (n expm1(q log1p(-1/n)) + 1 + alpha)
        endpoint[2:] = m**alpha * (m * np.expm1(q * np.log1p(-1.0 / m)) + 1.0 + alpha)
    return interior, endpoint, recip_gamma(alpha + 2.0)


def rl_integral_samples(curve: SampledCurve, alpha: float) -> SampledCurve:
    """Fractional integral of a sampled curve at every grid node.

    The curve is interpolated piecewise linearly and integrated exactly
    against the weakly singular kernel. O(h**2) for smooth data.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    if curve.t0 != 0:
        raise DomainError("rl_integral_samples needs a curve starting at t0 = 0")
    f = curve.values
    interior, endpoint, scale = trapezoid_weights(alpha, f.shape[0])
    hist = _backend.active().history_sums(f, interior, endpoint)
    out = scale * curve.h**alpha * (hist + f)
    out[0] = 0.0
    return SampledCurve(0.0, curve.h, out)
