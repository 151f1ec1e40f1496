"""Srivastava polynomials S_w^p and the monomials of their fractional derivative."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import DomainError, ValidationError
from .special_functions import gamma, pochhammer, recip_gamma

__all__ = [
    "SrivastavaPoly",
    "MonomialTerm",
    "make_poly",
    "eval_poly",
    "base_coefficients",
    "frac_derivative_terms",
    "eval_terms",
    "load_poly",
    "poly_to_dict",
]


@dataclass(frozen=True)
class SrivastavaPoly:
    """S_w^p(x) = sum_{k=0}^{w//p} (-w)_{pk} / k! * A_{w,k} * x**k.

    Build through :func:`make_poly`, which validates the coefficient count.
    """

    w: int
    p: int
    coeffs: tuple[float, ...]

    @property
    def n_terms(self) -> int:
        return self.w // self.p + 1

    def scaled(self, factor: float) -> "SrivastavaPoly":
        return make_poly(self.w, self.p, [factor * a for a in self.coeffs])


@dataclass(frozen=True)
class MonomialTerm:
    """``coeff * t**power``"""

    coeff: float
    power: float

    def __call__(self, t: float) -> float:
        if self.coeff == 0.0:
            return 0.0
        return self.coeff * t**self.power


def make_poly(w: int, p: int, coeffs) -> SrivastavaPoly:
    if isinstance(w, bool) or int(w) != w or w < 0:
        raise ValidationError(f"w must be a nonnegative integer, got {w!r}")
    if isinstance(p, bool) or int(p) != p or p < 1:
        raise ValidationError(f"p must be a positive integer, got {p!r}")
    w, p = int(w), int(p)
    try:
        values = tuple(float(a) for a in coeffs)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"coefficients must be numbers: {exc}") from None
    expected = w // p + 1
    if len(values) != expected:
        raise ValidationError(
            f"w={w}, p={p} needs {expected} coefficients, got {len(values)}"
        )
    if not all(math.isfinite(a) for a in values):
        raise ValidationError("coefficients must be finite")
    return SrivastavaPoly(w, p, values)


def base_coefficients(poly: SrivastavaPoly) -> list[float]:
    """The monomial weights (-w)_{pk} / k! * A_{w,k}, k = 0 .. w//p."""
    return [
        _poch_over_factorial(-poly.w, poly.p * k, k) * a
        for k, a in enumerate(poly.coeffs)
    ]


def _poch_over_factorial(a, n, k):
    if k <= 170:
        return pochhammer(a, n) / math.factorial(k)
    return pochhammer(a, n) * recip_gamma(k + 1.0)


def eval_poly(poly: SrivastavaPoly, xi: float) -> float:
    total = 0.0
    for k, b in enumerate(base_coefficients(poly)):
        total += b * xi**k
    return total


def frac_derivative_terms(
    poly: SrivastavaPoly,
    lam: float,
    scale_power: float = 1.0,
    scale_coeff: float = 1.0,
) -> list[MonomialTerm]:
    """Riemann-Liouville D^lam of S(scale_coeff * t**scale_power), termwise.

    Uses D^lam t**m = Gamma(m+1)/Gamma(m-lam+1) t**(m-lam) with m =
    scale_power*k. ``lam=0`` gives the plain monomial expansion.
    """
    if not 0.0 <= lam < 1.0:
        raise DomainError(f"lambda must lie in [0, 1), got {lam}")
    if not scale_power > 0:
        raise DomainError(f"scale_power must be > 0, got {scale_power}")
    terms = []
    for k, b in enumerate(base_coefficients(poly)):
        m = scale_power * k
        power = m - lam
        if lam == 0.0:
            coeff = b * scale_coeff**k
        else:
            coeff = b * scale_coeff**k * gamma(m + 1.0) * recip_gamma(power + 1.0)
        if coeff != 0.0 and power <= -1.0:
            raise DomainError(f"term t**{power} is not integrable at 0")
        terms.append(MonomialTerm(coeff, power))
    return terms


def eval_terms(terms, t: float) -> float:
    total = 0.0
    for term in terms:
        total += term(t)
    return total


def load_poly(path) -> SrivastavaPoly:
    """Read a ``{"w": .., "p": .., "coefficients": [..]}`` JSON file."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None
    return poly_from_dict(data, source=str(path))


def poly_from_dict(data, source="polynomial") -> SrivastavaPoly:
    if not isinstance(data, dict):
        raise ValidationError(f"{source}: expected a JSON object")
    missing = [k for k in ("w", "p", "coefficients") if k not in data]
    if missing:
        raise ValidationError(f"{source}: missing key(s) {', '.join(missing)}")
    w, p, coeffs = data["w"], data["p"], data["coefficients"]
    for key, v in (("w", w), ("p", p)):
        if isinstance(v, bool) or not isinstance(v, int):
            raise ValidationError(f"{source}: {key!r} must be an integer")
    if not isinstance(coeffs, list) or any(
        isinstance(a, bool) or not isinstance(a, (int, float)) for a in coeffs
    ):
        raise ValidationError(f"{source}: 'coefficients' must be a numeric array")
    return make_poly(w, p, coeffs)


def poly_to_dict(poly: SrivastavaPoly) -> dict:
    return {"w": poly.w, "p": poly.p, "coefficients": list(poly.coeffs)}
