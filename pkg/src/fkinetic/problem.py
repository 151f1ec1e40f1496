"""Kinetic problem data model and the forcing term of each theorem variant."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import SingularEvaluation, ValidationError
from .srivastava import MonomialTerm, SrivastavaPoly, eval_terms, frac_derivative_terms

__all__ = ["Variant", "KineticProblem", "forcing_terms", "forcing"]


class Variant(enum.Enum):
    """Which forcing enters N(t) - N0 f(t) = -r**alpha I^alpha N(t).

    T1: f = S(t), r = c            T2: f = S(c**a t**a), r = d
    T3: f = D^lam S(t), r = c      T4: f = D^lam S(c**a t**a), r = d
    """

    T1 = 1
    T2 = 2
    T3 = 3
    T4 = 4

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        text = str(value).upper().lstrip("T")
        try:
            return cls(int(text))
        except (ValueError, KeyError):
            raise ValidationError(f"unknown theorem variant {value!r}") from None

    @property
    def uses_d(self) -> bool:
        return self in (Variant.T2, Variant.T4)

    @property
    def uses_lambda(self) -> bool:
        return self in (Variant.T3, Variant.T4)

    @property
    def scaled_argument(self) -> bool:
        return self in (Variant.T2, Variant.T4)


@dataclass(frozen=True)
class KineticProblem:
    variant: Variant
    n0: float
    alpha: float
    c: float
    poly: SrivastavaPoly
    d: float | None = None
    lam: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        v = self.variant
        for name in ("n0", "alpha", "c", "lam"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if not self.alpha > 0:
            raise ValidationError(f"alpha must be > 0, got {self.alpha}")
        if not self.c > 0:
            raise ValidationError(f"c must be > 0, got {self.c}")
        if v.uses_d:
            if self.d is None or not math.isfinite(self.d) or not self.d > 0:
                raise ValidationError(f"{v.name} needs a finite d > 0, got {self.d}")
        elif self.d is not None:
            raise ValidationError(f"{v.name} takes no decay constant d")
        if not 0.0 <= self.lam < 1.0:
            raise ValidationError(f"lambda must lie in [0, 1), got {self.lam}")
        if self.lam != 0.0 and not v.uses_lambda:
            raise ValidationError(f"{v.name} takes no derivative order lambda")

    @property
    def rate(self) -> float:
        """The constant r whose power r**alpha multiplies I^alpha N."""
        return self.d if self.variant.uses_d else self.c

    def with_alpha(self, alpha: float) -> "KineticProblem":
        return KineticProblem(self.variant, self.n0, alpha, self.c, self.poly, self.d, self.lam)


def forcing_terms(problem: KineticProblem) -> list[MonomialTerm]:
    """Monomials of f(t), built from the polynomial's fractional derivative."""
    if problem.variant.scaled_argument:
        a = problem.alpha
        return frac_derivative_terms(problem.poly, problem.lam, a, problem.c**a)
    return frac_derivative_terms(problem.poly, problem.lam, 1.0, 1.0)


def forcing(problem: KineticProblem, t: float) -> float:
    """f(t) without the N0 factor."""
    terms = forcing_terms(problem)
    if t == 0:
        if any(m.coeff != 0.0 and m.power < 0 for m in terms):
            raise SingularEvaluation(f"f(0) is singular for lambda={problem.lam}")
        return sum(m.coeff for m in terms if m.power == 0)
    if t < 0:
        raise ValidationError(f"t must be >= 0, got {t}")
    return eval_terms(terms, t)
