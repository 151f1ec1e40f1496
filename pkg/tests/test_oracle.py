import math

import numpy as np
import pytest

from fkinetic import _backend
from fkinetic.closed_form import GammaMode, build_solution, eval_solution
from fkinetic.errors import DomainError, SingularEvaluation
from fkinetic.oracle import OracleConfig, forcing, solve_numeric, split_singular
from fkinetic.problem import KineticProblem, Variant
from fkinetic.srivastava import make_poly

H = 2.0**-11
CUBIC = make_poly(3, 1, [1, 1, 1, 1])
QUAD = make_poly(2, 1, [1, 1, 1])


def sup_rel_dev(problem, cfg, mode=GammaMode.DERIVED):
    curve = solve_numeric(problem, cfg)
    sol = build_solution(problem, mode)
    i0 = cfg.t_eval_min_index
    closed = np.array([eval_solution(sol, t) for t in curve.times[i0:]])
    dev = np.abs(closed - curve.values[i0:])
    return dev.max() / np.abs(closed).max()


def test_forcing_examples():
    assert forcing(KineticProblem(Variant.T1, 1, 0.5, 1, QUAD), 0.5) == pytest.approx(0.25, abs=1e-15)
    t2 = KineticProblem(Variant.T2, 1, 0.5, 2.0, make_poly(0, 1, [1]), d=1)
    assert forcing(t2, 0.3) == 1.0 and forcing(t2, 0.0) == 1.0
    t3 = KineticProblem(Variant.T3, 1, 0.5, 1, make_poly(1, 1, [0, 1]), lam=0.5)
    assert forcing(t3, 1.0) == pytest.approx(-1.1283791670955126, rel=1e-14)
    t3s = KineticProblem(Variant.T3, 1, 0.5, 1, QUAD, lam=0.5)
    with pytest.raises(SingularEvaluation):
        forcing(t3s, 0.0)


def test_t4_forcing_matches_scaled_polynomial_derivative():
    # D^lam S(c^a t^a) for S = 1 - 2x + x^2, monomial by monomial
    a, c, lam, t = 0.6, 1.4, 0.3, 0.8
    p = KineticProblem(Variant.T4, 1, a, c, QUAD, d=1, lam=lam)
    ref = sum(
        b * c ** (a * k) * math.gamma(a * k + 1) / math.gamma(a * k - lam + 1) * t ** (a * k - lam)
        for k, b in enumerate([1, -2, 1])
    )
    assert forcing(p, t) == pytest.approx(ref, rel=1e-13)


def test_config_guards():
    with pytest.raises(DomainError):
        OracleConfig(0.2, 10)
    with pytest.raises(DomainError):
        OracleConfig(0.01, 2000)
    with pytest.raises(DomainError):
        OracleConfig(0.01, 0)
    with pytest.raises(DomainError):
        OracleConfig(0.01, 10, t_eval_min_index=0)
    cfg = OracleConfig.covering(2.0, H)
    assert cfg.n_steps == 4096 and cfg.times[-1] == 2.0


def test_classical_exponential(backend):
    p = KineticProblem(Variant.T1, 3.0, 1.0, 2.0, make_poly(0, 1, [1]))
    curve = solve_numeric(p, OracleConfig.covering(1.0, H))
    assert abs(curve.values[-1] - 3 * math.exp(-2)) <= 1e-6
    assert curve.values[-1] == pytest.approx(0.4060058497098381, abs=1e-6)


def test_classical_convergence():
    p = KineticProblem(Variant.T1, 3.0, 1.0, 2.0, make_poly(0, 1, [1]))
    errs = []
    for h in (2.0**-6, 2.0**-7, 2.0**-8):
        curve = solve_numeric(p, OracleConfig.covering(2.0, h))
        ts = curve.times
        mask = ts >= 0.5
        errs.append(np.abs(curve.values[mask] - 3 * np.exp(-2 * ts[mask])).max())
    assert errs[0] / errs[1] >= 3 and errs[1] / errs[2] >= 3


@pytest.mark.parametrize("variant", list(Variant))
@pytest.mark.parametrize("alpha", [0.5, 0.9])
def test_suite_matches_closed_form(variant, alpha):
    p = KineticProblem(
        variant, 1.0, alpha, 1.0, CUBIC,
        d=1.2 if variant.uses_d else None, lam=0.4 if variant.uses_lambda else 0.0,
    )
    assert sup_rel_dev(p, OracleConfig.covering(2.0, H)) <= 5e-3


def test_small_alpha_large_lambda():
    # alpha < lambda: singular powers -0.7 and -0.4 are both split off
    p = KineticProblem(Variant.T3, 1.0, 0.3, 1.0, QUAD, lam=0.7)
    singular, regular = split_singular(p)
    assert sorted(round(m.power, 12) for m in singular) == [-0.7, -0.4, -0.1]
    assert all(m.power >= 0 for m in regular)
    assert sup_rel_dev(p, OracleConfig.covering(1.0, 2.0**-10)) <= 5e-3


def test_literal_mode_is_rejected_by_oracle():
    p = KineticProblem(Variant.T1, 1.0, 0.5, 1.0, QUAD)
    cfg = OracleConfig.covering(2.0, H)
    curve = solve_numeric(p, cfg)
    i = 2048  # t = 1
    assert curve.times[i] == 1.0
    devs = {
        m: abs(eval_solution(build_solution(p, m), 1.0) - curve.values[i]) for m in GammaMode
    }
    assert devs[GammaMode.LITERAL] >= 10 * devs[GammaMode.DERIVED]


@pytest.mark.parametrize(
    "variant,poly,alpha,lam",
    [
        (Variant.T1, QUAD, 0.5, 0.0),
        (Variant.T1, CUBIC, 0.9, 0.0),
        (Variant.T1, make_poly(1, 1, [1, 2]), 1.3, 0.0),
        (Variant.T3, QUAD, 0.5, 0.4),
        (Variant.T3, CUBIC, 0.9, 0.4),
        (Variant.T3, make_poly(1, 1, [1, 2]), 0.7, 0.2),
    ],
)
def test_mode_discrimination_every_node(variant, poly, alpha, lam):
    p = KineticProblem(variant, 1.0, alpha, 1.0, poly, lam=lam)
    curve = solve_numeric(p, OracleConfig.covering(2.0, 2.0**-9))
    mask = curve.times >= 0.5
    ts, num = curve.times[mask], curve.values[mask]
    err = {}
    for m in GammaMode:
        sol = build_solution(p, m)
        err[m] = np.abs(np.array([eval_solution(sol, t) for t in ts]) - num)
    assert np.all(err[GammaMode.DERIVED] < err[GammaMode.LITERAL])


@pytest.mark.parametrize("alpha", [0.3, 0.6, 1.0])
def test_nonnegative_forcing_is_damped(alpha):
    # S(t) = (1 - t)^2 >= 0
    p = KineticProblem(Variant.T1, 2.5, alpha, 1.5, QUAD)
    cfg = OracleConfig.covering(3.0, 2.0**-8)
    curve = solve_numeric(p, cfg)
    fmax = max(forcing(p, t) for t in cfg.times)
    assert curve.values.max() <= 2.5 * fmax + 1e-12


def test_singular_start_node_is_extrapolated():
    p = KineticProblem(Variant.T4, 1.0, 0.5, 1.0, CUBIC, d=1.2, lam=0.4)
    v = solve_numeric(p, OracleConfig.covering(0.5, 2.0**-8)).values
    assert v[0] == 2 * v[1] - v[2]


@pytest.mark.skipif(not _backend.compiled_available(), reason="extension not built")
@pytest.mark.parametrize("variant", list(Variant))
def test_backends_bit_identical(variant):
    p = KineticProblem(
        variant, 1.0, 0.7, 1.0, CUBIC,
        d=1.2 if variant.uses_d else None, lam=0.4 if variant.uses_lambda else 0.0,
    )
    cfg = OracleConfig.covering(1.0, 2.0**-9)
    try:
        _backend.use("python")
        a = solve_numeric(p, cfg).values
        _backend.use("compiled")
        b = solve_numeric(p, cfg).values
    finally:
        _backend.use("auto")
    assert np.array_equal(a, b)
