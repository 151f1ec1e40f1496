"""Pure-Python/numpy implementations of the hot kernels.

Used when the compiled ``_kernels`` extension is not importable. Both
backends expose the same functions with the same argument order.
"""
import math

import numpy as np

BACKEND = "python"

_LOG_SPACE_X = 160.0
_POWER_LIMIT = 1e290


def _sinpi(x):
    r = math.fmod(x, 2.0)
    return math.sin(math.pi * r)


_EULER_GAMMA = 0.5772156649015329


def recip_gamma(x):
    if x <= 0.0 and x == math.floor(x):
        return 0.0
    if abs(x) < 1e-8:
        return x * (1.0 + _EULER_GAMMA * x)
    if x >= 171.0:
        return math.exp(-math.lgamma(x))
    if x < -170.0:
        # reflection; Gamma(x) itself underflows here
        sp = _sinpi(x)
        try:
            return sp * math.exp(math.lgamma(1.0 - x)) / math.pi
        except OverflowError:
            return math.copysign(math.inf, sp)
    return 1.0 / math.gamma(x)


def ml_series(alpha, beta, z, rel_tol, abs_tol, max_terms):
    """Sum z**n / Gamma(alpha*n + beta) with Neumaier compensation.

    Returns ``(value, n_terms, converged, sum_abs)``; ``sum_abs`` is the sum
    of |term| and bounds the rounding error of the result.
    """
    s = 0.0
    sum_abs = 0.0
    comp = 0.0
    small = 0
    logz = math.log(abs(z)) if z != 0.0 else -math.inf
    negative = z < 0.0
    for n in range(max_terms):
        x = alpha * n + beta
        if n == 0:
            term = recip_gamma(x)
        elif z == 0.0:
            term = 0.0
        else:
            zn = math.pow(z, n) if n * logz < 667.0 else math.inf
            if x < _LOG_SPACE_X and abs(zn) < _POWER_LIMIT:
                term = zn * recip_gamma(x)
            else:
                term = math.exp(n * logz - math.lgamma(x))
                if negative and n % 2 == 1:
                    term = -term
        sum_abs += abs(term)
        t = s + term
        if abs(s) >= abs(term):
            comp += (s - t) + term
        else:
            comp += (term - t) + s
        s = t
        if x > 0.0:
            if abs(term) <= rel_tol * abs(s + comp) + abs_tol:
                small += 1
                if small == 2:
                    return s + comp, n + 1, True, sum_abs
            else:
                small = 0
    return s + comp, max_terms, False, sum_abs


def history_sums(values, interior, endpoint):
    """Product-trapezoid history at every node, diagonal excluded.

    ``out[n] = endpoint[n]*values[0] + sum_{j=1}^{n-1} interior[n-j]*values[j]``
    summed in ascending j. ``out[0]`` is 0.
    """
    f = np.asarray(values, dtype=float)
    n_nodes = f.shape[0]
    out = np.zeros(n_nodes)
    rev = interior[::-1]
    for n in range(1, n_nodes):
        acc = endpoint[n] * f[0]
        if n > 1:
            # rev[-n:-1] holds interior[n-1], ..., interior[1]
            prods = rev[n_nodes - n:n_nodes - 1] * f[1:n]
            acc = np.cumsum(np.concatenate(([acc], prods)))[-1]
        out[n] = acc
    return out


def volterra_march(forcing, interior, endpoint, lam, n_start, seed):
    """March N_n = (g_n - lam * history_n) / (1 + lam) for n >= n_start.

    ``lam`` already includes the weight scale. ``seed`` holds the values
    of nodes below ``n_start``.
    """
    g = np.asarray(forcing, dtype=float)
    n_nodes = g.shape[0]
    out = np.zeros(n_nodes)
    out[:n_start] = seed[:n_start]
    rev = interior[::-1]
    denom = 1.0 + lam
    for n in range(n_start, n_nodes):
        acc = endpoint[n] * out[0]
        if n > 1:
            prods = rev[n_nodes - n:n_nodes - 1] * out[1:n]
            acc = np.cumsum(np.concatenate(([acc], prods)))[-1]
        out[n] = (g[n] - lam * acc) / denom
    return out
