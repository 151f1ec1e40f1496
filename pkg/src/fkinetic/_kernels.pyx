# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``.

Same signatures and the same ascending summation order, so the Volterra
march and history sums agree bit for bit with the numpy fallback.
"""
import numpy as np

from libc.math cimport exp, fabs, floor, fmod, lgamma, log, pow, sin, tgamma, INFINITY, M_PI

BACKEND = "compiled"

cdef double _LOG_SPACE_X = 160.0
cdef double _POWER_LIMIT = 1e290
cdef double _EULER_GAMMA = 0.5772156649015329


cdef double _recip_gamma(double x) noexcept nogil:
    if x <= 0.0 and x == floor(x):
        return 0.0
    if fabs(x) < 1e-8:
        return x * (1.0 + _EULER_GAMMA * x)
    if x >= 171.0:
        return exp(-lgamma(x))
    if x < -170.0:
        # overflows to +-inf like the fallback
        return sin(M_PI * fmod(x, 2.0)) * exp(lgamma(1.0 - x)) / M_PI
    return 1.0 / tgamma(x)


def recip_gamma(double x):
    return _recip_gamma(x)


def ml_series(double alpha, double beta, double z, double rel_tol, double abs_tol,
              long max_terms):
    cdef double s = 0.0, comp = 0.0, sum_abs = 0.0, term, t, x, zn
    cdef double logz = log(fabs(z)) if z != 0.0 else -INFINITY
    cdef bint negative = z < 0.0
    cdef int small = 0
    cdef long n
    with nogil:
        for n in range(max_terms):
            x = alpha * n + beta
            if n == 0:
                term = _recip_gamma(x)
            elif z == 0.0:
                term = 0.0
            else:
                zn = pow(z, <double>n) if n * logz < 667.0 else INFINITY
                if x < _LOG_SPACE_X and fabs(zn) < _POWER_LIMIT:
                    term = zn * _recip_gamma(x)
                else:
                    term = exp(n * logz - lgamma(x))
                    if negative and n % 2 == 1:
                        term = -term
            sum_abs += fabs(term)
            t = s + term
            if fabs(s) >= fabs(term):
                comp += (s - t) + term
            else:
                comp += (term - t) + s
            s = t
            if x > 0.0:
                if fabs(term) <= rel_tol * fabs(s + comp) + abs_tol:
                    small += 1
                    if small == 2:
                        break
                else:
                    small = 0
    if small == 2:
        return s + comp, n + 1, True, sum_abs
    return s + comp, max_terms, False, sum_abs


def history_sums(values, interior, endpoint):
    cdef const double[::1] f = np.ascontiguousarray(values, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(interior, dtype=np.float64)
    cdef const double[::1] e = np.ascontiguousarray(endpoint, dtype=np.float64)
    cdef Py_ssize_t n_nodes = f.shape[0], n, j
    out_arr = np.zeros(n_nodes)
    cdef double[::1] out = out_arr
    cdef double acc
    with nogil:
        for n in range(1, n_nodes):
            acc = e[n] * f[0]
            for j in range(1, n):
                acc = acc + w[n - j] * f[j]
            out[n] = acc
    return out_arr


def volterra_march(forcing, interior, endpoint, double lam, Py_ssize_t n_start, seed):
    cdef const double[::1] g = np.ascontiguousarray(forcing, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(interior, dtype=np.float64)
    cdef const double[::1] e = np.ascontiguousarray(endpoint, dtype=np.float64)
    cdef const double[::1] s0 = np.ascontiguousarray(seed, dtype=np.float64)
    cdef Py_ssize_t n_nodes = g.shape[0], n, j
    out_arr = np.zeros(n_nodes)
    cdef double[::1] out = out_arr
    cdef double acc, denom = 1.0 + lam
    with nogil:
        for n in range(n_start):
            out[n] = s0[n]
        for n in range(n_start, n_nodes):
            acc = e[n] * out[0]
            for j in range(1, n):
                acc = acc + w[n - j] * out[j]
            out[n] = (g[n] - lam * acc) / denom
    return out_arr
