# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled orbit and keystream kernels.

Semantics must stay bit-identical to ``_purepy``: IEEE 754 binary64,
round-to-nearest-even, the exact operation order written below. The build
passes -ffp-contract=off so the compiler cannot fuse or reassociate.
"""

from libc.math cimport floor

import numpy as np

BACKEND = "cython"


cdef inline double _step(int scheme, double x, double r, double omr) noexcept nogil:
    cdef double t
    if scheme == 1:
        t = r * x
        t = t * x
        t = t * x
        return t + omr * x
    elif scheme == 2:
        t = (x * x) * x
        t = r * t
        return t + (x - r * x)
    elif scheme == 3:
        t = (r * x) * x
        t = t + omr
        return x * t
    else:
        t = (r * x)
        t = t * x
        t = t * x
        return t + omr * x


def run_orbit(double x0, double r, int scheme, double damping, Py_ssize_t n):
    """Mirror of ``_purepy.run_orbit``; see its docstring for the contract."""
    if scheme < 1 or scheme > 4:
        raise ValueError(f"unknown evaluation scheme id {scheme!r}")
    out_arr = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double omr = 1.0 - r
    cdef double x = x0
    cdef double y
    cdef Py_ssize_t k
    out[0] = x0
    for k in range(n):
        y = damping * _step(scheme, x, r, omr)
        out[k + 1] = y
        if not (-1.5 <= y <= 1.5):  # also catches NaN
            return out_arr, k + 1
        x = y
    return out_arr, -1


def normalize_block(const double[::1] samples, unsigned char[::1] out):
    """Mirror of ``_purepy.normalize_block``; see its docstring."""
    cdef Py_ssize_t i
    cdef Py_ssize_t n = samples.shape[0]
    cdef double x, y, z, frac
    for i in range(n):
        x = samples[i]
        if not (-1.0 <= x <= 1.0):
            return i
        y = x / 2.0 + 1.0
        z = y * 1000.0
        frac = z - floor(z)
        out[i] = <unsigned char> floor(255.0 * frac)
    return -1
