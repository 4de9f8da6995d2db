# cython: boundscheck=False, wraparound=False, cdivision=True
# Compiled quadrature kernel: the density product is the inner loop of the
# flat-metric area integrator and dominates its runtime.

from libc.math cimport exp, log

import numpy as np


def density_product(px, py, ax, ay, half_exps):
    """Same contract as conekit.cp1._kernels_py.density_product."""
    cdef double[::1] x = np.ascontiguousarray(px, dtype=np.float64)
    cdef double[::1] y = np.ascontiguousarray(py, dtype=np.float64)
    cdef double[::1] cx = np.ascontiguousarray(ax, dtype=np.float64)
    cdef double[::1] cy = np.ascontiguousarray(ay, dtype=np.float64)
    cdef double[::1] he = np.ascontiguousarray(half_exps, dtype=np.float64)
    out_arr = np.empty(x.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, k, n = x.shape[0], m = cx.shape[0]
    cdef double acc, dx, dy
    for i in range(n):
        acc = 0.0
        for k in range(m):
            dx = x[i] - cx[k]
            dy = y[i] - cy[k]
            acc += he[k] * log(dx * dx + dy * dy)
        out[i] = exp(acc)
    return out_arr
