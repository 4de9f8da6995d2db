"""Pure-numpy quadrature kernels; fallback when the compiled module is absent."""

import numpy as np


def density_product(px, py, ax, ay, half_exps):
    """w_i = prod_k ((px_i - ax_k)^2 + (py_i - ay_k)^2) ** half_exps_k.

    half_exps carries the exponents on the squared distances, i.e.
    beta_k - 1 for a metric density factor |xi - a_k|^(2 beta_k - 2).
    """
    px = np.asarray(px, dtype=float)
    py = np.asarray(py, dtype=float)
    ax = np.asarray(ax, dtype=float)
    ay = np.asarray(ay, dtype=float)
    half_exps = np.asarray(half_exps, dtype=float)
    out = np.empty(px.shape[0])
    step = max(1, 2_000_000 // max(len(ax), 1))  # bound the temporaries
    for lo in range(0, px.shape[0], step):
        hi = lo + step
        d2 = (px[lo:hi, None] - ax[None, :]) ** 2 + (py[lo:hi, None] - ay[None, :]) ** 2
        with np.errstate(divide="ignore"):
            out[lo:hi] = np.exp(np.log(d2) @ half_exps)
    return out
