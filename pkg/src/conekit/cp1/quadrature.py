"""Area of a closed flat conical metric by singularity-adapted quadrature.

The density prod |xi - a_j|^(2 beta_j - 2) is integrated over the plane in
three kinds of pieces glued by a smooth partition of unity, so that every
sub-integrand is bounded and smooth:

* a disk around each a_j, in polar coordinates with the radial algebraic
  singularity rho^(2 beta_j - 1) absorbed into a Gauss-Jacobi weight;
* the far field through the inversion xi -> 1/w, where the closed-flat
  exponent balance makes the integrand smooth across w = 0;
* the remaining middle region by adaptive tensor Gauss-Legendre cells.

Cell contributions are reduced with math.fsum in a fixed traversal order,
so results do not depend on how many worker threads evaluate the cells.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .._threads import thread_cap
from ..errors import NumericFailure, OutOfModel
from .config import CLOSED_FLAT, PointConfig, classify_regime
from .kernels import density_product

_MAX_RADIAL = 1536
_MAX_CELLS = 400_000
_MAX_DEPTH = 30


@lru_cache(maxsize=128)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


@lru_cache(maxsize=256)
def _jacobi(n: int, alpha: float, beta: float):
    return roots_jacobi(n, alpha, beta)


def _smooth_step(x: np.ndarray) -> np.ndarray:
    """C-infinity monotone ramp: 0 for x <= 0, 1 for x >= 1."""
    x = np.asarray(x, dtype=float)
    out = (x >= 1.0).astype(float)
    inner = (x > 0.0) & (x < 1.0)
    if inner.any():  # transcendentals only on the transition zone
        xi = x[inner]
        qa = np.exp(-1.0 / xi)
        qb = np.exp(-1.0 / (1.0 - xi))
        out[inner] = qa / (qa + qb)
    return out


def _bump_down(t: np.ndarray, t0: float, t1: float) -> np.ndarray:
    """1 for t <= t0, 0 for t >= t1, smooth in between."""
    return _smooth_step((t1 - np.asarray(t, dtype=float)) / (t1 - t0))


@dataclass(frozen=True)
class AreaResult:
    value: float
    error_estimate: float


class _Geometry:
    """Centered point data and the partition-of-unity radii."""

    def __init__(self, cfg: PointConfig):
        pts = np.array(cfg.points, dtype=complex)
        center = pts.mean()
        pts = pts - center
        self.x = pts.real.copy()
        self.y = pts.imag.copy()
        self.n = len(pts)
        self.exps = np.array(cfg.exponents())        # 2 beta - 2
        self.half = self.exps / 2.0                  # exponent on squared distance
        dists = np.abs(pts[:, None] - pts[None, :])
        np.fill_diagonal(dists, np.inf)
        self.radii = dists.min(axis=1) / 3.0
        diam = float(dists[np.isfinite(dists)].max())
        rho_max = float(np.abs(pts).max())
        self.r_far = 2.0 * rho_max + diam
        self.r_cut = 2.0 * self.r_far

    def density(self, px: np.ndarray, py: np.ndarray) -> np.ndarray:
        return density_product(px, py, self.x, self.y, self.half)

    def mid_weight(self, px: np.ndarray, py: np.ndarray) -> np.ndarray:
        """Partition-of-unity factor of the middle region."""
        rho = np.hypot(px, py)
        if rho.max() <= self.r_far:
            w = np.ones_like(rho)
        else:
            w = _bump_down(rho, self.r_far, self.r_cut)
        for j in range(self.n):
            dj = np.hypot(px - self.x[j], py - self.y[j])
            rj = self.radii[j]
            if dj.min() >= rj:
                continue
            if dj.max() <= rj / 2.0:
                w = w - 1.0
            else:
                w = w - _bump_down(dj, rj / 2.0, rj)
        return w


def _disk_rule(geo: _Geometry, j: int, n_rad: int, m_ang: int) -> float:
    r = geo.radii[j]
    alpha = geo.exps[j] + 1.0  # rho^(2 beta - 2) times the area-element rho
    nodes, weights = _jacobi(n_rad, 0.0, alpha)
    rho = r * (nodes + 1.0) / 2.0
    theta = np.linspace(0.0, 2.0 * math.pi, m_ang, endpoint=False)
    px = (geo.x[j] + rho[:, None] * np.cos(theta)[None, :]).ravel()
    py = (geo.y[j] + rho[:, None] * np.sin(theta)[None, :]).ravel()
    keep = np.arange(geo.n) != j
    vals = density_product(px, py, geo.x[keep], geo.y[keep], geo.half[keep])
    vals = vals.reshape(n_rad, m_ang)
    bump = _bump_down(rho, r / 2.0, r)
    radial = vals.sum(axis=1) * bump * weights
    return float((r / 2.0) ** (alpha + 1.0) * (2.0 * math.pi / m_ang) * radial.sum())


def _far_rule(geo: _Geometry, n_rad: int, m_ang: int) -> float:
    nodes, weights = _gauss_legendre(n_rad)
    u = (nodes + 1.0) / 2.0 / geo.r_far     # |w| in (0, 1/r_far)
    theta = np.linspace(0.0, 2.0 * math.pi, m_ang, endpoint=False)
    w_grid = u[:, None] * np.exp(1j * theta)[None, :]
    pts = np.array(geo.x + 1j * geo.y)
    acc = np.zeros_like(w_grid, dtype=float)
    for k in range(geo.n):
        f = 1.0 - pts[k] * w_grid
        acc += geo.half[k] * np.log(f.real**2 + f.imag**2)
    resid = float(geo.exps.sum()) + 4.0  # 0 in the exact closed-flat case
    if resid != 0.0:
        acc += resid * np.log(u)[:, None]
    vals = np.exp(acc)
    chi = 1.0 - _bump_down(1.0 / u, geo.r_far, geo.r_cut)
    radial = vals.sum(axis=1) * chi * u * weights
    return float((0.5 / geo.r_far) * (2.0 * math.pi / m_ang) * radial.sum())


def _doubling(rule, tol_abs: float, n0: int, m0: int, what: str):
    n, m = n0, m0
    prev = rule(n, m)
    while True:
        n, m = 2 * n, 2 * m
        cur = rule(n, m)
        est = abs(cur - prev)
        if est <= tol_abs:
            return cur, est
        if n > _MAX_RADIAL:
            raise NumericFailure(
                f"{what} quadrature stalled at estimate {est:.3e}", achieved=est
            )
        prev = cur


# --- adaptive middle region --------------------------------------------------

_CELL_ORDER = 8


def _cell_values(geo: _Geometry, x0, y0, x1, y1) -> tuple[float, float]:
    """One-level and four-subcell Gauss-Legendre values on a rectangle."""
    nodes, weights = _gauss_legendre(_CELL_ORDER)
    m = _CELL_ORDER * _CELL_ORDER
    mx, my = (x0 + x1) / 2.0, (y0 + y1) / 2.0
    rects = (
        (x0, y0, x1, y1),
        (x0, y0, mx, my),
        (mx, y0, x1, my),
        (x0, my, mx, y1),
        (mx, my, x1, y1),
    )
    px = np.empty(5 * m)
    py = np.empty(5 * m)
    scales = []
    for i, (ax, ay, bx, by) in enumerate(rects):
        hx, hy = (bx - ax) / 2.0, (by - ay) / 2.0
        px[i * m : (i + 1) * m] = np.repeat((bx + ax) / 2.0 + hx * nodes, _CELL_ORDER)
        py[i * m : (i + 1) * m] = np.tile((by + ay) / 2.0 + hy * nodes, _CELL_ORDER)
        scales.append(hx * hy)
    f = geo.density(px, py) * geo.mid_weight(px, py)
    ww = np.outer(weights, weights).ravel()
    parts = [scales[i] * float(f[i * m : (i + 1) * m] @ ww) for i in range(5)]
    coarse = parts[0]
    fine = parts[1] + parts[2] + parts[3] + parts[4]
    return coarse, fine


def _mid_piece(geo: _Geometry, tol_abs: float) -> tuple[float, float]:
    half = geo.r_cut
    box_area = (2.0 * half) ** 2
    init = 4
    step = 2.0 * half / init
    frontier = [
        (0, -half + i * step, -half + j * step, -half + (i + 1) * step, -half + (j + 1) * step)
        for i in range(init)
        for j in range(init)
    ]
    cap = thread_cap()
    pool = ThreadPoolExecutor(max_workers=cap) if cap > 1 else None
    accepted_vals: list[float] = []
    accepted_ests: list[float] = []
    cells_seen = 0
    try:
        while frontier:
            cells_seen += len(frontier)
            if cells_seen > _MAX_CELLS:
                raise NumericFailure(
                    "middle-region refinement exceeded the cell budget",
                    achieved=math.fsum(accepted_ests),
                )
            jobs = [(geo, *cell[1:]) for cell in frontier]
            if pool is not None:
                results = list(pool.map(lambda args: _cell_values(*args), jobs))
            else:
                results = [_cell_values(*args) for args in jobs]
            next_frontier = []
            for (depth, x0, y0, x1, y1), (coarse, fine) in zip(frontier, results):
                est = abs(fine - coarse)
                budget = tol_abs * (x1 - x0) * (y1 - y0) / box_area
                if est <= budget or depth >= _MAX_DEPTH:
                    accepted_vals.append(fine)
                    accepted_ests.append(est)
                else:
                    mx, my = (x0 + x1) / 2.0, (y0 + y1) / 2.0
                    next_frontier.extend(
                        (
                            (depth + 1, x0, y0, mx, my),
                            (depth + 1, mx, y0, x1, my),
                            (depth + 1, x0, my, mx, y1),
                            (depth + 1, mx, my, x1, y1),
                        )
                    )
            frontier = next_frontier
    finally:
        if pool is not None:
            pool.shutdown()
    return math.fsum(accepted_vals), math.fsum(accepted_ests)


def area(cfg: PointConfig, tol: float = 1e-6) -> AreaResult:
    """Total area of the closed flat metric to relative accuracy tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    regime = classify_regime(cfg)
    if regime.kind != CLOSED_FLAT:
        raise OutOfModel(f"area is defined for the closed-flat regime, not {regime.kind}")
    geo = _Geometry(cfg)

    # rough value to convert the relative tolerance into absolute budgets
    rough_base = math.fsum(
        [_disk_rule(geo, j, 24, 32) for j in range(geo.n)] + [_far_rule(geo, 24, 32)]
    )
    rough = rough_base + _mid_piece(geo, 0.05 * abs(rough_base))[0]
    scale = abs(rough)
    if not math.isfinite(scale) or scale == 0.0:
        raise NumericFailure("area pre-pass did not produce a finite value")

    budget = 0.5 * tol * scale
    for attempt in range(2):
        per_piece = budget / (geo.n + 2)
        vals: list[float] = []
        ests: list[float] = []
        for j in range(geo.n):
            v, e = _doubling(
                lambda n, m, j=j: _disk_rule(geo, j, n, m), per_piece, 16, 24, "disk"
            )
            vals.append(v)
            ests.append(e)
        v, e = _doubling(lambda n, m: _far_rule(geo, n, m), per_piece, 16, 24, "far-field")
        vals.append(v)
        ests.append(e)
        v, e = _mid_piece(geo, per_piece)
        vals.append(v)
        ests.append(e)
        total = math.fsum(vals)
        est = math.fsum(ests)
        if est <= tol * abs(total):
            return AreaResult(value=total, error_estimate=est)
        budget /= 4.0
    raise NumericFailure(
        f"requested relative accuracy {tol} not reached (estimate {est:.3e})",
        achieved=est / abs(total),
    )
