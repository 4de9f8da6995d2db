"""Periods of the flat-metric one-form and the enveloping polygon.

The developing map of the metric is F(xi) = int prod (eta - a_k)^(beta_k - 1)
d eta; its increments between marked points (the periods) are computed along
straight segments with Gauss-Jacobi quadrature absorbing the two endpoint
singularities.  The multivalued integrand is made single-valued along each
segment by anchoring every factor's argument to its principal value at the
segment midpoint and tracking it continuously outward; anchoring at the
midpoint makes period(q, p) = -period(p, q) hold by construction.

For configurations on the real line the developed image is a polygon whose
double recovers the metric; sc_polygon accumulates the vertices and closes
the boundary across infinity through the inversion u = 1/(xi - c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import NumericFailure, OutOfModel, ParseError, PathTooClose
from .config import CLOSED_FLAT, PeriodPath, PointConfig, classify_regime, make_path
from .quadrature import _jacobi

#: clearance below this fraction of the configuration diameter is rejected
CLEARANCE_FRACTION = 1e-8

_MAX_ORDER = 3072


def _pangle(z: complex) -> float:
    """Principal argument with exactly-real negatives sent to +pi.

    This matches the continuous branch approached from the upper half plane,
    which is the convention the real-axis polygon development uses.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real < 0.0:
        return math.pi
    return math.atan2(z.imag, z.real)


@dataclass(frozen=True)
class PeriodResult:
    value: complex
    error_estimate: float

    @property
    def length(self) -> float:
        """Metric length of the segment."""
        return abs(self.value)


def _adaptive_jacobi(g, p: float, q: float, tol: float, what: str):
    """int_0^1 t^p (1-t)^q g(t) dt with doubling Gauss-Jacobi orders.

    g maps an ascending array of interior nodes t in (0, 1) to values.
    """
    scale = 2.0 ** (-1.0 - p - q)
    n = 24
    nodes, weights = _jacobi(n, q, p)
    prev = scale * np.dot(weights, g((nodes + 1.0) / 2.0))
    while True:
        n *= 2
        if n > _MAX_ORDER:
            raise NumericFailure(f"{what} quadrature stalled", achieved=float("nan"))
        nodes, weights = _jacobi(n, q, p)
        cur = scale * np.dot(weights, g((nodes + 1.0) / 2.0))
        est = abs(cur - prev)
        if est <= tol * max(abs(cur), 1e-300):
            return cur, est
        prev = cur


class _BranchTracker:
    """Continuous arguments of (xi(t) - c_k) along a segment.

    Arguments are anchored to the principal value at t = 1/2 and unwrapped
    on a dense parameter grid; quadrature nodes get their winding integer
    from the nearest dense sample.
    """

    def __init__(self, z0: complex, z1: complex, centers: np.ndarray):
        self.z0, self.z1 = z0, z1
        self.centers = centers
        m = 513
        while True:
            t = np.linspace(0.0, 1.0, m)
            xi = z0 + t * (z1 - z0)
            rel = xi[None, :] - centers[:, None]
            ang = np.angle(rel)
            unwrapped = np.unwrap(ang, axis=1)
            mid = m // 2
            unwrapped += ang[:, mid : mid + 1] - unwrapped[:, mid : mid + 1]
            if m >= 262145:
                raise NumericFailure("branch tracking failed to stabilize")
            if unwrapped.size and np.max(np.abs(np.diff(unwrapped, axis=1))) > 0.5:
                m = 2 * m - 1
                continue
            self.t_grid = t
            self.args = unwrapped
            break

    def factor_values(self, t: np.ndarray) -> np.ndarray:
        """prod_k (xi(t) - c_k)^(beta_k - 1) needs these tracked arguments."""
        xi = self.z0 + t * (self.z1 - self.z0)
        rel = xi[None, :] - self.centers[:, None]
        principal = np.angle(rel)
        idx = np.clip(
            np.searchsorted(self.t_grid, t), 1, len(self.t_grid) - 1
        )
        near = np.where(
            np.abs(self.t_grid[idx] - t) <= np.abs(self.t_grid[idx - 1] - t),
            idx,
            idx - 1,
        )
        winding = np.rint((self.args[:, near] - principal) / (2.0 * math.pi))
        return np.abs(rel), principal + 2.0 * math.pi * winding


def period(cfg: PointConfig, path: PeriodPath, tol: float = 1e-8) -> PeriodResult:
    """Straight-segment period between two marked points."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    eps_min = CLEARANCE_FRACTION * cfg.diameter()
    if path.clearance <= eps_min:
        raise PathTooClose(
            f"clearance {path.clearance:.3e} below {eps_min:.3e}"
        )
    i, j = path.from_index, path.to_index
    z0, z1 = cfg.points[i], cfg.points[j]
    d = z1 - z0
    p = float(cfg.betas[i]) - 1.0
    q = float(cfg.betas[j]) - 1.0
    others = [k for k in range(cfg.n) if k not in (i, j)]
    exps = np.array([float(cfg.betas[k]) - 1.0 for k in others])
    centers = np.array([cfg.points[k] for k in others], dtype=complex)
    tracker = _BranchTracker(z0, z1, centers) if others else None

    def g(t: np.ndarray) -> complex:
        if tracker is None:
            return np.ones_like(t, dtype=complex)
        mag, ang = tracker.factor_values(t)
        log_val = exps @ np.log(mag) + 1j * (exps @ ang)
        return np.exp(log_val)

    integral, est = _adaptive_jacobi(g, p, q, tol, "period")
    # endpoint factors have constant arguments along the segment: Arg(d) at
    # the start, Arg(-d) at the end (their principal values at the midpoint);
    # both pass through _pangle, so swapping the endpoints negates the result
    const = (
        d
        * abs(d) ** p
        * np.exp(1j * p * _pangle(d))
        * abs(d) ** q
        * np.exp(1j * q * _pangle(-d))
    )
    value = const * integral
    return PeriodResult(value=complex(value), error_estimate=float(abs(const) * est))


@dataclass(frozen=True)
class ScPolygon:
    vertices: tuple[complex, ...]
    closure_defect: float
    error_estimate: float

    def interior_angles(self) -> list[float]:
        """Turning-based interior angle at each vertex of the closed cycle."""
        v = self.vertices
        n = len(v)
        out = []
        for m in range(n):
            incoming = v[m] - v[m - 1]
            outgoing = v[(m + 1) % n] - v[m]
            turn = math.atan2(
                (outgoing / incoming).imag, (outgoing / incoming).real
            )
            out.append(math.pi - turn)
        return out

    def shoelace_area(self) -> float:
        v = self.vertices
        acc = math.fsum(
            (v[m].real * v[(m + 1) % len(v)].imag - v[(m + 1) % len(v)].real * v[m].imag)
            for m in range(len(v))
        )
        return abs(acc) / 2.0


def _closure_tail(cfg: PointConfig, tol: float):
    """Straight side through infinity: int over the two real tails.

    Substituting u = 1/(xi - c) with c the midpoint of the extreme points
    maps both tails onto one segment [u_1, u_n] through u = 0 (infinity);
    the closed-flat exponent balance removes the singularity there and the
    endpoint weights become Gauss-Jacobi weights again.  All factors are
    real and positive on the segment, so no branch tracking is needed.
    """
    a = sorted(p.real for p in cfg.points)
    betas = [float(b) for b, p in sorted(zip(cfg.betas, cfg.points), key=lambda t: t[1].real)]
    c = (a[0] + a[-1]) / 2.0
    u1 = 1.0 / (a[0] - c)
    un = 1.0 / (a[-1] - c)
    span = un - u1
    exps = np.array(betas) - 1.0

    def g(t: np.ndarray) -> np.ndarray:
        u = u1 + t * span
        acc = np.zeros_like(u)
        for k in range(1, len(a) - 1):
            acc += exps[k] * np.log(1.0 + u * (c - a[k]))
        return np.exp(acc)

    p, q = betas[0] - 1.0, betas[-1] - 1.0
    integral, est = _adaptive_jacobi(g, p, q, tol, "closure tail")
    const = (
        (c - a[0]) ** p
        * (a[-1] - c) ** q
        * span ** (p + q + 1.0)
    )
    return const * integral, const * est


def sc_polygon(cfg: PointConfig, tol: float = 1e-8) -> ScPolygon:
    """Developed polygon of a real collinear closed-flat configuration.

    Vertices are cumulative periods along the real axis starting from 0;
    the returning side across infinity must reproduce the first vertex.
    """
    if any(p.imag != 0.0 for p in cfg.points):
        raise ParseError("polygon development needs real collinear points")
    xs = [p.real for p in cfg.points]
    if any(x1 <= x0 for x0, x1 in zip(xs, xs[1:])):
        raise ParseError("points must be sorted strictly ascending")
    if classify_regime(cfg).kind != CLOSED_FLAT:
        raise OutOfModel("polygon development needs the closed-flat regime")
    vertices = [0 + 0j]
    ests = []
    for m in range(cfg.n - 1):
        res = period(cfg, make_path(cfg, m, m + 1), tol)
        vertices.append(vertices[-1] + res.value)
        ests.append(res.error_estimate)
    tail, tail_est = _closure_tail(cfg, tol)
    ests.append(tail_est)
    defect = abs(vertices[-1] + tail - vertices[0])
    return ScPolygon(
        vertices=tuple(vertices),
        closure_defect=float(defect),
        error_estimate=float(math.fsum(ests)),
    )
