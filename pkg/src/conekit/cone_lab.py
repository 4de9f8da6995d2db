"""Linear theory on model cones: indicial roots, radial modes, exponents.

Two model dimensions appear.  On the four-dimensional cone the radial part
of harmonic analysis is u'' + (3/r) u' - (lambda/r^2) u = f with link
eigenvalue lambda >= 0; its homogeneous solutions are r^(delta+-) where
delta (delta + 2) = lambda.  On the two-dimensional cone of total angle
2 pi beta the separated Poisson problem has the explicit solutions coded in
mode_solution_2d, and iterating them produces source expansions with
exponents k/beta + 2j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import InvalidEigenvalue, InvalidMode, NumericFailure
from .exact import Number


def _exact_sqrt(x: Fraction) -> Fraction | None:
    """Square root of a non-negative rational when it is again rational."""
    num, den = x.numerator, x.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True)
class IndicialPair:
    """Homogeneity degrees of harmonic functions for one link eigenvalue."""

    lam: Number
    delta_plus: Number
    delta_minus: Number

    def __post_init__(self):
        assert self.delta_plus >= 0 and self.delta_minus <= -2
        # roots are symmetric around -1; stored so this holds exactly
        assert self.delta_minus == -2 - self.delta_plus


def indicial_roots(lam: Number) -> IndicialPair:
    """The two real solutions of s (s + 2) = lambda, signed delta+ >= 0 >= -2 >= delta-.

    Rational eigenvalues with rational square root of 1 + lambda give exact
    rational roots; otherwise floats with delta- = -2 - delta+ so the root
    sum is exact either way.
    """
    if lam < 0:
        raise InvalidEigenvalue(f"link eigenvalue must be >= 0, got {lam}")
    root = None
    if isinstance(lam, Rational):
        root = _exact_sqrt(Fraction(lam) + 1)
    if root is None:
        root = math.sqrt(1 + float(lam))
    plus = root - 1
    return IndicialPair(lam=lam, delta_plus=plus, delta_minus=-2 - plus)


def lambda_of_delta(delta: Number) -> Number:
    """Inverse map delta (delta + 2); negative outputs (delta in (-2, 0))
    lie below the indicial set, whose minimum -1 sits at delta = -1."""
    return delta * (delta + 2)


# --- radial two-point problems on the 4-dimensional cone -------------------


def _cumulative_integral(f: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order cumulative integral of samples on a uniform grid."""
    n = f.shape[0]
    if n < 4:
        raise ValueError("need at least 4 samples")
    inc = np.empty(n - 1)
    inc[1:-1] = (-f[:-3] + 13 * f[1:-2] + 13 * f[2:-1] - f[3:]) * (h / 24)
    inc[0] = (9 * f[0] + 19 * f[1] - 5 * f[2] + f[3]) * (h / 24)
    inc[-1] = (f[-4] - 5 * f[-3] + 19 * f[-2] + 9 * f[-1]) * (h / 24)
    out = np.empty(n)
    out[0] = 0.0
    np.cumsum(inc, out=out[1:])
    return out


@dataclass(frozen=True)
class RadialProfile:
    r: np.ndarray
    u: np.ndarray
    delta_plus: float
    delta_minus: float
    condition: float


def radial_solve(lam, r0, r1, u0, u1, source=None, num_points=513) -> RadialProfile:
    """Two-point solve of u'' + (3/r) u' - (lambda/r^2) u = source on [r0, r1].

    In t = log r the equation has constant coefficients, so the homogeneous
    part is handled exactly by the basis r^(delta+-) and only the source
    term is integrated numerically (variation of parameters on a geometric
    grid, fourth order).  `source` may be None, a callable of r, or samples
    on the returned grid.
    """
    if lam < 0:
        raise InvalidEigenvalue(f"link eigenvalue must be >= 0, got {lam}")
    if not (0 < r0 < r1):
        raise ValueError("need 0 < r0 < r1")
    roots = indicial_roots(lam)
    dp, dm = float(roots.delta_plus), float(roots.delta_minus)
    t0, t1 = math.log(r0), math.log(r1)
    spread = max(dp, -dm) * (t1 - t0)
    condition = math.exp(min(spread, 700.0))
    if spread > 300.0:
        raise NumericFailure(
            f"radial basis spans {condition:.3e} over the annulus", achieved=condition
        )
    t = np.linspace(t0, t1, num_points)
    r = np.exp(t)

    if source is None:
        g = np.zeros(num_points)
    elif callable(source):
        g = np.exp(2 * t) * np.asarray([float(source(ri)) for ri in r])
    else:
        samples = np.asarray(source, dtype=float)
        if samples.shape != (num_points,):
            raise ValueError(f"source samples must have shape ({num_points},)")
        g = np.exp(2 * t) * samples

    # scaled homogeneous basis: bounded by 1 on the annulus
    y1 = np.exp(dp * (t - t1))
    y2 = np.exp(dm * (t - t0))
    if np.any(g):
        h = (t1 - t0) / (num_points - 1)
        wr = dm - dp  # Wronskian = wr * y1 * y2
        i1 = _cumulative_integral(g / (wr * y1), h)
        i2 = _cumulative_integral(g / (wr * y2), h)
        vp = -y1 * i1 + y2 * i2
    else:
        vp = np.zeros(num_points)

    # boundary fit: matrix is [[eps1, 1], [1, eps2]], well conditioned
    a11, a12 = y1[0], y2[0]
    a21, a22 = y1[-1], y2[-1]
    b1, b2 = u0 - vp[0], u1 - vp[-1]
    det = a11 * a22 - a12 * a21
    ca = (b1 * a22 - b2 * a12) / det
    cb = (b2 * a11 - b1 * a21) / det
    u = vp + ca * y1 + cb * y2
    return RadialProfile(r=r, u=u, delta_plus=dp, delta_minus=dm, condition=condition)


# --- separated modes on the 2-dimensional cone ------------------------------


@dataclass(frozen=True)
class ModeProblem:
    """Source rho^s cos(k theta) for the Laplacian of the angle-2 pi beta cone."""

    beta: Number
    k: int
    s: Number

    def __post_init__(self):
        if not (0 < self.beta <= 1):
            raise InvalidMode(f"beta = {self.beta} not in (0, 1]")
        if not (isinstance(self.k, int) and self.k >= 0):
            raise InvalidMode("Fourier index k must be a non-negative integer")
        if not self.s > -2:
            raise InvalidMode(f"radial exponent s = {self.s} not > -2")


@dataclass(frozen=True)
class ModeSolution:
    exponent: Number          # rho power of the particular solution
    coefficient: Number
    resonant: bool            # solution carries a log rho factor


def mode_solution_2d(problem: ModeProblem) -> ModeSolution:
    """Particular solution of Delta u = rho^s cos(k theta).

    With Delta = d^2/drho^2 + rho^-1 d/drho + (beta rho)^-2 d^2/dtheta^2
    the ansatz c rho^(s+2) cos(k theta) gives c ((s+2)^2 - (k/beta)^2) = 1;
    at resonance s + 2 = k/beta the solution picks up a log rho factor and
    c = 1 / (2 (s + 2)).  Resonance detection is exact for exact inputs.
    """
    a = problem.s + 2
    ratio = (
        Fraction(problem.k) / Fraction(problem.beta)
        if isinstance(problem.beta, Rational)
        else problem.k / problem.beta
    )
    if a == ratio == 0:
        raise InvalidMode("degenerate mode: s + 2 = k/beta = 0")
    if a == ratio:
        coeff = 1 / (2 * a)
        return ModeSolution(exponent=a, coefficient=coeff, resonant=True)
    denom = a * a - ratio * ratio
    if isinstance(denom, Rational):
        coeff = Fraction(1) / Fraction(denom)
    else:
        coeff = 1 / denom
    return ModeSolution(exponent=a, coefficient=coeff, resonant=False)


@dataclass(frozen=True)
class ExponentEntry:
    value: Number
    j: int
    k: int


def greens_exponents(beta: Number, j_max: int, k_max: int) -> list[ExponentEntry]:
    """Powers k/beta + 2 j appearing in source expansions near the apex."""
    if j_max < 0 or k_max < 0:
        raise ValueError("bounds must be >= 0")
    inv = (
        Fraction(1) / Fraction(beta) if isinstance(beta, Rational) else 1 / beta
    )
    entries = [
        ExponentEntry(value=k * inv + 2 * j, j=j, k=k)
        for j in range(j_max + 1)
        for k in range(k_max + 1)
    ]
    entries.sort(key=lambda en: (en.value, en.k, en.j))
    return entries


# --- dilation identity check ------------------------------------------------


@dataclass(frozen=True)
class ScalingCheck:
    max_residual: float
    bound: float            # heuristic resolution-dependent bound
    max_spacing: float


def scaling_identity_check(
    u, lambda_scale: float, r0: float = 1.0, r1: float = 2.0, num_points: int = 129
) -> ScalingCheck:
    """Residual of Delta(u_lambda) - lambda^2 (Delta u)_lambda for radial u.

    `u` is a callable radial profile.  Both sides are discretized with the
    same absolute finite-difference offsets taken from a geometric grid on
    [r0, r1], so the residual measures the true commutator up to truncation
    error: it vanishes on quadratics and decreases at the stencil order
    under refinement.
    """
    lam = float(lambda_scale)
    if lam <= 0:
        raise ValueError("lambda_scale must be positive")
    r = np.exp(np.linspace(math.log(r0), math.log(r1), num_points))
    mid, lo, hi = r[1:-1], r[:-2], r[2:]
    hm, hp = mid - lo, hi - mid

    def fd_laplacian(f, center, h_minus, h_plus, radius):
        """Radial 4-d Laplacian f'' + 3 f'/r on a non-uniform 3-point stencil."""
        fm = np.asarray([float(f(x)) for x in center - h_minus])
        f0 = np.asarray([float(f(x)) for x in center])
        fp = np.asarray([float(f(x)) for x in center + h_plus])
        denom = h_minus * h_plus * (h_minus + h_plus)
        d2 = 2 * (h_minus * fp - (h_minus + h_plus) * f0 + h_plus * fm) / denom
        d1 = (h_minus**2 * fp + (h_plus**2 - h_minus**2) * f0 - h_plus**2 * fm) / denom
        return d2 + 3 * d1 / radius

    side_a = fd_laplacian(lambda x: float(u(lam * x)), mid, hm, hp, mid)
    side_b = lam**2 * fd_laplacian(u, lam * mid, hm, hp, lam * mid)
    residual = float(np.max(np.abs(side_a - side_b)))
    scale = float(np.max(np.abs(side_a) + np.abs(side_b))) or 1.0
    bound = 10.0 * scale * float(np.max(hp / mid)) ** 2
    return ScalingCheck(
        max_residual=residual, bound=bound, max_spacing=float(np.max(hp))
    )
