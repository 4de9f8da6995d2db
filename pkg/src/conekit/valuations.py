"""Tangent-cone densities of curve germs via normalized volumes of valuations.

For a one-Puiseux-pair germ (d, e) with cone angle 2 pi beta the density of
the best-approximating Calabi-Yau cone is

    nu = e d gamma^2           (2 gamma = 1/e + 1/d + beta - 1)
                                for  1 - 1/d - 1/e < beta < 1 - 1/d + 1/e,
    nu = d beta + 1 - d        above that threshold (product jump).

The same number is the minimum over monomial valuation weights (x, y) of
F(x, y) = (x + y - (1 - beta) min(d x, e y))^2 / (4 x y), which this module
also minimizes numerically as an independent route.  Ordinary d-fold points
and the tangent smooth pair y (y - x^2) get their own regime maps; the
order-k tangency family has a closed-form stable angle range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .errors import InvalidGerm, NonKlt, NumericFailure
from .exact import Number
from .pk_cone import PKCone, product_cone, quasi_regular_cone, regular_cone

QUASI_REGULAR_CONE = "quasi-regular-cone"
PRODUCT_JUMP = "product-jump"
COLLAPSED = "collapsed"
NON_KLT = "non-klt"


@dataclass(frozen=True)
class GermSpec:
    """Local curve-germ descriptor with its angle parameters."""

    kind: str  # irreducible | ordinary | tangent-pair | ak
    d: int | None = None
    e: int | None = None
    k: int | None = None
    betas: tuple[Number, ...] = ()


@dataclass(frozen=True)
class TangentConeResult:
    regime: str
    density: Number | None
    cone: PKCone | None = None
    minimizer_ray: Number | None = None
    flags: tuple[str, ...] = ()


def _check_puiseux(d: int, e: int) -> None:
    if not (isinstance(d, int) and isinstance(e, int)):
        raise InvalidGerm("Puiseux pair must be integers")
    if not (2 <= d < e):
        raise InvalidGerm(f"need 2 <= d < e, got ({d}, {e})")
    if math.gcd(d, e) != 1:
        raise InvalidGerm(f"({d}, {e}) not coprime")


def lct_irreducible(d: int, e: int) -> Fraction:
    """Log canonical threshold 1/d + 1/e of a one-Puiseux-pair germ."""
    _check_puiseux(d, e)
    return Fraction(1, d) + Fraction(1, e)


def beta_star(d: int, e: int) -> Fraction:
    """Jump threshold 1 - 1/d + 1/e of the tangent cone."""
    _check_puiseux(d, e)
    return 1 - Fraction(1, d) + Fraction(1, e)


def density_irreducible(d: int, e: int, beta: Number) -> TangentConeResult:
    """Closed-form volume density across the klt range of the angle."""
    _check_puiseux(d, e)
    wall = 1 - lct_irreducible(d, e)
    if beta < wall:
        raise NonKlt(f"beta = {beta} below the klt wall {wall}")
    if beta == wall:
        return TangentConeResult(regime=COLLAPSED, density=beta * 0)
    threshold = beta_star(d, e)
    if beta < threshold:
        cone = quasi_regular_cone(e, d, (Fraction(1, e), Fraction(1, d), beta))
        return TangentConeResult(
            regime=QUASI_REGULAR_CONE,
            density=cone.density,
            cone=cone,
            minimizer_ray=Fraction(d, e) if isinstance(beta, Rational) else d / e,
        )
    gamma_star = d * beta + 1 - d
    cone = product_cone(1, gamma_star)
    return TangentConeResult(
        regime=PRODUCT_JUMP, density=gamma_star, cone=cone, minimizer_ray=gamma_star
    )


# --- numerical minimization of the normalized-volume objective -----------

_INV_PHI = 2 / (1 + math.sqrt(5))


def _golden_bracket(f, lo: float, hi: float, width: float, max_iter: int = 300):
    """Shrink [lo, hi] around the minimum of a unimodal f by golden section."""
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= width:
            return lo, hi
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
    raise NumericFailure(f"golden-section did not reach width {width}")


def valuation_objective(d: int, e: int, beta: float, x: float, y: float) -> float:
    """F(x, y) = (x + y - (1 - beta) min(d x, e y))^2 / (4 x y)."""
    a = x + y - (1 - beta) * min(d * x, e * y)
    return a * a / (4 * x * y)


def _objective_slope(d: int, e: int, beta: float, y: float) -> float:
    """dF/dy at x = 1, branch-aware away from the kink y = d/e."""
    slope_a = 1.0 - (1.0 - beta) * e if e * y < d else 1.0
    a = 1.0 + y - (1.0 - beta) * min(d * 1.0, e * y)
    return a * (2.0 * slope_a * y - a) / (4.0 * y * y)


@dataclass(frozen=True)
class MinimizeResult:
    min_value: float
    minimizer_ray: float


def _branch_min(d, e, b, lo, hi, coarse):
    """Golden-section bracketing plus a slope-sign bisection polish.

    Function values alone cannot localize a smooth minimum below the square
    root of machine precision, so after bracketing we bisect on the sign of
    the objective's own derivative (still nothing but the stated formula).
    """
    glo, ghi = _golden_bracket(lambda y: valuation_objective(d, e, b, 1.0, y), lo, hi, coarse)
    pad = 10.0 * (ghi - glo)
    blo, bhi = max(lo, glo - pad), min(hi, ghi + pad)
    slo, shi = _objective_slope(d, e, b, blo), _objective_slope(d, e, b, bhi)
    if slo >= 0.0:  # increasing from the left edge
        y = blo
    elif shi <= 0.0:  # still decreasing at the right edge
        y = bhi
    else:
        for _ in range(200):
            mid = 0.5 * (blo + bhi)
            if bhi - blo <= 1e-15 * max(1.0, abs(mid)):
                break
            if _objective_slope(d, e, b, mid) < 0.0:
                blo = mid
            else:
                bhi = mid
        y = 0.5 * (blo + bhi)
    return valuation_objective(d, e, b, 1.0, y), y


def minimize_F(d: int, e: int, beta: Number, tol: float = 1e-9) -> MinimizeResult:
    """Minimize the normalized-volume objective over rays y / x.

    The objective is homogeneous of degree zero, so x = 1 is fixed and the
    two smooth branches on either side of the kink y = d/e are minimized by
    bracketed search; the kink itself is always a candidate.  Ties between
    branch minima resolve to the smaller ray.
    """
    _check_puiseux(d, e)
    if tol <= 0:
        raise ValueError("tol must be positive")
    wall = 1 - lct_irreducible(d, e)
    if beta <= wall:
        raise NonKlt(f"beta = {beta} at or below the klt wall {wall}")
    b = float(beta)
    kink = d / e
    coarse = max(min(tol, 1e-6), 1e-8)
    lo_v, lo_y = _branch_min(d, e, b, kink / 64.0, kink, coarse)
    hi_v, hi_y = _branch_min(d, e, b, kink, 3.0, coarse)
    candidates = [(lo_v, lo_y), (hi_v, hi_y), (valuation_objective(d, e, b, 1.0, kink), kink)]
    value, ray = min(candidates)
    return MinimizeResult(min_value=value, minimizer_ray=ray)


# --- ordinary multiple points ---------------------------------------------


def density_ordinary(betas) -> TangentConeResult:
    """Volume density of an ordinary d-fold point with weights betas.

    Inside the spherical-metric (Troyanov) region the cone is regular with
    nu = gamma^2; on and beyond its non-collapsing wall the cone jumps to
    the product of the smallest-angle factor with a merged one:
    nu = beta_1 * gamma_star, 1 - gamma_star = sum_{j >= 2} (1 - beta_j).
    """
    bs = tuple(sorted(betas))
    if len(bs) < 2:
        raise InvalidGerm("ordinary point needs at least two lines")
    if any(not (0 < b < 1) for b in bs):
        raise InvalidGerm("weights must lie in (0, 1)")
    deficit = sum(1 - b for b in bs)
    if deficit > 2:
        raise NonKlt(f"sum(1 - beta) = {deficit} >= 2")
    if deficit == 2:
        return TangentConeResult(regime=COLLAPSED, density=deficit * 0)
    excess = 2 - deficit  # = 2 + sum(beta - 1) > 0
    b1 = bs[0]
    if excess < 2 * b1:
        cone = regular_cone(bs)
        return TangentConeResult(
            regime=QUASI_REGULAR_CONE, density=cone.density, cone=cone
        )
    gamma_star = 1 - sum(1 - b for b in bs[1:])
    cone = product_cone(b1, gamma_star)
    return TangentConeResult(regime=PRODUCT_JUMP, density=b1 * gamma_star, cone=cone)


# --- tangential smooth pair, local model y (y - x^2) ----------------------


def classify_tangent_pair(beta1: Number, beta2: Number) -> TangentConeResult:
    """Regimes of a smooth pair with second-order tangency.

    The degree-two cover (u, v) = (x^2, y) turns the germ into three lines
    with weights (1/2, beta1, beta2); the spherical region downstairs is the
    open rhombus |beta2 - beta1| < 1/2, beta1 + beta2 within (1/2, 3/2), and
    there nu = (2 beta1 + 2 beta2 - 1)^2 / 8.  Exit regimes beyond the three
    non-collapsing walls are product extrapolations and carry the
    `conjectural` flag; on the walls themselves both formulas agree.
    """
    if not (0 < beta1 < 1 and 0 < beta2 < 1):
        raise InvalidGerm("weights must lie in (0, 1)")
    half = Fraction(1, 2)
    total = beta1 + beta2
    if total < half:
        return TangentConeResult(regime=NON_KLT, density=None)
    if total == half:
        return TangentConeResult(regime=COLLAPSED, density=total * 0)
    if total >= 3 * half:
        nu = total - 1
        cone = product_cone(1, nu)
        flags = ("conjectural",) if total > 3 * half else ()
        return TangentConeResult(PRODUCT_JUMP, nu, cone=cone, flags=flags)
    if beta2 >= beta1 + half:
        nu = (2 * beta2 - 1) * beta1
        cone = product_cone(2 * beta2 - 1, beta1)
        flags = ("conjectural",) if beta2 > beta1 + half else ()
        return TangentConeResult(PRODUCT_JUMP, nu, cone=cone, flags=flags)
    if beta2 <= beta1 - half:
        nu = (2 * beta1 - 1) * beta2
        cone = product_cone(2 * beta1 - 1, beta2)
        flags = ("conjectural",) if beta2 < beta1 - half else ()
        return TangentConeResult(PRODUCT_JUMP, nu, cone=cone, flags=flags)
    cone = quasi_regular_cone(2, 1, (half, beta1, beta2))
    return TangentConeResult(QUASI_REGULAR_CONE, cone.density, cone=cone)


def ak_stable_range(k: int) -> tuple[Fraction, Fraction]:
    """Open angle range in which an order-k tangency germ stays stable."""
    if not isinstance(k, int) or k < 1:
        raise InvalidGerm("k must be an integer >= 1")
    return (Fraction(k - 1, 2 * k + 2), Fraction(k + 3, 2 * k + 2))


# --- JSON wire format ------------------------------------------------------


def parse_germ(document: dict) -> GermSpec:
    from .errors import ParseError
    from .exact import parse_number

    if not isinstance(document, dict) or "kind" not in document:
        raise ParseError('germ document needs a "kind" field')
    kind = document["kind"]
    if kind == "irreducible":
        return GermSpec(
            kind=kind,
            d=int(document["d"]),
            e=int(document["e"]),
            betas=(parse_number(document["beta"]),),
        )
    if kind == "ordinary":
        return GermSpec(kind=kind, betas=tuple(parse_number(b) for b in document["betas"]))
    if kind == "tangent-pair":
        return GermSpec(
            kind=kind,
            betas=(parse_number(document["beta1"]), parse_number(document["beta2"])),
        )
    if kind == "ak":
        return GermSpec(kind=kind, k=int(document["k"]))
    raise ParseError(f"unknown germ kind {kind!r}")


def result_json(res: TangentConeResult) -> dict:
    from .exact import num_json
    from .pk_cone import cone_json

    return {
        "regime": res.regime,
        "density": num_json(res.density) if res.density is not None else None,
        "cone": cone_json(res.cone) if res.cone is not None else None,
        "minimizer_ray": num_json(res.minimizer_ray)
        if res.minimizer_ray is not None
        else None,
        "flags": list(res.flags),
    }
