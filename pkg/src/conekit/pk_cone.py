"""Flat Kahler cone models at stable points: classification and invariants.

A stable multiple point of multiplicity d >= 3 has a regular cone whose
angle parameter gamma satisfies 2*gamma = 2 + sum(beta_k - 1); a double
point has the product of two one-dimensional cones.  Quasi-regular cones
(branched covers of regular ones) arise from curve germs and are built by
the valuations module, never by cone_at_point.

Volume density nu is the link volume divided by 2 pi^2, the volume of the
unit round 3-sphere: gamma^2 (regular), beta1*beta2 (product), p*q times
the underlying regular density (quasi-regular).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .arrangement import MultiplePoint, WeightedArrangement, check_klt_at, check_troyanov_at
from .errors import NotProduct, NotStable, UnsupportedCone
from .exact import Number

REGULAR = "regular"
QUASI_REGULAR = "quasi-regular"
PRODUCT = "product"

#: |b1 - b2| below this means equal factors when the inputs are floats.
FLOAT_EQUALITY_TOL = 1e-12


@dataclass(frozen=True)
class PKCone:
    """Classified tangent-cone model with its volume density."""

    kind: str
    angles: tuple[Number, ...] = ()          # weights along the conical lines
    gamma: Number | None = None              # regular / quasi-regular only
    factors: tuple[Number, Number] | None = None  # product only
    cover: tuple[int, int] | None = None     # (p, q) for quasi-regular
    density: Number = field(default=None)

    def __post_init__(self):
        if self.kind == REGULAR:
            if not (0 < self.gamma < 1):
                raise ValueError("regular cone needs 0 < gamma < 1")
            object.__setattr__(self, "density", self.gamma * self.gamma)
        elif self.kind == PRODUCT:
            b1, b2 = self.factors
            object.__setattr__(self, "density", b1 * b2)
        elif self.kind == QUASI_REGULAR:
            p, q = self.cover
            object.__setattr__(self, "density", p * q * self.gamma * self.gamma)
        else:
            raise ValueError(f"unknown cone kind {self.kind!r}")
        if not (0 < self.density <= 1):
            raise ValueError("volume density must lie in (0, 1]")


def regular_cone(angles) -> PKCone:
    angles = tuple(angles)
    gamma = (2 + sum(b - 1 for b in angles)) / 2
    return PKCone(kind=REGULAR, angles=angles, gamma=gamma)


def product_cone(b1, b2) -> PKCone:
    return PKCone(kind=PRODUCT, angles=(b1, b2), factors=(b1, b2))


def quasi_regular_cone(p: int, q: int, angles) -> PKCone:
    """Pull-back of the regular cone over `angles` by (z, w) -> (z^p, w^q)."""
    angles = tuple(angles)
    gamma = (2 + sum(b - 1 for b in angles)) / 2
    return PKCone(kind=QUASI_REGULAR, angles=angles, gamma=gamma, cover=(p, q))


def cone_at_point(point: MultiplePoint, arr: WeightedArrangement) -> PKCone:
    """Tangent cone at a stable multiple point of the arrangement."""
    from .exact import fmt_rational

    bs = point.betas(arr)
    if not (check_klt_at(point, arr) and check_troyanov_at(point, arr)):
        loc = ":".join(fmt_rational(c) for c in point.location)
        weights = ", ".join(fmt_rational(b) for b in bs)
        raise NotStable(
            f"point ({loc}) with weights ({weights}) is not stable", point=point
        )
    if point.multiplicity == 2:
        return product_cone(bs[0], bs[1])
    return regular_cone(bs)


def classify_reeb(cone: PKCone) -> str:
    """Orbit behaviour of the Reeb field: regular, quasi-regular or irregular.

    Rationality of the factor ratio is decided by the declared input type:
    exact inputs use exact arithmetic, floats are treated as irrational
    except for equality within FLOAT_EQUALITY_TOL.  Floats are never
    reconstructed into rationals.
    """
    if cone.kind == REGULAR:
        return "regular"
    if cone.kind == QUASI_REGULAR:
        return "quasi-regular"
    b1, b2 = cone.factors
    if isinstance(b1, Rational) and isinstance(b2, Rational):
        return "regular" if b1 == b2 else "quasi-regular"
    if abs(float(b1) - float(b2)) <= FLOAT_EQUALITY_TOL:
        return "regular"
    return "irregular"


@dataclass(frozen=True)
class SpectrumQuery:
    cone: PKCone
    cutoff: Number

    def __post_init__(self):
        if not math.isfinite(float(self.cutoff)):
            raise ValueError("cutoff must be finite")


def holomorphic_spectrum(query: SpectrumQuery) -> list[Number]:
    """Degrees of homogeneous holomorphic functions up to the cutoff.

    Regular cone: {m / gamma, m >= 0}.  Product cone: {m/b1 + n/b2,
    m, n >= 0}.  Sorted ascending, duplicates retained.
    """
    cone, cutoff = query.cone, query.cutoff
    if cone.kind == REGULAR:
        step = 1 / cone.gamma
        out = []
        m = 0
        while m * step <= cutoff:
            out.append(m * step)
            m += 1
        return out
    if cone.kind == PRODUCT:
        b1, b2 = cone.factors
        s1, s2 = 1 / b1, 1 / b2
        out = []
        m = 0
        while m * s1 <= cutoff:
            base = m * s1
            n = 0
            while base + n * s2 <= cutoff:
                out.append(base + n * s2)
                n += 1
            m += 1
        out.sort()
        return out
    raise UnsupportedCone("holomorphic spectrum computed for regular and product cones")


@dataclass(frozen=True)
class DecayRate:
    """Admissible decay rates (0, mu_max) toward the tangent cone."""

    mu_max: Number
    lambda_h: Number           # first holomorphic degree strictly above 2
    flags: tuple[str, ...] = ("holomorphic-bound-only",)

    @property
    def interval(self) -> tuple[int, Number]:
        return (0, self.mu_max)


def decay_rate_mu(cone: PKCone) -> DecayRate:
    """mu_max = min(lambda_H - 2, 1) with lambda_H from the holomorphic spectrum.

    The bound uses holomorphic degrees as a stand-in for the first growth
    rate above two of a homogeneous harmonic function, hence the
    `holomorphic-bound-only` flag; the full harmonic spectrum would need
    link eigenvalues that have no closed form.
    """
    cutoff = 4
    while True:
        above = [s for s in holomorphic_spectrum(SpectrumQuery(cone, cutoff)) if s > 2]
        if above:
            lam = min(above)
            break
        cutoff *= 2  # spectrum is unbounded, so this terminates
    mu = min(lam - 2, 1)
    return DecayRate(mu_max=mu, lambda_h=lam)


@dataclass(frozen=True)
class HomogeneousPair:
    """Exponent data of h = |z1|^(2 b1) - |z2|^(2 b2) and of r^2."""

    exponents: tuple[Number, Number]
    radius_exponents: tuple[Number, Number]


def two_homogeneous_function(cone: PKCone) -> HomogeneousPair:
    """The 2-homogeneous Reeb-invariant harmonic function of a product cone."""
    if cone.kind != PRODUCT:
        raise NotProduct("only product cones carry the dilation-difference function")
    b1, b2 = cone.factors
    return HomogeneousPair(exponents=(2 * b1, 2 * b2), radius_exponents=(2 * b1, 2 * b2))


@dataclass(frozen=True)
class LinkVolume:
    volume: float                  # 2 pi^2 nu
    density: Number
    fiber_length: float | None = None  # 2 pi gamma, regular cones
    base_area: float | None = None     # pi gamma, regular cones


def link_volume(cone: PKCone) -> LinkVolume:
    """Total volume of the link metric; fiber and base data when regular."""
    vol = 2 * math.pi**2 * float(cone.density)
    if cone.kind == REGULAR:
        g = float(cone.gamma)
        return LinkVolume(vol, cone.density, fiber_length=2 * math.pi * g,
                          base_area=math.pi * g)
    return LinkVolume(vol, cone.density)


# --- JSON wire format ------------------------------------------------------


def cone_json(cone: PKCone) -> dict:
    from .exact import num_json

    out = {"kind": cone.kind, "density": num_json(cone.density)}
    if cone.angles:
        out["angles"] = [num_json(b) for b in cone.angles]
    if cone.gamma is not None:
        out["gamma"] = num_json(cone.gamma)
    if cone.factors is not None:
        out["factors"] = [num_json(b) for b in cone.factors]
    if cone.cover is not None:
        out["cover"] = list(cone.cover)
    return out


def spectrum_json(values) -> dict:
    from .exact import fmt_rational

    return {
        "values": [float(v) for v in values],
        "exact": [
            fmt_rational(Fraction(v)) if isinstance(v, Rational) else None
            for v in values
        ],
    }
