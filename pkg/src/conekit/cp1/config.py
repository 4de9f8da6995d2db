"""Point configurations on the line and their flat-metric regimes.

A configuration of distinct points a_j with weights beta_j in (0, 1)
carries the flat metric with density prod |xi - a_j|^(2 beta_j - 2).  The
angle deficit s = sum(1 - beta_j) decides the global shape: s = 2 closes
the metric smoothly at infinity, s < 1 leaves a cone end, s = 1 a
cylindrical end, and 1 < s < 2 a conical point at infinity.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Rational

from ..errors import OutOfModel, ParseError
from ..exact import Number, parse_number

#: slack for regime equalities when the weights are floats
FLOAT_REGIME_TOL = 1e-12

CLOSED_FLAT = "closed-flat"
ASYMPTOTIC_CONE = "asymptotic-cone"
CYLINDER = "cylinder"
CLOSED_WITH_ANGLE_AT_INFINITY = "closed-with-angle-at-infinity"


@dataclass(frozen=True)
class PointConfig:
    points: tuple[complex, ...]
    betas: tuple[Number, ...]

    def __init__(self, points, betas):
        points = tuple(complex(p) for p in points)
        betas = tuple(betas)
        if len(points) != len(betas) or not points:
            raise ParseError("need equally many points and weights, at least one")
        for i in range(len(points)):
            for j in range(i + 1, len(points)):
                if points[i] == points[j]:
                    raise ParseError(f"points {i} and {j} coincide")
        for b in betas:
            if not (0 < b < 1):
                raise OutOfModel(f"weight {b} not in (0, 1)")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "betas", betas)

    @property
    def n(self) -> int:
        return len(self.points)

    def deficit(self) -> Number:
        """Total angle deficit s = sum(1 - beta_j)."""
        return sum(1 - b for b in self.betas)

    def diameter(self) -> float:
        return max(
            abs(p - q) for i, p in enumerate(self.points) for q in self.points[i + 1 :]
        ) if self.n > 1 else 0.0

    def exponents(self) -> list[float]:
        """Density exponents 2 beta_j - 2."""
        return [2 * float(b) - 2 for b in self.betas]


@dataclass(frozen=True)
class Regime:
    kind: str
    gamma: Number | None = None      # asymptotic-cone: angle of the cone end
    beta_infinity: Number | None = None  # closed-with-angle-at-infinity


def classify_regime(cfg: PointConfig) -> Regime:
    """Shape of the flat metric by its total angle deficit.

    Deficits above 2 would require a cone angle above 4 pi at infinity and
    are rejected.  Exact weights classify exactly; float weights snap to
    the equalities s = 1, 2 within FLOAT_REGIME_TOL.
    """
    s = cfg.deficit()
    exact = all(isinstance(b, Rational) for b in cfg.betas)
    if not exact:
        for target in (1, 2):
            if abs(float(s) - target) <= FLOAT_REGIME_TOL:
                s = target
                break
    if s == 2:
        return Regime(kind=CLOSED_FLAT)
    if s == 1:
        return Regime(kind=CYLINDER)
    if 0 < s < 1:
        return Regime(kind=ASYMPTOTIC_CONE, gamma=1 - s)
    if 1 < s < 2:
        return Regime(kind=CLOSED_WITH_ANGLE_AT_INFINITY, beta_infinity=s - 1)
    raise OutOfModel(f"total angle deficit {s} exceeds the closed-flat value 2")


@dataclass(frozen=True)
class PeriodPath:
    """Straight segment between two marked points, with its clearance."""

    from_index: int
    to_index: int
    clearance: float

    def __post_init__(self):
        assert self.clearance > 0


def _segment_distance(p: complex, z0: complex, z1: complex) -> float:
    """Distance from p to the open segment (z0, z1)."""
    d = z1 - z0
    t = ((p - z0) / d).real if d != 0 else 0.0
    t = min(max(t, 0.0), 1.0)
    return abs(p - (z0 + t * d))


def make_path(cfg: PointConfig, from_index: int, to_index: int) -> PeriodPath:
    if from_index == to_index:
        raise ParseError("period endpoints must differ")
    if not (0 <= from_index < cfg.n and 0 <= to_index < cfg.n):
        raise ParseError("period endpoint index out of range")
    z0, z1 = cfg.points[from_index], cfg.points[to_index]
    clearance = min(
        (
            _segment_distance(p, z0, z1)
            for k, p in enumerate(cfg.points)
            if k not in (from_index, to_index)
        ),
        default=abs(z1 - z0),
    )
    if clearance <= 0:
        raise ParseError("a marked point lies on the period segment")
    return PeriodPath(from_index=from_index, to_index=to_index, clearance=clearance)


def parse_config(document: dict) -> PointConfig:
    """Parse {"points": [["re","im"], ...], "betas": ["p/q" | float, ...]}."""
    if not isinstance(document, dict):
        raise ParseError("configuration document must be a JSON object")
    try:
        raw_points = document["points"]
        raw_betas = document["betas"]
    except KeyError as exc:
        raise ParseError(f"missing field {exc.args[0]!r}") from exc
    points = []
    for entry in raw_points:
        if not isinstance(entry, list) or len(entry) != 2:
            raise ParseError("each point must be a [re, im] pair")
        re, im = (float(parse_number(v)) for v in entry)
        points.append(complex(re, im))
    betas = [parse_number(b) for b in raw_betas]
    return PointConfig(points, betas)
