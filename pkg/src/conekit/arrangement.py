"""Exact combinatorics and admissibility of weighted line arrangements.

Lines live in the projective plane and carry rational cone-angle weights
beta in (0, 1).  Everything here is exact: coefficients and weights are
Fractions, intersection points are computed by rational cross products, and
all admissibility conditions are strict rational (in)equalities.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import DuplicateLine, ParseError, WeightOutOfRange
from .exact import fmt_rational, parse_rational

Triple = tuple[Fraction, Fraction, Fraction]


def _canonical(triple) -> Triple:
    """Scale so the first nonzero entry equals 1 (canonical representative)."""
    t = tuple(Fraction(c) for c in triple)
    for c in t:
        if c != 0:
            return tuple(x / c for x in t)
    raise ParseError("projective triple must not be identically zero")


@dataclass(frozen=True)
class ProjLine:
    """Line {a x + b y + c z = 0}, stored by its canonical coefficient triple."""

    coeffs: Triple

    def __init__(self, coeffs):
        object.__setattr__(self, "coeffs", _canonical(coeffs))

    def contains(self, point: Triple) -> bool:
        a, b, c = self.coeffs
        x, y, z = point
        return a * x + b * y + c * z == 0

    def __repr__(self):
        return "ProjLine(%s)" % ", ".join(fmt_rational(c) for c in self.coeffs)


@dataclass(frozen=True)
class WeightedArrangement:
    """Pairwise-distinct projective lines with weights 0 < beta_j < 1."""

    lines: tuple[ProjLine, ...]
    betas: tuple[Fraction, ...]

    def __init__(self, lines, betas):
        lines = tuple(l if isinstance(l, ProjLine) else ProjLine(l) for l in lines)
        betas = tuple(Fraction(b) for b in betas)
        if len(lines) != len(betas):
            raise ParseError(
                f"{len(lines)} lines but {len(betas)} weights"
            )
        seen = {}
        for idx, line in enumerate(lines):
            if line.coeffs in seen:
                raise DuplicateLine(
                    f"lines {seen[line.coeffs]} and {idx} coincide: {line!r}"
                )
            seen[line.coeffs] = idx
        for idx, b in enumerate(betas):
            if not (0 < b < 1):
                raise WeightOutOfRange(f"beta_{idx} = {fmt_rational(b)} not in (0, 1)")
        object.__setattr__(self, "lines", lines)
        object.__setattr__(self, "betas", betas)

    @property
    def n(self) -> int:
        return len(self.lines)

    def degree_deficit(self) -> Fraction:
        """3 - sum(1 - beta_j); sign decides the global regime."""
        return 3 - sum((1 - b) for b in self.betas)


@dataclass(frozen=True)
class MultiplePoint:
    """Intersection point with the indices of the lines through it."""

    location: Triple
    incident: tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.incident)

    def betas(self, arr: WeightedArrangement) -> tuple[Fraction, ...]:
        return tuple(arr.betas[j] for j in self.incident)


def _cross(u: Triple, v: Triple) -> Triple:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def multiple_points(arr: WeightedArrangement) -> list[MultiplePoint]:
    """All points where two or more lines meet, sorted lexicographically.

    Each unordered pair of distinct projective lines meets in exactly one
    point, so grouping the pairwise cross products by canonical coordinates
    yields every multiple point once; a point of multiplicity d accounts for
    C(d, 2) pairs.
    """
    buckets: dict[Triple, set[int]] = {}
    for i, j in itertools.combinations(range(arr.n), 2):
        p = _canonical(_cross(arr.lines[i].coeffs, arr.lines[j].coeffs))
        buckets.setdefault(p, set()).update((i, j))
    points = [
        MultiplePoint(loc, tuple(sorted(inc))) for loc, inc in buckets.items()
    ]
    points.sort(key=lambda mp: mp.location)
    assert sum(comb(p.multiplicity, 2) for p in points) == comb(arr.n, 2)
    return points


def check_cy(arr: WeightedArrangement) -> bool:
    """Calabi-Yau degree condition: sum(1 - beta_j) equals 3 exactly."""
    return arr.degree_deficit() == 0


def check_klt_at(point: MultiplePoint, arr: WeightedArrangement) -> bool:
    """Local integrability at the point: sum of (1 - beta) over incident < 2."""
    return sum(1 - b for b in point.betas(arr)) < 2


def check_troyanov_at(point: MultiplePoint, arr: WeightedArrangement) -> bool:
    """Angle condition for a spherical link metric, hence a stable cone.

    For multiplicity d >= 3: 0 < 2 + sum(beta - 1) < 2 min(beta).  Double
    points always pass: the local model is the metric product of two
    one-dimensional cones, which exists for any weight pair.
    """
    bs = point.betas(arr)
    if len(bs) == 2:
        return True
    excess = 2 + sum(b - 1 for b in bs)
    return 0 < excess < 2 * min(bs)


def spherical_liftable(point: MultiplePoint, arr: WeightedArrangement) -> bool:
    """Whether the link carries a spherical metric (equal weights if d = 2)."""
    bs = point.betas(arr)
    if len(bs) == 2:
        return bs[0] == bs[1]
    return check_troyanov_at(point, arr)


@dataclass(frozen=True)
class PointRegime:
    point: MultiplePoint
    klt: bool
    troyanov: bool
    regime: str  # stable | jumped | non-klt
    spherical_liftable: bool


@dataclass(frozen=True)
class RegimeReport:
    points: tuple[PointRegime, ...]
    global_regime: str  # CY | fano | general-type | none

    @property
    def all_stable(self) -> bool:
        return all(p.regime == "stable" for p in self.points)


def regime_report(arr: WeightedArrangement) -> RegimeReport:
    """Classify each multiple point and the global sign of the pair degree."""
    entries = []
    for mp in multiple_points(arr):
        klt = check_klt_at(mp, arr)
        tro = check_troyanov_at(mp, arr)
        if not klt:
            regime = "non-klt"
        elif tro:
            regime = "stable"
        else:
            regime = "jumped"
        entries.append(
            PointRegime(mp, klt, tro, regime, spherical_liftable(mp, arr))
        )
    if arr.n == 0:
        glob = "none"
    else:
        deficit = arr.degree_deficit()
        glob = "CY" if deficit == 0 else ("fano" if deficit > 0 else "general-type")
    return RegimeReport(tuple(entries), glob)


# --- JSON wire format ------------------------------------------------------


def parse_arrangement(document: dict) -> WeightedArrangement:
    """Parse {"lines": [{"coeffs": ["a","b","c"]}, ...], "betas": ["p/q", ...]}."""
    if not isinstance(document, dict):
        raise ParseError("arrangement document must be a JSON object")
    try:
        raw_lines = document["lines"]
        raw_betas = document["betas"]
    except KeyError as exc:
        raise ParseError(f"missing field {exc.args[0]!r}") from exc
    if not isinstance(raw_lines, list) or not isinstance(raw_betas, list):
        raise ParseError('"lines" and "betas" must be arrays')
    lines = []
    for entry in raw_lines:
        if not isinstance(entry, dict) or "coeffs" not in entry:
            raise ParseError('each line must be an object with a "coeffs" triple')
        coeffs = entry["coeffs"]
        if not isinstance(coeffs, list) or len(coeffs) != 3:
            raise ParseError('"coeffs" must be a triple')
        lines.append(ProjLine(tuple(parse_rational(c) for c in coeffs)))
    betas = [parse_rational(b) for b in raw_betas]
    return WeightedArrangement(lines, betas)


def serialize_arrangement(arr: WeightedArrangement) -> dict:
    return {
        "lines": [
            {"coeffs": [fmt_rational(c) for c in line.coeffs]} for line in arr.lines
        ],
        "betas": [fmt_rational(b) for b in arr.betas],
    }
