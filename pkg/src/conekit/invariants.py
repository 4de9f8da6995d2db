"""Global Chern-Weil and Euler-characteristic invariants of an arrangement.

The central quantity is the logarithmic second Chern class

    c2 = 3 + sum_j (beta_j - 1) chi(L_j^x) + sum_i (nu_i - 1),

where chi(L_j^x) is the Euler characteristic of the j-th line with its
multiple points removed and nu_i the volume density of the tangent cone at
the i-th multiple point.  For Calabi-Yau weights this number is the energy
(L^2 curvature norm over 8 pi^2) of the Ricci-flat metric.  All arithmetic
is exact rational; floats appear only on serialization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arrangement import (
    MultiplePoint,
    WeightedArrangement,
    check_cy,
    multiple_points,
    regime_report,
)
from .errors import NotCY, NotGeneric, NotStable
from .exact import fmt_rational, num_json
from .pk_cone import PKCone, cone_at_point


def chi_open_line(j: int, arr: WeightedArrangement) -> int:
    """Euler characteristic of line j minus the multiple points on it."""
    on_line = sum(1 for mp in multiple_points(arr) if j in mp.incident)
    return 2 - on_line


def _stable_cones(arr: WeightedArrangement) -> list[tuple[MultiplePoint, PKCone]]:
    report = regime_report(arr)
    for entry in report.points:
        if entry.regime != "stable":
            loc = ":".join(fmt_rational(c) for c in entry.point.location)
            raise NotStable(
                f"point ({loc}) is {entry.regime}", point=entry.point
            )
    return [(mp, cone_at_point(mp, arr)) for mp in multiple_points(arr)]


def energy(arr: WeightedArrangement) -> Fraction:
    """Logarithmic second Chern class; equals the metric energy when CY.

    Requires every multiple point to be stable, so that the tangent-cone
    densities are the classified ones.  The value itself does not use the
    CY condition; callers attach the energy label only in the CY case.
    """
    cones = _stable_cones(arr)
    chi = [chi_open_line(j, arr) for j in range(arr.n)]
    return (
        3
        + sum((b - 1) * c for b, c in zip(arr.betas, chi))
        + sum(cone.density - 1 for _, cone in cones)
    )


def energy_generic_closed_form(arr: WeightedArrangement) -> Fraction:
    """3/2 - (1/2) sum (1 - beta_j)^2, valid for generic CY arrangements."""
    if any(mp.multiplicity != 2 for mp in multiple_points(arr)):
        raise NotGeneric("arrangement has a point of multiplicity >= 3")
    if not check_cy(arr):
        raise NotCY("closed form requires sum(1 - beta) = 3")
    return Fraction(3, 2) - Fraction(1, 2) * sum((1 - b) ** 2 for b in arr.betas)


def tian_c2_generic(arr: WeightedArrangement) -> Fraction:
    """Second Chern number of the conical metric for normal crossings.

    On the plane with lines D_j: c2 = 3 - 2 sum(1-beta_j)
    + (1/2) sum_{j != k} (1-beta_j)(1-beta_k); the singular-divisor
    correction term vanishes because lines are smooth.
    """
    if any(mp.multiplicity != 2 for mp in multiple_points(arr)):
        raise NotGeneric("arrangement has a point of multiplicity >= 3")
    t = [1 - b for b in arr.betas]
    total = sum(t)
    return 3 - 2 * total + Fraction(1, 2) * (total * total - sum(x * x for x in t))


def weighted_euler(arr: WeightedArrangement) -> Fraction:
    """Euler characteristic with strata weighted by the metric density.

    Stratify the plane into the arrangement complement (density 1), the
    punctured lines (density beta_j) and the multiple points (density
    nu_i); additivity of chi under disjoint union gives

        e_nu = e(P^2 \\ C) + sum_j beta_j chi(L_j^x) + sum_i nu_i.
    """
    cones = _stable_cones(arr)
    chi = [chi_open_line(j, arr) for j in range(arr.n)]
    complement = 3 - sum(chi) - len(cones)
    return (
        complement
        + sum(b * c for b, c in zip(arr.betas, chi))
        + sum(cone.density for _, cone in cones)
    )


def c1_squared(arr: WeightedArrangement) -> Fraction:
    """Self-intersection of the first Chern class of the pair."""
    return arr.degree_deficit() ** 2


@dataclass(frozen=True)
class BmyReport:
    """Logarithmic Bogomolov-Miyaoka-Yau comparison 3 c2 >= c1^2."""

    lhs: Fraction
    rhs: Fraction
    defect: Fraction
    satisfied: bool
    flags: tuple[str, ...] = ("conjectural-chern-weil",)


def bmy_report(arr: WeightedArrangement) -> BmyReport:
    """Defect 3*c2 - c1^2 with densities standing in for the local orbifold
    Euler numbers of the algebraic comparison."""
    lhs = 3 * energy(arr)
    rhs = c1_squared(arr)
    return BmyReport(lhs=lhs, rhs=rhs, defect=lhs - rhs, satisfied=lhs - rhs >= 0)


@dataclass(frozen=True)
class InvariantReport:
    energy: Fraction | None          # only set for CY weights
    log_c2: Fraction
    c1_squared: Fraction
    bmy_defect: Fraction
    weighted_euler: Fraction
    parabolic_ch2: Fraction          # alias of log_c2, not an independent route
    per_line_chi: tuple[int, ...]
    per_point_density: tuple[Fraction, ...]
    flags: tuple[str, ...]


def invariant_report(arr: WeightedArrangement) -> InvariantReport:
    cones = _stable_cones(arr)
    value = energy(arr)
    cy = check_cy(arr)
    flags = ["conjectural-chern-weil"]
    if not cy:
        flags.append("non-CY")
    return InvariantReport(
        energy=value if cy else None,
        log_c2=value,
        c1_squared=c1_squared(arr),
        bmy_defect=3 * value - c1_squared(arr),
        weighted_euler=weighted_euler(arr),
        parabolic_ch2=value,
        per_line_chi=tuple(chi_open_line(j, arr) for j in range(arr.n)),
        per_point_density=tuple(cone.density for _, cone in cones),
        flags=tuple(flags),
    )


def report_json(report: InvariantReport) -> dict:
    return {
        "energy": num_json(report.energy) if report.energy is not None else None,
        "log_c2": num_json(report.log_c2),
        "c1_squared": num_json(report.c1_squared),
        "bmy_defect": num_json(report.bmy_defect),
        "weighted_euler": num_json(report.weighted_euler),
        "parabolic_ch2": num_json(report.parabolic_ch2),
        "per_line_chi": list(report.per_line_chi),
        "per_point_density": [num_json(d) for d in report.per_point_density],
        "flags": list(report.flags),
    }
