"""Flat conical metrics on the projective line: regimes, areas, periods."""

from .config import (
    ASYMPTOTIC_CONE,
    CLOSED_FLAT,
    CLOSED_WITH_ANGLE_AT_INFINITY,
    CYLINDER,
    PeriodPath,
    PointConfig,
    Regime,
    classify_regime,
    make_path,
    parse_config,
)
from .kernels import kernel_backend
from .periods import PeriodResult, ScPolygon, period, sc_polygon
from .quadrature import AreaResult, area

__all__ = [
    "ASYMPTOTIC_CONE",
    "CLOSED_FLAT",
    "CLOSED_WITH_ANGLE_AT_INFINITY",
    "CYLINDER",
    "AreaResult",
    "PeriodPath",
    "PeriodResult",
    "PointConfig",
    "Regime",
    "ScPolygon",
    "area",
    "classify_regime",
    "kernel_backend",
    "make_path",
    "parse_config",
    "period",
    "sc_polygon",
]
