"""Piecewise-polynomial connection metrics, C^2 gluing and smoothness checks."""
from __future__ import annotations

from .metric import (
    MetricFormatError,
    Piece,
    PiecewiseFunc,
    PiecewiseMetric,
    build_p2_metric,
    hermite_c2_glue,
    load_metric,
    map_to_3L,
    metric_from_json,
    p2_metric_data,
)
from .smoothness import (
    SmoothnessEntry,
    SmoothnessReport,
    check_gen_smooth,
    check_smoothness,
    connection_jets_at_zero,
)

__all__ = [
    "MetricFormatError", "Piece", "PiecewiseFunc", "PiecewiseMetric", "SmoothnessEntry",
    "SmoothnessReport", "build_p2_metric", "check_gen_smooth", "check_smoothness",
    "connection_jets_at_zero", "hermite_c2_glue", "load_metric", "map_to_3L",
    "metric_from_json", "p2_metric_data",
]
