"""Curvature of the base, of connection metrics, and of general cohomogeneity-one metrics."""
from .connection import (
    UNIT_LABELS,
    AuditEntry,
    CurvComponent,
    UnitFrameCurvature,
    audit_table,
    bianchi_residuals,
    canonical,
    compute_oracle,
    connection_curvature,
    connection_data,
    sample_points,
    table_lookup,
)
from .frame import CYCLIC, ORDERED_PAIRS, CurvatureFrame, base_curvature, compute_frame, frame_from_polys, third
from .general import DegenerateMetric, GeneralMetricData, GZ2Curvature, all_components, general_curvature

__all__ = [
    "AuditEntry",
    "CYCLIC",
    "CurvComponent",
    "CurvatureFrame",
    "DegenerateMetric",
    "GZ2Curvature",
    "GeneralMetricData",
    "ORDERED_PAIRS",
    "UNIT_LABELS",
    "UnitFrameCurvature",
    "all_components",
    "audit_table",
    "base_curvature",
    "bianchi_residuals",
    "canonical",
    "compute_frame",
    "compute_oracle",
    "connection_curvature",
    "connection_data",
    "frame_from_polys",
    "general_curvature",
    "sample_points",
    "table_lookup",
    "third",
]
