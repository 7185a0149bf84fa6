"""Parametric-resonance instability of polygonal ring configurations."""

from ._kernels import BACKEND
from .core import (
    CentralConfiguration,
    DegenerateConfigurationError,
    DomainError,
    G_CGS,
    KM,
    PrimaryBody,
    RingresError,
    SatelliteRecord,
    SingularityError,
    ValidationError,
)
from .floquet import monodromy, tongue_scan, verify_zone
from .polygon import alpha_density, corrected_rotation, polygon_sum, ring_bulk_properties
from .resonance import (
    InstabilityZone,
    ResonanceSpec,
    ScanMode,
    critical_radius,
    negative_alpha_zones,
    parametric_order,
    scan,
    zone_center,
    zone_width,
)
from .satellite import HillCoefficient, build_hill_coefficient, hill_coefficient_at
from .tworing import TwoRingSystem, stability_report

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CentralConfiguration",
    "DegenerateConfigurationError",
    "DomainError",
    "G_CGS",
    "HillCoefficient",
    "InstabilityZone",
    "KM",
    "PrimaryBody",
    "ResonanceSpec",
    "RingresError",
    "SatelliteRecord",
    "ScanMode",
    "SingularityError",
    "TwoRingSystem",
    "ValidationError",
    "alpha_density",
    "build_hill_coefficient",
    "corrected_rotation",
    "critical_radius",
    "hill_coefficient_at",
    "monodromy",
    "negative_alpha_zones",
    "parametric_order",
    "polygon_sum",
    "ring_bulk_properties",
    "scan",
    "stability_report",
    "tongue_scan",
    "verify_zone",
    "zone_center",
    "zone_width",
]
