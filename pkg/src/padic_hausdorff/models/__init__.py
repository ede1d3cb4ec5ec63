"""
Lab Models
Core data models for the p-adic Hausdorff lab
"""

from .geometry import Region, RegionKind, PowerWeight, UnitSphereCoset
from .weight import WeightClassification, SandwichReport, MeanBoundReport
from .report import (
    ReportStatus, Theorem, VerificationMode, VerificationReport, SHARPNESS_THEOREMS,
)

__all__ = [
    # Geometry models
    "Region",
    "RegionKind",
    "PowerWeight",
    "UnitSphereCoset",

    # Weight models
    "WeightClassification",
    "SandwichReport",
    "MeanBoundReport",

    # Report models
    "ReportStatus",
    "Theorem",
    "VerificationMode",
    "VerificationReport",
    "SHARPNESS_THEOREMS",
]
