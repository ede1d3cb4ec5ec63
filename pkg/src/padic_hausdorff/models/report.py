"""
Report Models
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional


class ReportStatus(Enum):
    """Outcome of a verification"""
    PASS = "pass"
    FAIL = "fail"
    DIVERGES = "diverges"
    ERROR = "error"


class Theorem(Enum):
    """Verification targets"""
    T31 = "T31"
    T32 = "T32"
    T33 = "T33"
    T34I = "T34i"
    T34II = "T34ii"
    T35 = "T35"
    T41I = "T41i"
    T41II = "T41ii"
    T42 = "T42"
    T43 = "T43"
    COR44 = "Cor44"
    HARDY = "HARDY"

    @classmethod
    def parse(cls, value: str) -> 'Theorem':
        for member in cls:
            if member.value.lower() == str(value).lower():
                return member
        raise ValueError(f"unknown theorem id: {value!r}")


SHARPNESS_THEOREMS = (Theorem.T31, Theorem.T33, Theorem.T35, Theorem.T41II)


class VerificationMode(Enum):
    """Direction of a theorem check"""
    SHARPNESS = "sharpness"
    SUFFICIENCY = "sufficiency"


@dataclass
class VerificationReport:
    """One verification outcome"""
    scenario_id: str
    theorem: str
    lhs: float
    rhs: float
    rel_err_or_constant: float
    status: ReportStatus
    seed: Optional[int] = None
    wall_ms: float = 0.0
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == ReportStatus.PASS

    def to_dict(self) -> Dict[str, Any]:
        """Flat record in report column order, details last"""
        return {
            "scenario_id": self.scenario_id,
            "theorem": self.theorem,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "rel_err_or_constant": self.rel_err_or_constant,
            "status": self.status.value,
            "seed": self.seed,
            "wall_ms": self.wall_ms,
            "details": self.details,
        }

    @classmethod
    def diverges(cls, scenario_id: str, theorem: str, seed: Optional[int] = None,
                 **details) -> 'VerificationReport':
        return cls(scenario_id, theorem, math.inf, math.inf, math.inf,
                   ReportStatus.DIVERGES, seed, details=details)
