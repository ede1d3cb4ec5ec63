"""
Geometry Models
Centered regions, power weights and unit-sphere cosets.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple


class RegionKind(Enum):
    """Centered region shapes"""
    BALL = "ball"
    SPHERE = "sphere"


@dataclass(frozen=True)
class Region:
    """Ball B_scale = {|x| <= p^scale} or sphere S_scale = {|x| = p^scale}"""
    kind: RegionKind
    scale: int

    @classmethod
    def ball(cls, scale: int) -> 'Region':
        return cls(RegionKind.BALL, int(scale))

    @classmethod
    def sphere(cls, scale: int) -> 'Region':
        return cls(RegionKind.SPHERE, int(scale))


@dataclass(frozen=True)
class PowerWeight:
    """Weight w(x) = |x|_p^alpha"""
    alpha: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ValueError(f"weight exponent must be finite, got {self.alpha}")

    def is_locally_integrable(self, n: int) -> bool:
        return self.alpha > -n


@dataclass(frozen=True)
class UnitSphereCoset:
    """
    Coset of p^level Z_p^n inside the unit sphere S_0.

    ``residues`` holds one residue mod p^level per coordinate; at least one
    residue is a unit so the coset lies in S_0.
    """
    p: int
    level: int
    residues: Tuple[int, ...]

    @property
    def measure_exponent(self) -> int:
        """Base-p exponent of the coset measure p^{-level n}."""
        return -self.level * len(self.residues)

    @property
    def digits(self) -> Tuple[Tuple[int, ...], ...]:
        """Base-p digits of each residue, least significant first."""
        return tuple(
            tuple((r // self.p ** d) % self.p for d in range(self.level))
            for r in self.residues
        )

    def parent(self) -> 'UnitSphereCoset':
        """The coset one level up that contains this one."""
        if self.level == 1:
            raise ValueError("level-1 cosets have no parent in S_0")
        modulus = self.p ** (self.level - 1)
        return UnitSphereCoset(self.p, self.level - 1, tuple(r % modulus for r in self.residues))
