"""
p-adic Geometry
Valuations and norms of rationals, Haar measures of centered balls and
spheres (plain and power-weighted), and the coset partition of the unit
sphere S_0 used to integrate locally constant angular functions.
"""

import itertools
import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from .config import get_config
from .models.geometry import PowerWeight, Region, RegionKind, UnitSphereCoset
from .numerics import LogMagnitude, geometric_tail_sum, one_minus_power
from .utils.error_handling import (
    NonconvergentSum,
    ResourceLimit,
    is_positive_integer,
    is_prime,
    validate_parameters,
)

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction, str]


def _as_fraction(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _integer_valuation(value: int, p: int) -> int:
    value = abs(value)
    v = 0
    while value % p == 0:
        v += 1
        value //= p
    return v


@validate_parameters(p=is_prime)
def padic_valuation(p: int, x: Rational) -> Union[int, float]:
    """
    p-adic valuation v_p(x) of a rational number.

    Returns math.inf for x = 0.

    Examples:
        >>> padic_valuation(3, 12)
        1
        >>> padic_valuation(3, "9/2")
        2
    """
    x = _as_fraction(x)
    if x == 0:
        return math.inf
    return _integer_valuation(x.numerator, p) - _integer_valuation(x.denominator, p)


def padic_valuation_norm(p: int, x: Rational) -> LogMagnitude:
    """|x|_p = p^{-v_p(x)}, exactly zero for x = 0."""
    v = padic_valuation(p, x)
    if v == math.inf:
        return LogMagnitude.zero(p)
    return LogMagnitude.from_power(p, -v)


def sphere_fraction(p: int, n: int) -> LogMagnitude:
    """|S_0| = 1 - p^{-n}."""
    return LogMagnitude(1, 0.0, p, math.log(one_minus_power(p, n)))


def measure(p: int, n: int, region: Region) -> LogMagnitude:
    """Haar measure: |B_g| = p^{n g}, |S_g| = p^{n g}(1 - p^{-n})."""
    ball = LogMagnitude.from_power(p, n * region.scale)
    if region.kind == RegionKind.BALL:
        return ball
    return ball * sphere_fraction(p, n)


def weighted_measure(p: int, n: int, region: Region, weight: PowerWeight) -> LogMagnitude:
    """
    w(region) for w = |x|_p^alpha.

    Sphere: p^{g(alpha+n)}(1 - p^{-n}).
    Ball: p^{g(alpha+n)}(1 - p^{-n}) / (1 - p^{-(alpha+n)}).

    Raises:
        NonconvergentSum: for a ball when alpha <= -n
    """
    c = weight.alpha + n
    if region.kind == RegionKind.SPHERE:
        return LogMagnitude.from_power(p, region.scale * c) * sphere_fraction(p, n)
    if c <= 0:
        raise NonconvergentSum(
            f"|x|^{weight.alpha} is not integrable near 0 in dimension {n}",
            details={"p": p, "n": n, "alpha": weight.alpha, "scale": region.scale},
        )
    return geometric_tail_sum(p, c, region.scale) * sphere_fraction(p, n)


def coset_count(p: int, n: int, level: int) -> int:
    """Number of level cosets in S_0: p^{level n} - p^{(level-1) n}."""
    return p ** (level * n) - p ** ((level - 1) * n)


@validate_parameters(p=is_prime, n=is_positive_integer, level=is_positive_integer)
def unit_sphere_cosets(
    p: int,
    n: int,
    level: int,
    cap: Optional[int] = None,
) -> List[UnitSphereCoset]:
    """
    Enumerate the cosets of p^level Z_p^n that partition S_0.

    Cosets come in mixed-radix order of their residue vectors, last coordinate
    fastest. Each has measure p^{-level n}.

    Raises:
        ResourceLimit: when the count exceeds ``cap`` (config default 10^6)
    """
    if cap is None:
        cap = get_config().geometry.coset_cap
    count = coset_count(p, n, level)
    if count > cap:
        raise ResourceLimit(
            f"{count} cosets at level {level} exceed the cap of {cap}",
            details={"p": p, "n": n, "level": level, "cap": cap},
        )

    cosets = [
        UnitSphereCoset(p, level, residues)
        for residues in itertools.product(range(p ** level), repeat=n)
        if any(r % p for r in residues)
    ]
    logger.debug(f"Enumerated {len(cosets)} cosets of S_0 (p={p}, n={n}, level={level})")
    return cosets


def refine_coset(coset: UnitSphereCoset) -> List[UnitSphereCoset]:
    """The p^n children of a coset at the next level, in enumeration order."""
    p, level = coset.p, coset.level
    step = p ** level
    lifts = [
        [r + step * digit for digit in range(p)]
        for r in coset.residues
    ]
    children = [UnitSphereCoset(p, level + 1, residues) for residues in itertools.product(*lifts)]
    return sorted(children, key=lambda c: c.residues)


def coset_index(cosets: List[UnitSphereCoset]) -> Dict[Tuple[int, ...], int]:
    """Residue vector to position lookup."""
    return {c.residues: i for i, c in enumerate(cosets)}
