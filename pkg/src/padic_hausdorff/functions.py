"""
Function Model
Separable functions f(p^{-k} u) = g(k) a(u) on Q_p^n: a radial profile g over
scale indices times a locally constant angular factor a on the unit sphere
S_0. Includes the extremal families used by the sharpness checks.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

from .geometry import (
    coset_count,
    coset_index,
    sphere_fraction,
    unit_sphere_cosets,
)
from .models.geometry import PowerWeight
from .numerics import LogMagnitude, cancellation_tolerance
from .piecewise import PiecewiseExpPoly
from .utils.error_handling import DimensionMismatch, ParameterOutOfRange

logger = logging.getLogger(__name__)


class ProfileKind(Enum):
    """Radial profile families"""
    FINITE_WINDOW = "finite_window"
    POWER_LAW = "power_law"
    POWER_LAW_TRUNCATED_BELOW = "power_law_truncated_below"
    LOG_SCALE = "log_scale"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class RadialProfile:
    """
    Radial profile g over scale indices, g(k) = f on the sphere |x|_p = p^k.

    FINITE_WINDOW: ``values`` on start, start+1, ...; zero elsewhere.
    POWER_LAW: coefficient * p^{k s}.
    POWER_LAW_TRUNCATED_BELOW: coefficient * p^{k s} for k >= cutoff, else 0.
    LOG_SCALE: coefficient * k, i.e. coefficient * log_p |x|_p.
    COMPOSITE: an explicit piecewise exponential polynomial (operator outputs).
    """
    kind: ProfileKind
    start: int = 0
    values: Tuple[float, ...] = ()
    exponent: float = 0.0
    cutoff: int = 0
    coefficient: float = 1.0
    piecewise: Optional[PiecewiseExpPoly] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind == ProfileKind.FINITE_WINDOW:
            if not self.values:
                raise ParameterOutOfRange("finite window profile needs at least one value")
            if not all(math.isfinite(v) for v in self.values):
                raise ParameterOutOfRange("finite window values must be finite")
        if not math.isfinite(self.exponent):
            raise ParameterOutOfRange(f"profile exponent must be finite, got {self.exponent}")
        if not math.isfinite(self.coefficient):
            raise ParameterOutOfRange(f"profile coefficient must be finite, got {self.coefficient}")
        if self.kind == ProfileKind.COMPOSITE and self.piecewise is None:
            raise ParameterOutOfRange("composite profile needs a piecewise body")

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def finite_window(cls, start: int, values) -> 'RadialProfile':
        return cls(ProfileKind.FINITE_WINDOW, start=int(start), values=tuple(float(v) for v in values))

    @classmethod
    def indicator(cls, k: int) -> 'RadialProfile':
        """Profile of the sphere indicator chi_{S_k}."""
        return cls.finite_window(k, [1.0])

    @classmethod
    def power_law(cls, s: float, coefficient: float = 1.0) -> 'RadialProfile':
        return cls(ProfileKind.POWER_LAW, exponent=float(s), coefficient=float(coefficient))

    @classmethod
    def constant(cls, c: float) -> 'RadialProfile':
        return cls.power_law(0.0, c)

    @classmethod
    def truncated_below(cls, s: float, cutoff: int = 0, coefficient: float = 1.0) -> 'RadialProfile':
        return cls(
            ProfileKind.POWER_LAW_TRUNCATED_BELOW,
            exponent=float(s),
            cutoff=int(cutoff),
            coefficient=float(coefficient),
        )

    @classmethod
    def log_scale(cls, coefficient: float = 1.0) -> 'RadialProfile':
        return cls(ProfileKind.LOG_SCALE, coefficient=float(coefficient))

    @classmethod
    def composite(cls, body: PiecewiseExpPoly) -> 'RadialProfile':
        return cls(ProfileKind.COMPOSITE, piecewise=body)

    # ------------------------------------------------------------------
    # Properties
    # ------------------------------------------------------------------

    @property
    def is_normable(self) -> bool:
        """False for log profiles, which lie in no global L^q_w."""
        return self.kind != ProfileKind.LOG_SCALE

    @property
    def is_constant(self) -> bool:
        return self.kind == ProfileKind.POWER_LAW and self.exponent == 0.0

    def as_piecewise(self, p: int) -> PiecewiseExpPoly:
        """Lower to the piecewise exponential-polynomial form."""
        if self.kind == ProfileKind.FINITE_WINDOW:
            return PiecewiseExpPoly.from_values(p, self.start, self.values)
        if self.kind == ProfileKind.COMPOSITE:
            if self.piecewise.p != p:
                raise DimensionMismatch(f"profile built for p={self.piecewise.p}, used with p={p}")
            return self.piecewise
        scale = LogMagnitude.from_real(self.coefficient, p)
        if self.kind == ProfileKind.POWER_LAW:
            return PiecewiseExpPoly.monomial(p, self.exponent, scale=scale)
        if self.kind == ProfileKind.POWER_LAW_TRUNCATED_BELOW:
            return PiecewiseExpPoly.monomial(p, self.exponent, lo=self.cutoff, scale=scale)
        return PiecewiseExpPoly.monomial(p, 0.0, scale=scale, coefficients=(0.0, 1.0))

    def scaled(self, c: float) -> 'RadialProfile':
        if self.kind == ProfileKind.FINITE_WINDOW:
            return RadialProfile.finite_window(self.start, [c * v for v in self.values])
        if self.kind == ProfileKind.COMPOSITE:
            return RadialProfile.composite(self.piecewise.scaled(c))
        return RadialProfile(
            self.kind, exponent=self.exponent, cutoff=self.cutoff, coefficient=c * self.coefficient
        )


def evaluate_profile(p: int, f: RadialProfile, k: int) -> LogMagnitude:
    """g(p^k); finite windows vanish outside their window."""
    if f.kind == ProfileKind.FINITE_WINDOW:
        index = k - f.start
        if 0 <= index < len(f.values):
            return LogMagnitude.from_real(f.values[index], p)
        return LogMagnitude.zero(p)
    if f.kind == ProfileKind.POWER_LAW:
        return LogMagnitude.from_real(f.coefficient, p) * LogMagnitude.from_power(p, k * f.exponent)
    if f.kind == ProfileKind.POWER_LAW_TRUNCATED_BELOW:
        if k < f.cutoff:
            return LogMagnitude.zero(p)
        return LogMagnitude.from_real(f.coefficient, p) * LogMagnitude.from_power(p, k * f.exponent)
    if f.kind == ProfileKind.LOG_SCALE:
        return LogMagnitude.from_real(f.coefficient * k, p)
    return f.as_piecewise(p)(k)


@dataclass(frozen=True)
class AngularFactor:
    """
    Locally constant function on S_0.

    ``level`` 0 is the constant factor ``values[0]``; at level j >= 1 there is
    one value per coset of p^j Z_p^n in S_0, in coset enumeration order.
    """
    p: int
    n: int
    level: int = 0
    values: Tuple[float, ...] = (1.0,)

    def __post_init__(self):
        if self.level < 0:
            raise ParameterOutOfRange(f"angular level must be >= 0, got {self.level}")
        expected = 1 if self.level == 0 else coset_count(self.p, self.n, self.level)
        if len(self.values) != expected:
            raise ParameterOutOfRange(
                f"level-{self.level} angular factor needs {expected} values, got {len(self.values)}",
                details={"p": self.p, "n": self.n, "level": self.level},
            )
        if not all(math.isfinite(v) for v in self.values):
            raise ParameterOutOfRange("angular values must be finite")

    @classmethod
    def constant(cls, p: int, n: int, c: float = 1.0) -> 'AngularFactor':
        return cls(p, n, 0, (float(c),))

    @classmethod
    def from_values(cls, p: int, n: int, level: int, values) -> 'AngularFactor':
        return cls(p, n, int(level), tuple(float(v) for v in values))

    @property
    def is_constant(self) -> bool:
        return self.level == 0 or len(set(self.values)) == 1

    @property
    def cell_measure(self) -> LogMagnitude:
        """Measure of one level cell; the whole S_0 at level 0."""
        if self.level == 0:
            return sphere_fraction(self.p, self.n)
        return LogMagnitude.from_power(self.p, -self.level * self.n)

    def integral(self) -> LogMagnitude:
        """Integral over S_0."""
        total = math.fsum(self.values)
        if abs(total) <= cancellation_tolerance() * math.fsum(abs(v) for v in self.values):
            return LogMagnitude.zero(self.p)
        return LogMagnitude.from_real(total, self.p) * self.cell_measure

    def power_integral(self, r: float) -> LogMagnitude:
        """Integral over S_0 of |a|^r."""
        total = math.fsum(abs(v) ** r for v in self.values)
        return LogMagnitude.from_real(total, self.p) * self.cell_measure

    def norm(self, r: float) -> LogMagnitude:
        """L^r(S_0) norm; r = inf gives the maximum modulus."""
        if r < 1:
            raise ParameterOutOfRange(f"angular norm needs r >= 1, got {r}")
        if math.isinf(r):
            return LogMagnitude.from_real(max(abs(v) for v in self.values), self.p)
        return self.power_integral(r) ** (1.0 / r)

    def refine(self) -> 'AngularFactor':
        """Same function at the next level, values copied to child cosets."""
        if self.level == 0:
            count = coset_count(self.p, self.n, 1)
            return AngularFactor(self.p, self.n, 1, self.values * count)
        parents = coset_index(unit_sphere_cosets(self.p, self.n, self.level))
        children = unit_sphere_cosets(self.p, self.n, self.level + 1)
        values = tuple(self.values[parents[child.parent().residues]] for child in children)
        return AngularFactor(self.p, self.n, self.level + 1, values)

    def at_level(self, level: int) -> 'AngularFactor':
        if level < self.level:
            raise ParameterOutOfRange(f"cannot coarsen level {self.level} to {level}")
        factor = self
        while factor.level < level:
            factor = factor.refine()
        return factor

    def product(self, other: 'AngularFactor') -> 'AngularFactor':
        """Pointwise product, refined to the finer level."""
        if (self.p, self.n) != (other.p, other.n):
            raise DimensionMismatch(
                f"angular factors on different spaces: ({self.p}, {self.n}) vs ({other.p}, {other.n})"
            )
        level = max(self.level, other.level)
        a, b = self.at_level(level), other.at_level(level)
        return AngularFactor(self.p, self.n, level, tuple(x * y for x, y in zip(a.values, b.values)))

    def scaled(self, c: float) -> 'AngularFactor':
        return AngularFactor(self.p, self.n, self.level, tuple(c * v for v in self.values))


@dataclass(frozen=True)
class SeparableFunction:
    """f(p^{-k} u) = radial(k) * angular(u) for u in S_0."""
    radial: RadialProfile
    angular: AngularFactor

    @property
    def p(self) -> int:
        return self.angular.p

    @property
    def n(self) -> int:
        return self.angular.n

    @classmethod
    def radial_only(cls, p: int, n: int, radial: RadialProfile) -> 'SeparableFunction':
        return cls(radial, AngularFactor.constant(p, n))

    def scaled(self, c: float) -> 'SeparableFunction':
        return SeparableFunction(self.radial.scaled(c), self.angular)

    def value(self, k: int, coset: int = 0) -> LogMagnitude:
        """f at a point of S_k lying in the given angular cell."""
        angular = self.angular.values[0 if self.angular.level == 0 else coset]
        return evaluate_profile(self.p, self.radial, k) * angular


def angular_integral(p: int, n: int, a: AngularFactor) -> LogMagnitude:
    """Integral of a over S_0."""
    _check_space(p, n, a)
    return a.integral()


def angular_norm(p: int, n: int, a: AngularFactor, r: float) -> LogMagnitude:
    """(Integral over S_0 of |a|^r)^{1/r}."""
    _check_space(p, n, a)
    return a.norm(r)


def sphere_norm(
    p: int,
    n: int,
    f: SeparableFunction,
    k: int,
    q: float,
    w: Optional[PowerWeight] = None,
) -> LogMagnitude:
    """
    ||f chi_k||_{L^q_w} = |g(k)| p^{k(alpha+n)/q} (integral of |a|^q over S_0)^{1/q}.
    """
    if q < 1:
        raise ParameterOutOfRange(f"sphere norm needs q >= 1, got {q}")
    _check_space(p, n, f.angular)
    w = w or PowerWeight(0.0)
    radial = abs(evaluate_profile(p, f.radial, k))
    if radial.is_zero:
        return LogMagnitude.zero(p)
    if math.isinf(q):
        return radial * f.angular.norm(math.inf)
    return radial * LogMagnitude.from_power(p, k * (w.alpha + n) / q) * f.angular.norm(q)


def _check_space(p: int, n: int, a: AngularFactor) -> None:
    if (a.p, a.n) != (p, n):
        raise DimensionMismatch(
            f"function lives on Q_{a.p}^{a.n}, requested Q_{p}^{n}",
            details={"expected": (p, n), "found": (a.p, a.n)},
        )


class ExtremalFamily(Enum):
    """Extremal inputs of the sharpness arguments"""
    CENTRAL_MORREY_POWER = "central_morrey_power"
    HERZ_FAMILY = "herz_family"
    MORREY_HERZ_POWER = "morrey_herz_power"
    LOG_SYMBOL = "log_symbol"


def make_extremal(
    p: int,
    n: int,
    family: ExtremalFamily,
    alpha: float = 0.0,
    q: float = 1.0,
    lam: float = 0.0,
    beta: float = 0.0,
    r: int = 1,
) -> SeparableFunction:
    """
    Build an extremal input with constant angular factor.

    CENTRAL_MORREY_POWER: |x|^{(n+alpha) lam}, lam in (-1/q, 0).
    HERZ_FAMILY: |x|^{-beta-(n+alpha)/q-1/p^r} on |x| >= 1, zero inside.
    MORREY_HERZ_POWER: |x|^{-beta-(n+alpha)/q+lam}, lam > 0.
    LOG_SYMBOL: log_p |x|_p.

    Raises:
        ParameterOutOfRange: when the family constraints fail
    """
    if family == ExtremalFamily.CENTRAL_MORREY_POWER:
        if not -1.0 / q < lam < 0:
            raise ParameterOutOfRange(
                f"central Morrey extremal needs lambda in (-1/q, 0), got {lam} with q={q}",
                details={"lambda": lam, "q": q},
            )
        radial = RadialProfile.power_law((n + alpha) * lam)
    elif family == ExtremalFamily.HERZ_FAMILY:
        if r < 1:
            raise ParameterOutOfRange(f"Herz family index r must be >= 1, got {r}")
        radial = RadialProfile.truncated_below(-beta - (n + alpha) / q - p ** (-float(r)), 0)
    elif family == ExtremalFamily.MORREY_HERZ_POWER:
        if lam <= 0:
            raise ParameterOutOfRange(
                f"Morrey-Herz extremal needs lambda > 0, got {lam}", details={"lambda": lam}
            )
        radial = RadialProfile.power_law(-beta - (n + alpha) / q + lam)
    else:
        radial = RadialProfile.log_scale()
    logger.debug(f"Built {family.value} extremal: {radial}")
    return SeparableFunction.radial_only(p, n, radial)
