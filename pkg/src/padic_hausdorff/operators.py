"""
Hausdorff Operators
The rough multilinear Hausdorff operator, its commutator with radial symbols,
and the kernels Phi they average against. With |p^g |x|^{-1} y|_p = p^{-g}|x|_p
every output is radial:

    h(k) = (integral over S_0 of Omega prod a_i) * sum over g of Phi(p^g) p^{-g} prod g_i(k - g)

so the operator is a discrete convolution on the scale lattice.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

from .functions import AngularFactor, ProfileKind, RadialProfile, SeparableFunction
from .logging_config import LogContext
from .numerics import LogMagnitude
from .piecewise import PiecewiseExpPoly
from .utils.error_handling import DimensionMismatch, NonconvergentSum, ParameterOutOfRange

logger = logging.getLogger(__name__)

INF = math.inf


class KernelKind(Enum):
    """Kernel families on the scale lattice"""
    FINITE_SUPPORT = "finite_support"
    TWO_SIDED_POWER_DECAY = "two_sided_power_decay"
    PIECEWISE_POWER = "piecewise_power"


@dataclass(frozen=True)
class PhiKernel:
    """
    The kernel g -> Phi(p^g) >= 0.

    FINITE_SUPPORT: explicit values on finitely many scales.
    TWO_SIDED_POWER_DECAY: coefficient * p^{-decay |g|}, decay > 0.
    PIECEWISE_POWER: c+ p^{-a+ g} on g >= 0 and c- p^{a- g} on g < 0; either
    side may be absent.
    """
    kind: KernelKind
    support: Tuple[Tuple[int, float], ...] = ()
    coefficient: float = 1.0
    decay: float = 1.0
    positive: Optional[Tuple[float, float]] = None
    negative: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.kind == KernelKind.FINITE_SUPPORT:
            if any(value < 0 for _, value in self.support):
                raise ParameterOutOfRange("kernel values must be nonnegative")
            if len({g for g, _ in self.support}) != len(self.support):
                raise ParameterOutOfRange("kernel support lists a scale twice")
        elif self.kind == KernelKind.TWO_SIDED_POWER_DECAY:
            if self.coefficient < 0:
                raise ParameterOutOfRange("kernel coefficient must be nonnegative")
            if not self.decay > 0:
                raise ParameterOutOfRange(f"two-sided kernel needs decay > 0, got {self.decay}")
        else:
            for side in (self.positive, self.negative):
                if side is None:
                    continue
                c, a = side
                if c < 0 or not math.isfinite(a):
                    raise ParameterOutOfRange(f"invalid kernel side {side}")

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_mapping(cls, values: Dict[int, float]) -> 'PhiKernel':
        support = tuple(sorted((int(g), float(v)) for g, v in values.items() if v != 0))
        return cls(KernelKind.FINITE_SUPPORT, support=support)

    @classmethod
    def delta(cls, gamma: int, value: float = 1.0) -> 'PhiKernel':
        return cls.from_mapping({gamma: value})

    @classmethod
    def zero(cls) -> 'PhiKernel':
        return cls(KernelKind.FINITE_SUPPORT)

    @classmethod
    def two_sided(cls, coefficient: float, decay: float) -> 'PhiKernel':
        return cls(KernelKind.TWO_SIDED_POWER_DECAY, coefficient=float(coefficient), decay=float(decay))

    @classmethod
    def piecewise_power(
        cls,
        positive: Optional[Tuple[float, float]] = None,
        negative: Optional[Tuple[float, float]] = None,
    ) -> 'PhiKernel':
        return cls(KernelKind.PIECEWISE_POWER, positive=positive, negative=negative)

    @classmethod
    def hardy(cls, n: int) -> 'PhiKernel':
        """Phi(t) = |t|_p^{n-1} chi_{B(0,1)}(t) read on scales: p^{-g(n-1)} for g >= 0."""
        return cls.piecewise_power(positive=(1.0, float(n - 1)))

    # ------------------------------------------------------------------
    # Views
    # ------------------------------------------------------------------

    @property
    def has_finite_support(self) -> bool:
        return self.kind == KernelKind.FINITE_SUPPORT

    def sides(self) -> List[Tuple[float, float, float, float]]:
        """(lo, hi, coefficient, rate) blocks with Phi(p^g) = coefficient p^{rate g}."""
        if self.kind == KernelKind.FINITE_SUPPORT:
            return [(g, g, v, 0.0) for g, v in self.support]
        if self.kind == KernelKind.TWO_SIDED_POWER_DECAY:
            return [
                (0, INF, self.coefficient, -self.decay),
                (-INF, -1, self.coefficient, self.decay),
            ]
        blocks = []
        if self.positive is not None and self.positive[0] != 0:
            blocks.append((0, INF, self.positive[0], -self.positive[1]))
        if self.negative is not None and self.negative[0] != 0:
            blocks.append((-INF, -1, self.negative[0], self.negative[1]))
        return blocks

    def value(self, p: int, gamma: int) -> float:
        """Phi(p^gamma)."""
        for lo, hi, c, rate in self.sides():
            if lo <= gamma <= hi:
                return c * float(p) ** (rate * gamma)
        return 0.0

    def as_piecewise(self, p: int) -> PiecewiseExpPoly:
        """g -> Phi(p^g) as a piecewise exponential polynomial."""
        pieces = [
            PiecewiseExpPoly.monomial(p, rate, lo, hi, scale=LogMagnitude.from_real(c, p))
            for lo, hi, c, rate in self.sides()
            if c != 0
        ]
        return reduce(lambda x, y: x + y, pieces, PiecewiseExpPoly.zero(p))

    def weight(self, p: int) -> PiecewiseExpPoly:
        """g -> Phi(p^g) / p^g, the convolution weight of the operator."""
        return self.as_piecewise(p) * PiecewiseExpPoly.monomial(p, -1.0)


def kernel_sum(
    p: int,
    kernel: PhiKernel,
    exponent: float,
    degree: int = 0,
    lo: float = -INF,
    hi: float = INF,
) -> LogMagnitude:
    """
    Signed sum over lo <= g <= hi of Phi(p^g) g^degree p^{-g exponent}.

    Raises:
        NonconvergentSum: when the series diverges
    """
    body = kernel.as_piecewise(p)
    if degree:
        body = body * PiecewiseExpPoly.monomial(p, 0.0, coefficients=[0.0] * degree + [1.0])
    return body.weighted_sum(-exponent, lo, hi)


# ----------------------------------------------------------------------
# Operators
# ----------------------------------------------------------------------

def _check_inputs(p: int, n: int, omega: AngularFactor, fs: Sequence[SeparableFunction]) -> None:
    if not fs:
        raise DimensionMismatch("the operator needs at least one input function")
    for item in [omega] + [f.angular for f in fs]:
        if (item.p, item.n) != (p, n):
            raise DimensionMismatch(
                f"input lives on Q_{item.p}^{item.n}, operator on Q_{p}^{n}",
                details={"expected": (p, n), "found": (item.p, item.n)},
            )


def _angular_constant(omega: AngularFactor, fs: Sequence[SeparableFunction]) -> LogMagnitude:
    """Integral over S_0 of Omega prod a_i."""
    return reduce(lambda a, f: a.product(f.angular), fs, omega).integral()


def _radial_product(p: int, fs: Sequence[SeparableFunction]) -> PiecewiseExpPoly:
    bodies = [f.radial.as_piecewise(p) for f in fs]
    return reduce(lambda a, b: a * b, bodies[1:], bodies[0])


def apply_hausdorff(
    p: int,
    n: int,
    kernel: PhiKernel,
    omega: AngularFactor,
    fs: Sequence[SeparableFunction],
) -> RadialProfile:
    """
    Radial profile of the rough multilinear Hausdorff operator applied to fs.

    Raises:
        NonconvergentSum: when the scale sum diverges
        DimensionMismatch: when inputs live on different spaces
    """
    _check_inputs(p, n, omega, fs)
    with LogContext(logger, "apply_hausdorff", m=len(fs)):
        constant = _angular_constant(omega, fs)
        if constant.is_zero:
            return RadialProfile.composite(PiecewiseExpPoly.zero(p))
        body = kernel.weight(p).convolve(_radial_product(p, fs))
        return RadialProfile.composite(body.scaled(constant))


def _symbol_body(p: int, b: SeparableFunction) -> PiecewiseExpPoly:
    if not b.angular.is_constant:
        raise ParameterOutOfRange("commutator symbols must be radial")
    return b.radial.as_piecewise(p).scaled(b.angular.values[0])


def _is_constant_symbol(b: SeparableFunction) -> bool:
    return b.radial.is_constant or b.radial.as_piecewise(b.p).is_zero


def apply_commutator(
    p: int,
    n: int,
    kernel: PhiKernel,
    omega: AngularFactor,
    bs: Sequence[SeparableFunction],
    fs: Sequence[SeparableFunction],
) -> RadialProfile:
    """
    Radial profile of the commutator with symbols bs:

        h(k) = I * sum over g of Phi(p^g) p^{-g} prod (b_i(k) - b_i(k - g)) prod g_i(k - g)

    Finite-support kernels accept any radial symbols. Kernels of infinite
    support accept log-scale symbols, whose differences are c_i g, and
    constants.

    Raises:
        ParameterOutOfRange: for non-radial symbols, or general symbols
            against an infinite kernel
        DimensionMismatch: when len(bs) != len(fs) or spaces differ
    """
    _check_inputs(p, n, omega, fs)
    if len(bs) != len(fs):
        raise DimensionMismatch(f"{len(bs)} symbols for {len(fs)} functions")
    for b in bs:
        if (b.p, b.n) != (p, n):
            raise DimensionMismatch(f"symbol lives on Q_{b.p}^{b.n}, operator on Q_{p}^{n}")

    zero = RadialProfile.composite(PiecewiseExpPoly.zero(p))
    symbols = [_symbol_body(p, b) for b in bs]
    if any(_is_constant_symbol(b) for b in bs):
        return zero

    with LogContext(logger, "apply_commutator", m=len(fs)):
        constant = _angular_constant(omega, fs)
        if constant.is_zero:
            return zero
        product = _radial_product(p, fs)

        if kernel.has_finite_support:
            total = PiecewiseExpPoly.zero(p)
            for gamma, phi in kernel.support:
                differences = [b - b.shifted(gamma) for b in symbols]
                factor = reduce(lambda x, y: x * y, differences)
                weight = LogMagnitude.from_real(phi, p) * LogMagnitude.from_power(p, -gamma)
                total = total + (factor * product.shifted(gamma)).scaled(weight)
            return RadialProfile.composite(total.scaled(constant))

        if not all(b.radial.kind == ProfileKind.LOG_SCALE for b in bs):
            raise ParameterOutOfRange(
                "kernels of infinite support need log-scale or constant symbols",
                details={"kinds": [b.radial.kind.value for b in bs]},
            )
        slope = math.prod(b.radial.coefficient * b.angular.values[0] for b in bs)
        m = len(bs)
        difference = PiecewiseExpPoly.monomial(
            p, 0.0, scale=LogMagnitude.from_real(slope, p), coefficients=[0.0] * m + [1.0]
        )
        body = (kernel.weight(p) * difference).convolve(product)
        return RadialProfile.composite(body.scaled(constant))


def hardy_average(p: int, n: int, f: SeparableFunction, k: int) -> LogMagnitude:
    """(1/|x|^n) integral over B(0, |x|) of f, for |x|_p = p^k."""
    body = f.radial.as_piecewise(p)
    integral = body.weighted_sum(float(n), -INF, k)
    return f.angular.integral() * integral * LogMagnitude.from_power(p, -n * k)


def output_function(p: int, n: int, profile: RadialProfile) -> SeparableFunction:
    """Wrap an operator output as a function with constant angular factor."""
    return SeparableFunction.radial_only(p, n, profile)
