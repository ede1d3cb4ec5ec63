"""
Log-Domain Numerics
Signed magnitudes carried as base-p exponents, stable signed sums, and the
closed-form geometric and polynomial-geometric series used by every measure,
norm and constant in the lab.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .config import get_config
from .utils.error_handling import NonconvergentSum, ParameterOutOfRange, ResourceLimit

logger = logging.getLogger(__name__)

Real = Union[int, float]

def cancellation_tolerance() -> float:
    """Signed sums below this fraction of their absolute sum are exact zeros."""
    return get_config().numerics.cancellation_tolerance


@dataclass(frozen=True)
class LogMagnitude:
    """
    Signed real number ``sign * base**exponent * exp(correction)``.

    ``correction`` is a small natural-log adjustment that keeps conversions
    from floats exact to a few ulps; callers normally ignore it. An exponent
    of +inf with a nonzero sign represents a divergent quantity.
    """
    sign: int
    exponent: float
    base: int
    correction: float = field(default=0.0, repr=False, compare=False)

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign}")
        if self.base < 2:
            raise ValueError(f"base must be at least 2, got {self.base}")
        if math.isnan(self.exponent) or math.isnan(self.correction):
            raise ValueError("LogMagnitude exponent is NaN")
        if self.sign == 0 or self.exponent == -math.inf:
            object.__setattr__(self, "sign", 0)
            object.__setattr__(self, "exponent", 0.0)
            object.__setattr__(self, "correction", 0.0)

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, base: int) -> 'LogMagnitude':
        return cls(0, 0.0, base)

    @classmethod
    def one(cls, base: int) -> 'LogMagnitude':
        return cls(1, 0.0, base)

    @classmethod
    def diverges(cls, base: int, sign: int = 1) -> 'LogMagnitude':
        """The value reported for a divergent series."""
        return cls(sign, math.inf, base)

    @classmethod
    def from_power(cls, base: int, exponent: Real, sign: int = 1) -> 'LogMagnitude':
        """``sign * base**exponent``."""
        return cls(sign, float(exponent), base)

    @classmethod
    def from_real(cls, value: Real, base: int) -> 'LogMagnitude':
        """Convert a float; the round trip is exact to a few ulps."""
        value = float(value)
        if value == 0.0:
            return cls.zero(base)
        if math.isnan(value):
            raise ValueError("cannot represent NaN")
        sign = 1 if value > 0 else -1
        if math.isinf(value):
            return cls.diverges(base, sign)

        magnitude = abs(value)
        exponent = math.log(magnitude) / math.log(base)
        correction = 0.0
        try:
            anchor = float(base) ** exponent
        except OverflowError:
            anchor = math.inf
        if 0.0 < anchor < math.inf:
            correction = math.log(magnitude / anchor)
        return cls(sign, exponent, base, correction)

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    @property
    def is_finite(self) -> bool:
        return self.sign == 0 or math.isfinite(self.exponent)

    @property
    def log_value(self) -> float:
        """Base-p logarithm of the magnitude (-inf for zero)."""
        if self.sign == 0:
            return -math.inf
        return self.exponent + self.correction / math.log(self.base)

    @property
    def natural_log(self) -> float:
        if self.sign == 0:
            return -math.inf
        return self.exponent * math.log(self.base) + self.correction

    def to_real(self) -> float:
        if self.sign == 0:
            return 0.0
        if not math.isfinite(self.exponent):
            return self.sign * math.inf
        try:
            return self.sign * (float(self.base) ** self.exponent) * math.exp(self.correction)
        except OverflowError:
            return self.sign * math.inf

    def __float__(self) -> float:
        return self.to_real()

    def isclose(self, other: Union['LogMagnitude', Real], rel_tol: float = 1e-12) -> bool:
        """Relative comparison carried out in the log domain."""
        other = self._coerce(other)
        if self.sign != other.sign:
            return False
        if self.sign == 0:
            return True
        if not (self.is_finite and other.is_finite):
            return self.is_finite == other.is_finite
        return abs(math.expm1(self.natural_log - other.natural_log)) <= rel_tol

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _coerce(self, other: Union['LogMagnitude', Real]) -> 'LogMagnitude':
        if isinstance(other, LogMagnitude):
            if other.base != self.base:
                raise ValueError(f"base mismatch: {self.base} vs {other.base}")
            return other
        return LogMagnitude.from_real(other, self.base)

    def __neg__(self) -> 'LogMagnitude':
        return LogMagnitude(-self.sign, self.exponent, self.base, self.correction)

    def __abs__(self) -> 'LogMagnitude':
        return LogMagnitude(abs(self.sign), self.exponent, self.base, self.correction)

    def __mul__(self, other: Union['LogMagnitude', Real]) -> 'LogMagnitude':
        other = self._coerce(other)
        if self.sign == 0 or other.sign == 0:
            return LogMagnitude.zero(self.base)
        return LogMagnitude(
            self.sign * other.sign,
            self.exponent + other.exponent,
            self.base,
            self.correction + other.correction,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Union['LogMagnitude', Real]) -> 'LogMagnitude':
        other = self._coerce(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogMagnitude")
        if self.sign == 0:
            return LogMagnitude.zero(self.base)
        return LogMagnitude(
            self.sign * other.sign,
            self.exponent - other.exponent,
            self.base,
            self.correction - other.correction,
        )

    def __rtruediv__(self, other: Real) -> 'LogMagnitude':
        return LogMagnitude.from_real(other, self.base) / self

    def __pow__(self, power: Real) -> 'LogMagnitude':
        power = float(power)
        if power == 0.0:
            return LogMagnitude.one(self.base)
        if self.sign == 0:
            if power < 0:
                raise ZeroDivisionError("negative power of zero")
            return LogMagnitude.zero(self.base)
        sign = 1
        if self.sign < 0:
            if not power.is_integer():
                raise ValueError("fractional power of a negative value")
            sign = -1 if int(power) % 2 else 1
        return LogMagnitude(sign, self.exponent * power, self.base, self.correction * power)

    def __add__(self, other: Union['LogMagnitude', Real]) -> 'LogMagnitude':
        return log_combine(self.base, [self, self._coerce(other)])

    __radd__ = __add__

    def __sub__(self, other: Union['LogMagnitude', Real]) -> 'LogMagnitude':
        return log_combine(self.base, [self, -self._coerce(other)])

    def __rsub__(self, other: Real) -> 'LogMagnitude':
        return log_combine(self.base, [LogMagnitude.from_real(other, self.base), -self])

    # ------------------------------------------------------------------
    # Ordering
    # ------------------------------------------------------------------

    def _key(self) -> Tuple[int, float]:
        return (self.sign, self.sign * self.natural_log) if self.sign else (0, 0.0)

    def __lt__(self, other: Union['LogMagnitude', Real]) -> bool:
        return self._key() < self._coerce(other)._key()

    def __le__(self, other: Union['LogMagnitude', Real]) -> bool:
        return self._key() <= self._coerce(other)._key()

    def __gt__(self, other: Union['LogMagnitude', Real]) -> bool:
        return self._key() > self._coerce(other)._key()

    def __ge__(self, other: Union['LogMagnitude', Real]) -> bool:
        return self._key() >= self._coerce(other)._key()


@dataclass(frozen=True)
class TailExponent:
    """Per-step exponent c of a series sum p^{theta c}."""
    c: float

    def __post_init__(self):
        if not math.isfinite(self.c):
            raise ParameterOutOfRange(f"tail exponent must be finite, got {self.c}")

    def __float__(self) -> float:
        return float(self.c)


def _rate(c: Union[TailExponent, Real]) -> float:
    return float(c.c) if isinstance(c, TailExponent) else float(TailExponent(float(c)).c)


# ----------------------------------------------------------------------
# Signed sums
# ----------------------------------------------------------------------

def log_combine(
    p: int,
    terms: Iterable[LogMagnitude],
    tolerance: Optional[float] = None,
) -> LogMagnitude:
    """
    Signed sum of log-domain terms by factoring out the largest one.

    Returns an exact zero when the terms cancel below ``tolerance`` relative
    to the sum of their absolute values.
    """
    if tolerance is None:
        tolerance = cancellation_tolerance()
    live = []
    for term in terms:
        if term.base != p:
            raise ValueError(f"term base {term.base} differs from p={p}")
        if not term.is_zero:
            live.append(term)
    if not live:
        return LogMagnitude.zero(p)

    infinite = {t.sign for t in live if not t.is_finite}
    if infinite:
        if len(infinite) > 1:
            raise NonconvergentSum("sum of divergent terms with opposite signs")
        return LogMagnitude.diverges(p, infinite.pop())

    exponents = np.array([t.exponent for t in live])
    corrections = np.array([t.correction for t in live])
    signs = np.array([t.sign for t in live], dtype=float)
    logs = exponents * math.log(p) + corrections
    head = int(np.argmax(logs))

    relative = signs * np.power(float(p), exponents - exponents[head]) * np.exp(
        corrections - corrections[head]
    )
    total = math.fsum(relative.tolist())
    scale = math.fsum(np.abs(relative).tolist())
    if abs(total) <= tolerance * scale:
        return LogMagnitude.zero(p)
    return LogMagnitude(
        1 if total > 0 else -1,
        float(exponents[head]),
        p,
        float(corrections[head]) + math.log(abs(total)),
    )


def log_sum_signed(
    p: int,
    signs: np.ndarray,
    exponents: np.ndarray,
    axis: int = -1,
    tolerance: Optional[float] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Vectorised signed sum along ``axis`` of ``signs * p**exponents``.

    Returns (signs, exponents) of the sums; zero sums come back with sign 0
    and exponent -inf.
    """
    if tolerance is None:
        tolerance = cancellation_tolerance()
    signs = np.asarray(signs, dtype=float)
    exponents = np.where(signs == 0, -np.inf, np.asarray(exponents, dtype=float))
    head = np.max(exponents, axis=axis, keepdims=True)
    safe_head = np.where(np.isfinite(head), head, 0.0)
    with np.errstate(over="ignore", invalid="ignore"):
        relative = signs * np.power(float(p), exponents - safe_head)
    relative = np.where(signs == 0, 0.0, relative)
    total = np.sum(relative, axis=axis)
    scale = np.sum(np.abs(relative), axis=axis)
    safe_head = np.squeeze(safe_head, axis=axis)

    cancelled = (np.abs(total) <= tolerance * scale) | (scale == 0)
    out_signs = np.where(cancelled, 0.0, np.sign(total))
    with np.errstate(divide="ignore"):
        out_exponents = np.where(
            cancelled, -np.inf, safe_head + np.log(np.abs(total)) / math.log(p)
        )
    return out_signs, out_exponents


def log_cumsum(p: int, exponents: np.ndarray) -> np.ndarray:
    """Base-p exponents of the running sums of positive terms p**exponents."""
    logs = np.asarray(exponents, dtype=float) * math.log(p)
    return np.logaddexp.accumulate(logs) / math.log(p)


# ----------------------------------------------------------------------
# Geometric series
# ----------------------------------------------------------------------

def one_minus_power(p: int, c: float) -> float:
    """1 - p^{-c} without cancellation."""
    return -math.expm1(-c * math.log(p))


def geometric_tail_sum(p: int, c: Union[TailExponent, Real], R: int) -> LogMagnitude:
    """
    Sum over theta <= R of p^{theta c}, i.e. p^{R c} / (1 - p^{-c}).

    Raises:
        NonconvergentSum: when c <= 0
    """
    rate = _rate(c)
    if rate <= 0:
        raise NonconvergentSum(
            f"geometric tail with exponent {rate} does not converge",
            details={"p": p, "c": rate, "R": R},
        )
    return LogMagnitude(1, R * rate, p, -math.log(one_minus_power(p, rate)))


def linear_geometric_tail_sum(p: int, c: Union[TailExponent, Real], R: int) -> LogMagnitude:
    """
    Sum over theta <= R of theta * p^{theta c}.

    Closed form p^{Rc} (R(1 - x) - x) / (1 - x)^2 with x = p^{-c}.
    """
    rate = _rate(c)
    if rate <= 0:
        raise NonconvergentSum(
            f"linear geometric tail with exponent {rate} does not converge",
            details={"p": p, "c": rate, "R": R},
        )
    one_minus_x = one_minus_power(p, rate)
    x = 1.0 - one_minus_x
    numerator = math.fsum([R * one_minus_x, -x])
    if abs(numerator) <= cancellation_tolerance() * (abs(R) * one_minus_x + x):
        return LogMagnitude.zero(p)
    return LogMagnitude.from_real(numerator / one_minus_x ** 2, p) * LogMagnitude(1, R * rate, p)


def eulerian_polynomial(degree: int) -> np.ndarray:
    """Ascending coefficients of the Eulerian polynomial E_degree."""
    if degree == 0:
        return np.array([1.0])
    return np.array([
        float(sum(
            (-1) ** l * math.comb(degree + 1, l) * (k + 1 - l) ** degree
            for l in range(k + 1)
        ))
        for k in range(degree)
    ])


def _power_moment(x: float, one_minus_x: float, degree: int) -> float:
    """Sum over t >= 0 of t^degree x^t for 0 < x < 1."""
    if degree == 0:
        return 1.0 / one_minus_x
    return x * P.polyval(x, eulerian_polynomial(degree)) / one_minus_x ** (degree + 1)


def _upper_sum(p: int, decay: float, coefficients: Sequence[float], start: int) -> LogMagnitude:
    """
    Sum over t >= start of Q(t) p^{-decay t} with decay > 0, where Q has the
    given ascending coefficients.
    """
    one_minus_x = one_minus_power(p, decay)
    x = 1.0 - one_minus_x
    moments = [_power_moment(x, one_minus_x, i) for i in range(len(coefficients))]

    parts: List[float] = []
    for j, q_j in enumerate(coefficients):
        if q_j == 0:
            continue
        for i in range(j + 1):
            parts.append(q_j * math.comb(j, i) * float(start) ** (j - i) * moments[i])
    total = math.fsum(parts)
    scale = math.fsum(abs(v) for v in parts)
    if abs(total) <= cancellation_tolerance() * scale:
        return LogMagnitude.zero(p)
    return LogMagnitude.from_real(total, p) * LogMagnitude(1, -decay * start, p)


def _trim(coefficients: Sequence[float]) -> List[float]:
    coeffs = [float(c) for c in coefficients]
    while coeffs and coeffs[-1] == 0.0:
        coeffs.pop()
    return coeffs


def exp_poly_sum(
    p: int,
    rate: float,
    coefficients: Sequence[float],
    lo: Real,
    hi: Real,
) -> LogMagnitude:
    """
    Signed sum over integers lo <= t <= hi of Q(t) p^{rate t}.

    ``lo`` may be -inf and ``hi`` may be +inf; an infinite end must decay.

    Raises:
        NonconvergentSum: for a non-decaying infinite end
        ResourceLimit: for finite ranges too long to sum directly
    """
    coeffs = _trim(coefficients)
    if not coeffs or lo > hi:
        return LogMagnitude.zero(p)

    lo_infinite = lo == -math.inf
    hi_infinite = hi == math.inf
    if lo_infinite and hi_infinite:
        raise NonconvergentSum(
            "bilateral series of a single exponential term diverges",
            details={"rate": rate},
        )

    if hi_infinite:
        if rate >= 0:
            raise NonconvergentSum(
                f"upper tail with rate {rate} does not decay", details={"rate": rate}
            )
        return _upper_sum(p, -rate, coeffs, int(lo))

    if lo_infinite:
        if rate <= 0:
            raise NonconvergentSum(
                f"lower tail with rate {rate} does not decay", details={"rate": rate}
            )
        # t = -s turns the lower tail into an upper one
        reflected = [c * (-1) ** j for j, c in enumerate(coeffs)]
        return _upper_sum(p, rate, reflected, -int(hi))

    count = int(hi) - int(lo) + 1
    if count > get_config().numerics.max_tail_terms:
        raise ResourceLimit(
            f"finite range of {count} terms exceeds the direct summation cap",
            details={"lo": lo, "hi": hi},
        )
    ts = np.arange(int(lo), int(hi) + 1, dtype=float)
    values = P.polyval(ts, coeffs)
    signs = np.sign(values)
    with np.errstate(divide="ignore"):
        exponents = rate * ts + np.log(np.abs(values)) / math.log(p)
    return _combine_arrays(p, signs, exponents)


def _combine_arrays(p: int, signs: np.ndarray, exponents: np.ndarray) -> LogMagnitude:
    out_sign, out_exponent = log_sum_signed(p, signs, exponents)
    if out_sign == 0:
        return LogMagnitude.zero(p)
    return LogMagnitude(int(out_sign), float(out_exponent), p)


def polynomial_geometric_tail_sum(
    p: int, c: Union[TailExponent, Real], R: int, degree: int
) -> LogMagnitude:
    """Sum over theta <= R of theta^degree p^{theta c}."""
    rate = _rate(c)
    if rate <= 0:
        raise NonconvergentSum(
            f"polynomial geometric tail with exponent {rate} does not converge",
            details={"p": p, "c": rate, "R": R, "degree": degree},
        )
    if degree < 0:
        raise ParameterOutOfRange(f"degree must be nonnegative, got {degree}")
    coefficients = [0.0] * degree + [1.0]
    return exp_poly_sum(p, rate, coefficients, -math.inf, R)


def difference_antiderivative(x: float, x_minus_one: float, degree: int) -> np.ndarray:
    """
    Coefficients of A with x^{g+1} A(g+1) - x^g A(g) = g^degree.

    ``x_minus_one`` is x - 1 computed without cancellation; when it is zero
    the result is the power-sum polynomial with A(0) = 0.
    """
    if x_minus_one == 0.0:
        a = np.zeros(degree + 2)
        a[degree + 1] = 1.0 / (degree + 1)
        for l in range(degree - 1, -1, -1):
            tail = sum(a[i] * math.comb(i, l) for i in range(l + 2, degree + 2))
            a[l + 1] = -tail / (l + 1)
        return a

    a = np.zeros(degree + 1)
    for l in range(degree, -1, -1):
        tail = sum(a[i] * math.comb(i, l) for i in range(l + 1, degree + 1))
        a[l] = ((1.0 if l == degree else 0.0) - x * tail) / x_minus_one
    return a
