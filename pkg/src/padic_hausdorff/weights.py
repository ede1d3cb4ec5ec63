"""
Muckenhoupt Weights
Classification of power weights |x|_p^alpha into A_ell and reverse Holder
classes, characteristic constants, and the two comparison checks: the
measure-ratio sandwich and the mean bound. Centered balls are computed in
closed form; a ball missing the origin sees a constant weight.
"""

import logging
import math
from typing import Iterable, List, Sequence, Tuple

from .functions import SeparableFunction
from .geometry import measure, weighted_measure
from .models.geometry import PowerWeight, Region, RegionKind
from .models.weight import MeanBoundReport, SandwichReport, WeightClassification
from .numerics import LogMagnitude
from .utils.error_handling import NonconvergentSum, ParameterOutOfRange

logger = logging.getLogger(__name__)

Window = Tuple[int, int]


def classify_power_weight(p: int, n: int, alpha: float, ell: float) -> WeightClassification:
    """
    A_ell membership and critical reverse Holder index of |x|_p^alpha.

    A_1 iff -n < alpha <= 0; A_ell (ell > 1) iff -n < alpha < n(ell - 1).
    The reverse Holder index is inf for alpha >= 0 and -n/alpha on (-n, 0).
    """
    if ell < 1:
        raise ParameterOutOfRange(f"ell must be >= 1, got {ell}")
    integrable = alpha > -n
    if ell == 1:
        member = integrable and alpha <= 0
    else:
        member = integrable and alpha < n * (ell - 1)

    if not integrable:
        index = None
    elif alpha >= 0:
        index = math.inf
    else:
        index = -n / alpha
    return WeightClassification(
        alpha=alpha,
        ell=ell,
        member=member,
        reverse_holder_index=index,
        locally_integrable=integrable,
    )


def _mean_density(p: int, n: int, alpha: float, gamma: int) -> LogMagnitude:
    """w(B_gamma)/|B_gamma| for w = |x|^alpha."""
    region = Region.ball(gamma)
    return weighted_measure(p, n, region, PowerWeight(alpha)) / measure(p, n, region)


def ap_product(p: int, n: int, alpha: float, ell: float, gamma: int) -> LogMagnitude:
    """
    A_ell product on the centered ball B_gamma:
    (w(B)/|B|) (sigma(B)/|B|)^{ell-1} with sigma = w^{-1/(ell-1)}.
    """
    if ell <= 1:
        raise ParameterOutOfRange(f"A_ell product needs ell > 1, got {ell}")
    dual = -alpha / (ell - 1)
    return _mean_density(p, n, alpha, gamma) * _mean_density(p, n, dual, gamma) ** (ell - 1)


def off_center_product(
    p: int, n: int, alpha: float, ell: float, center_exponent: int, gamma: int
) -> LogMagnitude:
    """
    A_ell product on B(a, p^gamma) with |a|_p = p^center_exponent > p^gamma.

    The weight equals p^{center_exponent alpha} on the whole ball, so the
    product is 1.
    """
    if center_exponent <= gamma:
        raise ParameterOutOfRange(
            "ball contains the origin; use the centered product",
            details={"center_exponent": center_exponent, "gamma": gamma},
        )
    if ell <= 1:
        raise ParameterOutOfRange(f"A_ell product needs ell > 1, got {ell}")
    level = center_exponent * alpha
    return LogMagnitude.from_power(p, level) * LogMagnitude.from_power(p, -level / (ell - 1)) ** (ell - 1)


def a1_ratio(p: int, n: int, alpha: float, gamma: int) -> LogMagnitude:
    """(w(B_gamma)/|B_gamma|) / ess inf over B_gamma of w, for -n < alpha <= 0."""
    return _mean_density(p, n, alpha, gamma) / LogMagnitude.from_power(p, gamma * alpha)


def muckenhoupt_characteristic(
    p: int, n: int, alpha: float, ell: float, window: Window = (-10, 10)
) -> LogMagnitude:
    """
    Supremum of the A_ell product over balls with centered radii in the window.

    Off-center balls contribute exactly 1. For ell = 1 the essential-infimum
    form is used.

    Raises:
        ParameterOutOfRange: when |x|^alpha is not in A_ell
    """
    classification = classify_power_weight(p, n, alpha, ell)
    if not classification.member:
        raise ParameterOutOfRange(
            f"|x|^{alpha} is not in A_{ell} on Q_{p}^{n}",
            details={"alpha": alpha, "ell": ell, "n": n},
        )
    product = a1_ratio if ell == 1 else (lambda p_, n_, a_, g_: ap_product(p_, n_, a_, ell, g_))
    candidates = [product(p, n, alpha, gamma) for gamma in range(window[0], window[1] + 1)]
    candidates.append(LogMagnitude.one(p))
    return max(candidates)


def reverse_holder_ratio(p: int, n: int, alpha: float, r: float, gamma: int) -> LogMagnitude:
    """
    ((1/|B|) integral of w^r)^{1/r} / ((1/|B|) integral of w) on B_gamma.

    Diverges (LogMagnitude infinity) once alpha r <= -n.
    """
    if r <= 1:
        raise ParameterOutOfRange(f"reverse Holder exponent must exceed 1, got {r}")
    try:
        upper = _mean_density(p, n, alpha * r, gamma) ** (1.0 / r)
    except NonconvergentSum:
        return LogMagnitude.diverges(p)
    return upper / _mean_density(p, n, alpha, gamma)


def reverse_holder_bracket(
    p: int, n: int, alpha: float, factor: float = 1.01, gamma: int = 0
) -> Tuple[bool, bool]:
    """
    (finite just below the index, divergent just above it) for alpha in (-n, 0).
    """
    index = classify_power_weight(p, n, alpha, 1.0).reverse_holder_index
    if index is None or math.isinf(index):
        raise ParameterOutOfRange(f"|x|^{alpha} has no finite reverse Holder index")
    below = reverse_holder_ratio(p, n, alpha, max(index / factor, 1.0 + 1e-9), gamma)
    above = reverse_holder_ratio(p, n, alpha, index * factor, gamma)
    return below.is_finite, not above.is_finite


def _contains(outer: Region, inner: Region) -> bool:
    return outer.kind == RegionKind.BALL and inner.scale <= outer.scale


def sandwich_pairs(gammas: Iterable[int], depths: Iterable[int]) -> List[Tuple[Region, Region]]:
    """(E, B) pairs with E in {S_{g-d}, B_{g-d}} and B = B_g."""
    depths = list(depths)
    pairs = []
    for gamma in gammas:
        for depth in depths:
            pairs.append((Region.sphere(gamma - depth), Region.ball(gamma)))
            pairs.append((Region.ball(gamma - depth), Region.ball(gamma)))
    return pairs


def check_sandwich(
    p: int,
    n: int,
    alpha: float,
    ell: float,
    r: float,
    pairs: Sequence[Tuple[Region, Region]],
) -> SandwichReport:
    """
    Fit C1 (|E|/|B|)^ell <= w(E)/w(B) <= C2 (|E|/|B|)^{(r-1)/r} over the pairs.

    Raises:
        ParameterOutOfRange: when w is not in A_ell or r is not below its
            reverse Holder index
    """
    classification = classify_power_weight(p, n, alpha, ell)
    index = classification.reverse_holder_index
    if not classification.member:
        raise ParameterOutOfRange(f"|x|^{alpha} is not in A_{ell}", details={"alpha": alpha})
    if not (1 < r and index is not None and r < index):
        raise ParameterOutOfRange(
            f"reverse Holder exponent {r} must lie in (1, {index})", details={"r": r}
        )

    w = PowerWeight(alpha)
    lower = math.inf
    upper = 0.0
    lower_pair = upper_pair = ("", "")
    for inner, outer in pairs:
        if not _contains(outer, inner):
            raise ParameterOutOfRange(f"{inner} is not contained in {outer}")
        lebesgue = measure(p, n, inner) / measure(p, n, outer)
        weighted = weighted_measure(p, n, inner, w) / weighted_measure(p, n, outer, w)
        low = (weighted / lebesgue ** ell).to_real()
        high = (weighted / lebesgue ** ((r - 1) / r)).to_real()
        if low < lower:
            lower, lower_pair = low, (repr(inner), repr(outer))
        if high > upper:
            upper, upper_pair = high, (repr(inner), repr(outer))

    passed = bool(pairs) and 0 < lower and math.isfinite(upper)
    logger.info(f"Sandwich fit for alpha={alpha}: C1={lower:.6g}, C2={upper:.6g} over {len(pairs)} pairs")
    return SandwichReport(
        lower_constant=lower,
        upper_constant=upper,
        pairs_checked=len(pairs),
        passed=passed,
        worst_pairs=[lower_pair, upper_pair],
    )


def check_mean_bound(
    p: int,
    n: int,
    f: SeparableFunction,
    alpha: float,
    ell: float,
    balls: Iterable[int],
) -> MeanBoundReport:
    """
    Fit (1/|B|) integral of |f| <= C ((1/w(B)) integral of |f|^ell w)^{1/ell}
    over centered balls B_gamma.
    """
    if not classify_power_weight(p, n, alpha, ell).member:
        raise ParameterOutOfRange(f"|x|^{alpha} is not in A_{ell}", details={"alpha": alpha})
    w = PowerWeight(alpha)
    body = f.radial.as_piecewise(p)
    plain = f.angular.power_integral(1.0)
    powered = f.angular.power_integral(ell)

    per_ball: List[float] = []
    for gamma in balls:
        ball = Region.ball(gamma)
        lhs = plain * body.abs_power_sum(1.0, n, -math.inf, gamma) / measure(p, n, ball)
        rhs = (
            powered * body.abs_power_sum(ell, alpha + n, -math.inf, gamma)
            / weighted_measure(p, n, ball, w)
        ) ** (1.0 / ell)
        if lhs.is_zero:
            per_ball.append(0.0)
            continue
        per_ball.append((lhs / rhs).to_real())

    constant = max(per_ball) if per_ball else 0.0
    return MeanBoundReport(
        constant=constant,
        balls_checked=len(per_ball),
        passed=bool(per_ball) and math.isfinite(constant),
        per_ball=per_ball,
    )
