"""
Function-Space Norms
Evaluators for the weighted central Morrey, Herz, dot-Herz, Morrey-Herz and
central BMO norms of separable functions. Sums over sphere indices use the
closed-form tails of the piecewise model; suprema run over an index window
and report whether the window, rather than the function, decided them.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .config import get_config
from .functions import SeparableFunction
from .geometry import weighted_measure
from .models.geometry import PowerWeight, Region
from .numerics import LogMagnitude
from .piecewise import PiecewiseExpPoly
from .utils.error_handling import NonconvergentSum, ParameterOutOfRange, ResourceLimit

logger = logging.getLogger(__name__)

Window = Tuple[int, int]

# Adjacent suprema candidates closer than this (in log) count as flat
FLATNESS_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SpaceParams:
    """Exponents and weight of a target space."""
    q: float = 1.0
    ell: float = 1.0
    beta: float = 0.0
    lam: float = 0.0
    weight: PowerWeight = field(default_factory=PowerWeight)

    def __post_init__(self):
        if self.q < 1:
            raise ParameterOutOfRange(f"q must be >= 1, got {self.q}")
        if self.ell < 1:
            raise ParameterOutOfRange(f"ell must be >= 1, got {self.ell}")

    @property
    def alpha(self) -> float:
        return self.weight.alpha


@dataclass(frozen=True)
class NormEvaluation:
    """A supremum over a finite index window."""
    value: LogMagnitude
    window_limited: bool = False
    attained_at: Optional[int] = None


def _default_window() -> Window:
    return tuple(get_config().windows.sup_window)


def _max_terms() -> int:
    return get_config().numerics.max_tail_terms


def _require_normable(f: SeparableFunction, space: str) -> None:
    if not f.radial.is_normable:
        raise ParameterOutOfRange(
            f"log-scale profiles have no {space} norm; use them as symbols or in CMO",
            details={"space": space},
        )


def _prefix_power_sums(
    body: PiecewiseExpPoly, s: float, c: float, window: Window
) -> List[LogMagnitude]:
    """Sums over t <= k of |g(t)|^s p^{ct} for every k in the window."""
    lo, hi = window
    p = body.p
    running = body.abs_power_sum(s, c, -math.inf, lo - 1, _max_terms())
    ts = np.arange(lo, hi + 1, dtype=float)
    signs, exponents = body.evaluate_array(ts)
    prefixes = []
    for t, sign, exponent in zip(ts, signs, exponents):
        if sign != 0:
            running = running + LogMagnitude(1, s * exponent + c * t, p)
        prefixes.append(running)
    return prefixes


def _supremum(ratios: List[LogMagnitude], window: Window, body: PiecewiseExpPoly) -> NormEvaluation:
    p = body.p
    logs = np.array([r.natural_log for r in ratios])
    if not np.isfinite(logs).any():
        beyond = not body.is_zero and body.support[1] > window[1]
        return NormEvaluation(LogMagnitude.zero(p), window_limited=beyond)
    index = int(np.argmax(logs))
    limited = False
    if len(logs) == 1:
        limited = True
    elif index in (0, len(logs) - 1):
        neighbor = 1 if index == 0 else len(logs) - 2
        limited = not abs(logs[index] - logs[neighbor]) <= FLATNESS_TOLERANCE
    return NormEvaluation(ratios[index], window_limited=limited, attained_at=window[0] + index)


def _report(evaluation: NormEvaluation, space: str) -> LogMagnitude:
    if evaluation.window_limited:
        logger.warning(
            f"{space} supremum attained at window edge {evaluation.attained_at}; value is window-limited",
            extra={"operation": space},
        )
    return evaluation.value


# ----------------------------------------------------------------------
# Central Morrey
# ----------------------------------------------------------------------

def evaluate_central_morrey(
    f: SeparableFunction, params: SpaceParams, window: Optional[Window] = None
) -> NormEvaluation:
    """
    sup over g in the window of (w(B_g)^{-(1+lam q)} integral over B_g of |f|^q w)^{1/q}.

    Returns 0 when lam < -1/q, where the space is trivial.
    """
    _require_normable(f, "central Morrey")
    p, n = f.p, f.n
    q, lam, w = params.q, params.lam, params.weight
    if lam < -1.0 / q:
        logger.info(f"lambda={lam} < -1/q={-1.0 / q}: central Morrey space is {{0}}")
        return NormEvaluation(LogMagnitude.zero(p))
    window = window or _default_window()
    body = f.radial.as_piecewise(p)
    if body.is_zero:
        return NormEvaluation(LogMagnitude.zero(p))

    c = w.alpha + n
    angular = f.angular.power_integral(q)
    ball_0 = weighted_measure(p, n, Region.ball(0), w)
    prefixes = _prefix_power_sums(body, q, c, window)
    ratios = []
    for offset, prefix in enumerate(prefixes):
        gamma = window[0] + offset
        ball = ball_0 * LogMagnitude.from_power(p, gamma * c)
        ratios.append((angular * prefix / ball ** (1 + lam * q)) ** (1.0 / q))
    return _supremum(ratios, window, body)


def central_morrey_norm(
    f: SeparableFunction, params: SpaceParams, window: Optional[Window] = None
) -> LogMagnitude:
    return _report(evaluate_central_morrey(f, params, window), "central Morrey")


# ----------------------------------------------------------------------
# Herz family
# ----------------------------------------------------------------------

def _herz_sum(
    f: SeparableFunction, params: SpaceParams, scale_rate: float, window: Optional[Window]
) -> LogMagnitude:
    """N_q(a)^ell * sum of |g(k)|^ell p^{k(scale_rate + (alpha+n) ell/q)}."""
    p, n = f.p, f.n
    ell = params.ell
    body = f.radial.as_piecewise(p)
    if body.is_zero:
        return LogMagnitude.zero(p)
    sphere_rate = 0.0 if math.isinf(params.q) else (params.alpha + n) * ell / params.q
    lo, hi = window if window is not None else (-math.inf, math.inf)
    total = body.abs_power_sum(ell, scale_rate + sphere_rate, lo, hi, _max_terms())
    return f.angular.norm(params.q) ** ell * total


def herz_norm(
    f: SeparableFunction, params: SpaceParams, window: Optional[Window] = None
) -> LogMagnitude:
    """
    (sum over k of p^{k beta ell} ||f chi_k||^ell_{L^q_w})^{1/ell}.

    ``window=None`` sums over all of Z with analytic tails.

    Raises:
        NonconvergentSum: when the sum diverges
    """
    _require_normable(f, "Herz")
    return _herz_sum(f, params, params.beta * params.ell, window) ** (1.0 / params.ell)


def dot_herz_norm(
    f: SeparableFunction, params: SpaceParams, window: Optional[Window] = None
) -> LogMagnitude:
    """
    (sum over k of w(B_k)^{beta ell/n} ||f chi_k||^ell_{L^q_w})^{1/ell}.

    With w(B_k) = kappa p^{k(alpha+n)} the weight factor splits into
    kappa^{beta ell/n} and a geometric rate.
    """
    _require_normable(f, "dot-Herz")
    p, n = f.p, f.n
    w = params.weight
    exponent = params.beta * params.ell / n
    kappa = weighted_measure(p, n, Region.ball(0), w)
    total = _herz_sum(f, params, (w.alpha + n) * exponent, window)
    return (kappa ** exponent * total) ** (1.0 / params.ell)


def evaluate_morrey_herz(
    f: SeparableFunction, params: SpaceParams, window: Optional[Window] = None
) -> NormEvaluation:
    """
    sup over k0 in the window of p^{-k0 lam}(sum over k <= k0 of p^{k beta ell}||f chi_k||^ell)^{1/ell}.
    """
    _require_normable(f, "Morrey-Herz")
    if params.lam < 0:
        raise ParameterOutOfRange(
            f"Morrey-Herz norm needs lambda >= 0, got {params.lam}", details={"lambda": params.lam}
        )
    p, n = f.p, f.n
    ell = params.ell
    window = window or _default_window()
    body = f.radial.as_piecewise(p)
    if body.is_zero:
        return NormEvaluation(LogMagnitude.zero(p))

    sphere_rate = 0.0 if math.isinf(params.q) else (params.alpha + n) * ell / params.q
    angular = f.angular.norm(params.q) ** ell
    prefixes = _prefix_power_sums(body, ell, params.beta * ell + sphere_rate, window)
    ratios = [
        LogMagnitude.from_power(p, -(window[0] + offset) * params.lam)
        * (angular * prefix) ** (1.0 / ell)
        for offset, prefix in enumerate(prefixes)
    ]
    return _supremum(ratios, window, body)


def morrey_herz_norm(
    f: SeparableFunction, params: SpaceParams, window: Optional[Window] = None
) -> LogMagnitude:
    return _report(evaluate_morrey_herz(f, params, window), "Morrey-Herz")


# ----------------------------------------------------------------------
# Central BMO
# ----------------------------------------------------------------------

def ball_average(
    b: SeparableFunction, gamma: int, w: Optional[PowerWeight] = None
) -> LogMagnitude:
    """
    Weighted mean of b over B_gamma:
    (integral of a over S_0) * sum over k <= gamma of g(k) p^{k(alpha+n)} / w(B_gamma).

    Raises:
        NonconvergentSum: when b w is not integrable on B_gamma
    """
    p, n = b.p, b.n
    w = w or PowerWeight(0.0)
    ball = weighted_measure(p, n, Region.ball(gamma), w)
    body = b.radial.as_piecewise(p)
    integral = body.weighted_sum(w.alpha + n, -math.inf, gamma)
    return b.angular.integral() * integral / ball


def _lower_tail_decays(body: PiecewiseExpPoly, q: float, c: float) -> bool:
    if body.is_zero or body.pieces[0].lo > -math.inf:
        return True
    rates = [term.rate for term in body.pieces[0].terms]
    return q * min(0.0, min(rates)) + c > 0


def mean_oscillation(
    b: SeparableFunction, q: float, gamma: int, w: Optional[PowerWeight] = None
) -> float:
    """((1/w(B_gamma)) integral over B_gamma of |b - b_B|^q w)^{1/q} as a float."""
    p, n = b.p, b.n
    w = w or PowerWeight(0.0)
    c = w.alpha + n
    body = b.radial.as_piecewise(p)
    if not _lower_tail_decays(body, q, c):
        raise NonconvergentSum(
            "mean oscillation integral diverges near the origin", details={"q": q, "gamma": gamma}
        )
    mean = ball_average(b, gamma, w).to_real()
    cell = b.angular.cell_measure.to_real()
    angular = np.asarray(b.angular.values, dtype=float)
    ball_0 = weighted_measure(p, n, Region.ball(0), w).to_real()

    negligible = 2.0 ** -get_config().numerics.negligible_bits
    total = 0.0
    walked = 0
    limit = _max_terms()
    chunk_size = 512
    while True:
        j = -np.arange(walked, walked + chunk_size, dtype=float)
        radial = body.to_real_array(gamma + j)
        deviation = np.abs(radial[:, None] * angular[None, :] - mean) ** q
        weights = np.power(float(p), c * j)
        chunk = float(np.sum(weights * deviation.sum(axis=1))) * cell
        total += chunk
        walked += chunk_size
        if chunk <= negligible * total or total == 0.0 and walked > chunk_size:
            break
        if walked >= limit:
            raise ResourceLimit(
                f"mean oscillation did not settle within {limit} spheres",
                details={"gamma": gamma, "q": q},
            )
    return (total / ball_0) ** (1.0 / q)


def evaluate_cmo(
    b: SeparableFunction, q: float, w: Optional[PowerWeight] = None, window: Optional[Window] = None
) -> NormEvaluation:
    """sup over the window of the weighted mean oscillation on centered balls."""
    if q < 1 or math.isinf(q):
        raise ParameterOutOfRange(f"CMO needs finite q >= 1, got {q}")
    p = b.p
    window = window or _default_window()
    values = [mean_oscillation(b, q, gamma, w) for gamma in range(window[0], window[1] + 1)]
    ratios = [LogMagnitude.from_real(v, p) for v in values]
    if not any(values):
        return NormEvaluation(LogMagnitude.zero(p))
    return _supremum(ratios, window, b.radial.as_piecewise(p))


def cmo_norm(
    b: SeparableFunction, q: float, w: Optional[PowerWeight] = None, window: Optional[Window] = None
) -> LogMagnitude:
    return _report(evaluate_cmo(b, q, w, window), "CMO")
