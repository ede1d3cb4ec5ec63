"""
Piecewise Exponential Polynomials
Functions on the scale lattice Z given on disjoint integer intervals by finite
sums of ``scale * P(t) * p^{rate t}``. Radial profiles, Hausdorff kernels and
operator outputs all lower to this form, which keeps sums, products, shifts
and discrete convolutions exact, infinite tails included.
"""

import bisect
import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from .config import get_config
from .numerics import (
    LogMagnitude,
    cancellation_tolerance,
    difference_antiderivative,
    exp_poly_sum,
    log_combine,
    log_sum_signed,
)
from .utils.error_handling import NonconvergentSum, ResourceLimit

logger = logging.getLogger(__name__)

INF = math.inf

# Rates closer than this (relative) are the same exponential
RATE_TOLERANCE = 1e-13

TAIL_CHUNK = 512


def _trim(coefficients: Iterable[float]) -> Tuple[float, ...]:
    coeffs = [float(c) for c in coefficients]
    while coeffs and coeffs[-1] == 0.0:
        coeffs.pop()
    return tuple(coeffs)


def shift_polynomial(coefficients: Sequence[float], h: float) -> np.ndarray:
    """Ascending coefficients of Q(t) = P(t - h)."""
    out = np.zeros(len(coefficients))
    for j, c_j in enumerate(coefficients):
        if c_j == 0:
            continue
        for i in range(j + 1):
            out[i] += c_j * math.comb(j, i) * (-h) ** (j - i)
    return out


def _bivariate(gamma_poly: Sequence[float], shifted_poly: Sequence[float]) -> np.ndarray:
    """
    Coefficients c[u, v] of k^u g^v in P(g) Q(k - g).
    """
    rows = len(shifted_poly)
    cols = len(gamma_poly) + len(shifted_poly) - 1
    c = np.zeros((rows, cols))
    for i, p_i in enumerate(gamma_poly):
        for j, q_j in enumerate(shifted_poly):
            if p_i == 0 or q_j == 0:
                continue
            for u in range(j + 1):
                c[u, i + j - u] += p_i * q_j * math.comb(j, u) * (-1) ** (j - u)
    return c


@dataclass(frozen=True)
class ExpPolyTerm:
    """scale * P(t) * p^{rate t} with P given by ascending coefficients."""
    rate: float
    scale: LogMagnitude
    coefficients: Tuple[float, ...] = (1.0,)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_monomial(self) -> bool:
        return len(self.coefficients) == 1

    @property
    def is_zero(self) -> bool:
        return self.scale.is_zero or not any(self.coefficients)

    def value(self, t: int) -> LogMagnitude:
        base = self.scale.base
        poly = float(P.polyval(float(t), self.coefficients))
        if poly == 0.0 or self.scale.is_zero:
            return LogMagnitude.zero(base)
        return (
            self.scale
            * LogMagnitude.from_real(poly, base)
            * LogMagnitude.from_power(base, self.rate * t)
        )

    def signs_and_exponents(self, ts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Vectorised value at integer points as (signs, base-p exponents)."""
        base = self.scale.base
        poly = P.polyval(ts, self.coefficients)
        signs = self.scale.sign * np.sign(poly)
        with np.errstate(divide="ignore"):
            exponents = (
                self.scale.log_value
                + self.rate * ts
                + np.log(np.abs(poly)) / math.log(base)
            )
        return signs, np.where(signs == 0, -np.inf, exponents)

    def shifted(self, h: int) -> 'ExpPolyTerm':
        """The term t -> term(t - h)."""
        base = self.scale.base
        return ExpPolyTerm(
            self.rate,
            self.scale * LogMagnitude.from_power(base, -self.rate * h),
            _trim(shift_polynomial(self.coefficients, h)) or (0.0,),
        )

    def scaled(self, factor: LogMagnitude) -> 'ExpPolyTerm':
        return ExpPolyTerm(self.rate, self.scale * factor, self.coefficients)

    def times(self, other: 'ExpPolyTerm') -> 'ExpPolyTerm':
        return ExpPolyTerm(
            self.rate + other.rate,
            self.scale * other.scale,
            _trim(P.polymul(self.coefficients, other.coefficients)) or (0.0,),
        )


@dataclass(frozen=True)
class Piece:
    """Terms valid on the integers lo..hi (ends may be infinite)."""
    lo: float
    hi: float
    terms: Tuple[ExpPolyTerm, ...]

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo + 1

    def contains(self, t: float) -> bool:
        return self.lo <= t <= self.hi

    def value(self, t: int) -> LogMagnitude:
        base = self.terms[0].scale.base
        return log_combine(base, [term.value(t) for term in self.terms])

    def shifted(self, h: int) -> 'Piece':
        return Piece(self.lo + h, self.hi + h, tuple(t.shifted(h) for t in self.terms))

    def scaled(self, factor: LogMagnitude) -> 'Piece':
        return Piece(self.lo, self.hi, tuple(t.scaled(factor) for t in self.terms))


def _merge_terms(terms: Sequence[ExpPolyTerm]) -> Tuple[ExpPolyTerm, ...]:
    """Collapse terms sharing a rate into one, dropping exact cancellations."""
    live = sorted((t for t in terms if not t.is_zero), key=lambda t: t.rate)
    groups: List[List[ExpPolyTerm]] = []
    for term in live:
        if groups and abs(term.rate - groups[-1][0].rate) <= RATE_TOLERANCE * max(
            1.0, abs(term.rate)
        ):
            groups[-1].append(term)
        else:
            groups.append([term])

    merged: List[ExpPolyTerm] = []
    for group in groups:
        if len(group) == 1:
            merged.append(group[0])
            continue
        head = abs(max(group, key=lambda t: t.scale.natural_log).scale)
        width = max(len(t.coefficients) for t in group)
        parts: List[List[float]] = [[] for _ in range(width)]
        for term in group:
            ratio = (term.scale / head).to_real()
            for i, c in enumerate(term.coefficients):
                parts[i].append(c * ratio)
        coefficients = []
        for column in parts:
            total = math.fsum(column)
            scale = math.fsum(abs(v) for v in column)
            coefficients.append(0.0 if abs(total) <= cancellation_tolerance() * scale else total)
        coefficients = list(_trim(coefficients))
        if coefficients:
            merged.append(ExpPolyTerm(group[0].rate, head, tuple(coefficients)))
    return tuple(merged)


def _regions(starts: Sequence[float]) -> List[Tuple[float, float]]:
    """Integer intervals cut at the given region starts, covering Z."""
    cuts = sorted(set(starts))
    if not cuts:
        return [(-INF, INF)]
    regions = [(-INF, cuts[0] - 1)]
    regions.extend((a, b - 1) for a, b in zip(cuts, cuts[1:]))
    regions.append((cuts[-1], INF))
    return regions


def _normalize(pieces: Sequence[Piece]) -> Tuple[Piece, ...]:
    """Refine possibly overlapping pieces into disjoint ones with merged terms."""
    pieces = [piece for piece in pieces if piece.lo <= piece.hi and piece.terms]
    if not pieces:
        return ()
    starts = []
    for piece in pieces:
        if math.isfinite(piece.lo):
            starts.append(piece.lo)
        if math.isfinite(piece.hi):
            starts.append(piece.hi + 1)

    out: List[Piece] = []
    for lo, hi in _regions(starts):
        if lo > hi:
            continue
        covering = [
            term
            for piece in pieces
            if piece.lo <= lo and hi <= piece.hi
            for term in piece.terms
        ]
        merged = _merge_terms(covering)
        if merged:
            out.append(Piece(lo, hi, merged))
    return tuple(out)


class PiecewiseExpPoly:
    """
    A function on Z, zero outside its pieces.

    Pieces are disjoint, sorted and each carries rate-distinct terms.
    """

    def __init__(self, p: int, pieces: Sequence[Piece] = ()):
        self.p = p
        self.pieces: Tuple[Piece, ...] = _normalize(pieces)
        self._starts = [piece.lo for piece in self.pieces]

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> 'PiecewiseExpPoly':
        return cls(p)

    @classmethod
    def monomial(
        cls,
        p: int,
        rate: float,
        lo: float = -INF,
        hi: float = INF,
        scale: Optional[LogMagnitude] = None,
        coefficients: Sequence[float] = (1.0,),
    ) -> 'PiecewiseExpPoly':
        """scale * P(t) * p^{rate t} on lo..hi."""
        scale = scale if scale is not None else LogMagnitude.one(p)
        coeffs = _trim(coefficients)
        if not coeffs or scale.is_zero:
            return cls(p)
        return cls(p, [Piece(lo, hi, (ExpPolyTerm(float(rate), scale, coeffs),))])

    @classmethod
    def from_values(cls, p: int, start: int, values: Sequence[float]) -> 'PiecewiseExpPoly':
        """Point values on start, start+1, ...; zero elsewhere."""
        pieces = [
            Piece(start + i, start + i, (ExpPolyTerm(0.0, LogMagnitude.from_real(v, p)),))
            for i, v in enumerate(values)
            if v != 0
        ]
        return cls(p, pieces)

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.pieces

    @property
    def support(self) -> Tuple[float, float]:
        """Smallest interval outside which the function vanishes."""
        if not self.pieces:
            return (0.0, -1.0)
        return (self.pieces[0].lo, self.pieces[-1].hi)

    def piece_at(self, t: float) -> Optional[Piece]:
        index = bisect.bisect_right(self._starts, t) - 1
        if index >= 0 and self.pieces[index].contains(t):
            return self.pieces[index]
        return None

    def __call__(self, t: int) -> LogMagnitude:
        piece = self.piece_at(t)
        if piece is None:
            return LogMagnitude.zero(self.p)
        return piece.value(int(t))

    def evaluate_array(self, ts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Signs and base-p exponents at integer points (exponent -inf at zeros)."""
        ts = np.asarray(ts, dtype=float)
        signs = np.zeros(ts.shape)
        exponents = np.full(ts.shape, -np.inf)
        for piece in self.pieces:
            mask = (ts >= piece.lo) & (ts <= piece.hi)
            if mask.any():
                signs[mask], exponents[mask] = _piece_array(self.p, piece, ts[mask])
        return signs, exponents

    def to_real_array(self, ts: np.ndarray) -> np.ndarray:
        signs, exponents = self.evaluate_array(ts)
        with np.errstate(over="ignore"):
            return np.where(signs == 0, 0.0, signs * np.power(float(self.p), exponents))

    # ------------------------------------------------------------------
    # Algebra
    # ------------------------------------------------------------------

    def shifted(self, h: int) -> 'PiecewiseExpPoly':
        """t -> f(t - h)."""
        return PiecewiseExpPoly(self.p, [piece.shifted(h) for piece in self.pieces])

    def scaled(self, factor) -> 'PiecewiseExpPoly':
        if not isinstance(factor, LogMagnitude):
            factor = LogMagnitude.from_real(factor, self.p)
        if factor.is_zero:
            return PiecewiseExpPoly(self.p)
        return PiecewiseExpPoly(self.p, [piece.scaled(factor) for piece in self.pieces])

    def __neg__(self) -> 'PiecewiseExpPoly':
        return self.scaled(LogMagnitude(-1, 0.0, self.p))

    def __add__(self, other: 'PiecewiseExpPoly') -> 'PiecewiseExpPoly':
        self._check(other)
        return PiecewiseExpPoly(self.p, list(self.pieces) + list(other.pieces))

    def __sub__(self, other: 'PiecewiseExpPoly') -> 'PiecewiseExpPoly':
        return self + (-other)

    def __mul__(self, other: 'PiecewiseExpPoly') -> 'PiecewiseExpPoly':
        """Pointwise product."""
        self._check(other)
        pieces = []
        for a in self.pieces:
            for b in other.pieces:
                lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
                if lo > hi:
                    continue
                terms = tuple(s.times(t) for s in a.terms for t in b.terms)
                pieces.append(Piece(lo, hi, terms))
        return PiecewiseExpPoly(self.p, pieces)

    def restricted(self, lo: float, hi: float) -> 'PiecewiseExpPoly':
        """Zero outside lo..hi."""
        pieces = [
            Piece(max(piece.lo, lo), min(piece.hi, hi), piece.terms)
            for piece in self.pieces
        ]
        return PiecewiseExpPoly(self.p, pieces)

    def convolve(self, other: 'PiecewiseExpPoly', max_direct: int = 4096) -> 'PiecewiseExpPoly':
        """
        Discrete convolution (self * other)(k) = sum over g of self(g) other(k - g).

        Finite pieces are expanded point by point; pairs of infinite pieces
        are summed in closed form.

        Raises:
            NonconvergentSum: when the defining series diverges for some k
        """
        self._check(other)
        raw: List[Piece] = []
        for wp in self.pieces:
            for gp in other.pieces:
                raw.extend(_convolve_pieces(self.p, wp, gp, max_direct))
        return PiecewiseExpPoly(self.p, raw)

    def _check(self, other: 'PiecewiseExpPoly') -> None:
        if other.p != self.p:
            raise ValueError(f"prime mismatch: {self.p} vs {other.p}")

    # ------------------------------------------------------------------
    # Series
    # ------------------------------------------------------------------

    def weighted_sum(self, c: float, lo: float = -INF, hi: float = INF) -> LogMagnitude:
        """Signed sum over lo..hi of f(t) p^{c t}, always in closed form."""
        parts = []
        for piece in self.pieces:
            a, b = max(piece.lo, lo), min(piece.hi, hi)
            if a > b:
                continue
            for term in piece.terms:
                parts.append(
                    term.scale * exp_poly_sum(self.p, term.rate + c, term.coefficients, a, b)
                )
        return log_combine(self.p, parts)

    def abs_power_sum(
        self,
        s: float,
        c: float,
        lo: float = -INF,
        hi: float = INF,
        max_terms: int = 100_000,
    ) -> LogMagnitude:
        """
        Sum over lo..hi of |f(t)|^s p^{c t}.

        Single-monomial tails are summed in closed form; other tails are
        summed explicitly until negligible.

        Raises:
            NonconvergentSum: when an infinite tail does not decay
            ResourceLimit: when an explicit tail needs more than ``max_terms``
        """
        parts: List[LogMagnitude] = []
        for piece in self.pieces:
            a, b = max(piece.lo, lo), min(piece.hi, hi)
            if a > b:
                continue
            parts.append(_piece_power_sum(self.p, piece, s, c, a, b, max_terms))
        return log_combine(self.p, parts)

    def __repr__(self) -> str:
        return f"PiecewiseExpPoly(p={self.p}, pieces={len(self.pieces)}, support={self.support})"


# ----------------------------------------------------------------------
# Power sums
# ----------------------------------------------------------------------

def _piece_power_sum(
    p: int, piece: Piece, s: float, c: float, a: float, b: float, max_terms: int
) -> LogMagnitude:
    if len(piece.terms) == 1 and piece.terms[0].is_monomial:
        term = piece.terms[0]
        amplitude = abs(term.scale * term.coefficients[0]) ** s
        return amplitude * exp_poly_sum(p, s * term.rate + c, [1.0], a, b)

    if math.isfinite(a) and math.isfinite(b):
        if b - a + 1 > max_terms:
            raise ResourceLimit(
                f"explicit power sum over {b - a + 1:.0f} terms exceeds {max_terms}",
                details={"lo": a, "hi": b},
            )
        return _explicit_block(p, piece, s, c, np.arange(a, b + 1))

    if not math.isfinite(a) and not math.isfinite(b):
        return log_combine(p, [
            _piece_power_sum(p, piece, s, c, -INF, -1, max_terms),
            _piece_power_sum(p, piece, s, c, 0, INF, max_terms),
        ])

    rates = [t.rate for t in piece.terms]
    if math.isinf(b):
        if s * max(rates) + c >= 0:
            raise NonconvergentSum(
                "upper tail of |f|^s p^{ct} does not decay",
                details={"s": s, "c": c, "rates": rates},
            )
        return _explicit_tail(p, piece, s, c, a, +1, max_terms)
    if s * min(rates) + c <= 0:
        raise NonconvergentSum(
            "lower tail of |f|^s p^{ct} does not decay",
            details={"s": s, "c": c, "rates": rates},
        )
    return _explicit_tail(p, piece, s, c, b, -1, max_terms)


def _piece_array(p: int, piece: Piece, ts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Signs and base-p exponents of one piece at points inside it."""
    parts = [term.signs_and_exponents(ts) for term in piece.terms]
    if len(parts) == 1:
        return parts[0]
    return log_sum_signed(
        p,
        np.stack([part[0] for part in parts], axis=-1),
        np.stack([part[1] for part in parts], axis=-1),
    )


def _block_logs(p: int, piece: Piece, s: float, c: float, ts: np.ndarray) -> np.ndarray:
    """Natural logs of |f(t)|^s p^{ct} (-inf where f vanishes)."""
    signs, exponents = _piece_array(p, piece, ts)
    logs = (s * exponents + c * ts) * math.log(p)
    return np.where(signs == 0, -np.inf, logs)


def _explicit_block(p: int, piece: Piece, s: float, c: float, ts: np.ndarray) -> LogMagnitude:
    logs = _block_logs(p, piece, s, c, ts.astype(float))
    if not np.isfinite(logs).any():
        return LogMagnitude.zero(p)
    total = float(np.logaddexp.reduce(logs))
    return LogMagnitude(1, total / math.log(p), p)


def _explicit_tail(
    p: int, piece: Piece, s: float, c: float, anchor: float, direction: int, max_terms: int
) -> LogMagnitude:
    """Walk from ``anchor`` in ``direction`` until chunks become negligible."""
    negligible = get_config().numerics.negligible_bits * math.log(2.0)
    running = -np.inf
    walked = 0
    start = int(anchor)
    while True:
        ts = start + direction * np.arange(TAIL_CHUNK, dtype=float)
        logs = _block_logs(p, piece, s, c, ts)
        chunk = float(np.logaddexp.reduce(logs))
        running = float(np.logaddexp(running, chunk))
        walked += TAIL_CHUNK
        decreasing = logs[-1] <= logs[0]
        if chunk == -np.inf or (decreasing and chunk < running - negligible):
            break
        if walked >= max_terms:
            raise ResourceLimit(
                f"explicit tail did not settle within {max_terms} terms",
                details={"anchor": anchor, "direction": direction, "s": s, "c": c},
            )
        start += direction * TAIL_CHUNK
    logger.debug(f"Explicit tail from {anchor} settled after {walked} terms")
    if running == -np.inf:
        return LogMagnitude.zero(p)
    return LogMagnitude(1, running / math.log(p), p)


# ----------------------------------------------------------------------
# Convolution
# ----------------------------------------------------------------------

def _convolve_pieces(p: int, wp: Piece, gp: Piece, max_direct: int) -> List[Piece]:
    if wp.is_finite and wp.length <= max_direct:
        out = []
        for g in range(int(wp.lo), int(wp.hi) + 1):
            weight = wp.value(g)
            if not weight.is_zero:
                out.append(gp.shifted(g).scaled(weight))
        return out
    if gp.is_finite and gp.length <= max_direct:
        return _convolve_pieces(p, gp, wp, max_direct)
    return _symbolic_convolution(p, wp, gp)


def _lower_bound(a: float, hi: float, region_lo: float) -> Tuple[str, float]:
    """max(a, k - hi) over a region starting at region_lo."""
    if a == -INF:
        return ("lin", hi) if math.isfinite(hi) else ("inf", -1)
    if hi == INF:
        return ("const", a)
    return ("lin", hi) if region_lo >= a + hi else ("const", a)


def _upper_bound(b: float, lo: float, region_hi: float) -> Tuple[str, float]:
    """min(b, k - lo) over a region ending at region_hi."""
    if b == INF:
        return ("lin", lo) if math.isfinite(lo) else ("inf", 1)
    if lo == -INF:
        return ("const", b)
    return ("lin", lo) if region_hi <= b + lo else ("const", b)


def _bound_value(bound: Tuple[str, float], k: float) -> float:
    kind, value = bound
    if kind == "const":
        return value
    if kind == "lin":
        return k - value
    return value * INF


def _symbolic_convolution(p: int, wp: Piece, gp: Piece) -> List[Piece]:
    a, b, lo, hi = wp.lo, wp.hi, gp.lo, gp.hi
    starts = []
    for x, y in ((a, lo), (a, hi)):
        if math.isfinite(x) and math.isfinite(y):
            starts.append(x + y)
    for x, y in ((b, lo), (b, hi)):
        if math.isfinite(x) and math.isfinite(y):
            starts.append(x + y + 1)

    pieces = []
    for region_lo, region_hi in _regions(starts):
        if region_lo > region_hi:
            continue
        lower = _lower_bound(a, hi, region_lo)
        upper = _upper_bound(b, lo, region_hi)
        if math.isfinite(region_lo):
            k = region_lo
        elif math.isfinite(region_hi):
            k = region_hi
        else:
            k = 0.0
        if _bound_value(lower, k) > _bound_value(upper, k):
            continue
        terms: List[ExpPolyTerm] = []
        for wt in wp.terms:
            for gt in gp.terms:
                terms.extend(_term_pair_sum(p, wt, gt, lower, upper))
        if terms:
            pieces.append(Piece(region_lo, region_hi, tuple(terms)))
    return pieces


def _term_pair_sum(
    p: int,
    wt: ExpPolyTerm,
    gt: ExpPolyTerm,
    lower: Tuple[str, float],
    upper: Tuple[str, float],
) -> List[ExpPolyTerm]:
    """
    Sum over L(k) <= g <= U(k) of wt(g) gt(k - g) as terms in k.

    With rho = wt.rate - gt.rate the summand is
    scale * p^{gt.rate k} * sum_{u,v} c[u,v] k^u g^v p^{rho g}, and each
    g^v p^{rho g} has the indefinite sum F_v(g) = p^{rho g} A_v(g).
    """
    rho = wt.rate - gt.rate
    coeff = _bivariate(wt.coefficients, gt.coefficients)
    x_minus_one = math.expm1(rho * math.log(p)) if rho != 0 else 0.0
    x = 1.0 + x_minus_one
    antiderivatives = [
        difference_antiderivative(x, x_minus_one, v) for v in range(coeff.shape[1])
    ]
    base_scale = wt.scale * gt.scale

    terms: List[ExpPolyTerm] = []
    for bound, sign, offset in ((upper, 1, 1), (lower, -1, 0)):
        kind, value = bound
        if kind == "inf":
            # F vanishes at +inf when rho < 0 and at -inf when rho > 0
            if value * rho >= 0:
                raise NonconvergentSum(
                    "convolution series diverges",
                    details={"rho": rho, "direction": value},
                )
            continue
        factor = LogMagnitude(sign, 0.0, p)
        if kind == "const":
            point = value + offset
            poly = np.zeros(coeff.shape[0])
            for v, antiderivative in enumerate(antiderivatives):
                poly = poly + coeff[:, v] * float(P.polyval(point, antiderivative))
            scale = base_scale * factor * LogMagnitude.from_power(p, rho * point)
            terms.append(ExpPolyTerm(gt.rate, scale, _trim(poly) or (0.0,)))
        else:
            h = value - offset
            poly = np.zeros(1)
            for v, antiderivative in enumerate(antiderivatives):
                poly = P.polyadd(poly, P.polymul(coeff[:, v], shift_polynomial(antiderivative, h)))
            scale = base_scale * factor * LogMagnitude.from_power(p, -rho * h)
            terms.append(ExpPolyTerm(wt.rate, scale, _trim(poly) or (0.0,)))
    return [term for term in terms if not term.is_zero]
