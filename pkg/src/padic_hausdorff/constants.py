"""
Theorem Constants
Closed-form evaluation of the kernel series that bound the Hausdorff operator
and its commutator, the structural Morrey factor K and the Herz lower-bound
factor A(r). Every series is a combination of kernel_sum calls, so tails of
power-decay kernels are exact and divergence is detected rather than truncated.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple

from .numerics import LogMagnitude, log_combine, one_minus_power
from .operators import PhiKernel, kernel_sum
from .utils.error_handling import NonconvergentSum, ParameterOutOfRange

logger = logging.getLogger(__name__)

INF = math.inf


class ConstantKind(Enum):
    """Constants of the boundedness theorems"""
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C41 = "C41"
    C42 = "C42"
    C5 = "C5"
    C6 = "C6"
    C6_STAR = "C6*"
    C7 = "C7"
    C8 = "C8"
    C9 = "C9"
    STRUCTURAL_K = "K"
    HERZ_A = "Ar"

    @classmethod
    def parse(cls, value: str) -> 'ConstantKind':
        text = str(value).strip().lower().replace(".", "")
        aliases = {"c6star": "c6*", "a": "ar", "a(r)": "ar", "k": "k"}
        text = aliases.get(text, text)
        for member in cls:
            if member.value.lower() == text:
                return member
        raise ParameterOutOfRange(f"unknown constant kind: {value!r}")


SPLIT_KINDS = (ConstantKind.C2, ConstantKind.C41, ConstantKind.C42, ConstantKind.C7)


@dataclass(frozen=True)
class ConstantParams:
    """
    Parameters of a theorem constant. Only the fields a kind reads need to be
    meaningful; per-factor tuples must have length m where they are used.
    """
    p: int
    n: int
    kernel: PhiKernel
    m: int = 1
    alpha: float = 0.0
    q: float = 1.0
    lam: float = 0.0
    beta: float = 0.0
    ell: float = 1.0
    lam_star: float = 0.0
    beta_star: float = 0.0
    zeta: float = 1.0
    delta: float = 2.0
    alphas: Tuple[float, ...] = ()
    qs: Tuple[float, ...] = ()
    lams: Tuple[float, ...] = ()
    ells: Tuple[float, ...] = ()
    r: int = 1

    def require(self, *names: str) -> None:
        for name in names:
            if len(getattr(self, name)) != self.m:
                raise ParameterOutOfRange(
                    f"{name} needs {self.m} entries, got {len(getattr(self, name))}",
                    details={"field": name, "m": self.m},
                )


# ----------------------------------------------------------------------
# Building blocks
# ----------------------------------------------------------------------

def _sum(params: ConstantParams, exponent: float, lo: float = -INF, hi: float = INF,
         degree: int = 0) -> LogMagnitude:
    return kernel_sum(params.p, params.kernel, exponent, degree, lo, hi)


def _split(params: ConstantParams, upper: float, lower: float) -> Tuple[LogMagnitude, LogMagnitude]:
    """(sum over g >= 0 with exponent upper, sum over g < 0 with exponent lower)."""
    return _sum(params, upper, 0, INF), _sum(params, lower, -INF, -1)


def _doubling_product_sum(params: ConstantParams, exponent: float) -> LogMagnitude:
    """Sum of Phi(p^g) p^{-g exponent} prod (2 + p^{|g|(alpha_i+n)}), expanded over subsets."""
    params.require("alphas")
    p, n = params.p, params.n
    parts: List[LogMagnitude] = []
    for chosen in itertools.product((False, True), repeat=params.m):
        c = sum(a + n for a, pick in zip(params.alphas, chosen) if pick)
        weight = LogMagnitude.from_real(2.0 ** (params.m - sum(chosen)), p)
        upper, lower = _split(params, exponent - c, exponent + c)
        parts.append(weight * upper)
        parts.append(weight * lower)
    return log_combine(p, parts)


def _starred_split(params: ConstantParams) -> Tuple[float, float]:
    n = params.n
    upper = 1 + n * params.zeta * params.lam_star
    lower = 1 + n * params.lam_star * (params.delta - 1) / params.delta
    return upper, lower


def _herz_split_exponent(params: ConstantParams) -> float:
    n = params.n
    return 1 - n * (params.delta - 1) / params.delta * (1 / params.q + params.beta / n)


def split_constant(kind: ConstantKind, params: ConstantParams) -> Tuple[LogMagnitude, LogMagnitude]:
    """
    The (g >= 0, g < 0) halves of a split constant.

    Raises:
        NonconvergentSum: when a half diverges
        ParameterOutOfRange: for kinds that are not split
    """
    n, zeta = params.n, params.zeta
    if kind == ConstantKind.C2:
        return _split(params, *_starred_split(params))
    if kind == ConstantKind.C41:
        return _split(params, 1 - zeta * n / params.q - zeta * params.beta, _herz_split_exponent(params))
    if kind == ConstantKind.C42:
        return _split(params, _herz_split_exponent(params), 1 - zeta * n / params.q + zeta * params.beta)
    if kind == ConstantKind.C7:
        p, m = params.p, params.m
        upper_e, lower_e = _starred_split(params)
        upper, lower = [], []
        for j in range(m + 1):
            weight = LogMagnitude.from_real(math.comb(m, j) * 2.0 ** (m - j), p)
            up, low = _split(params, upper_e - j * zeta * n, lower_e + j * zeta * n)
            upper.append(weight * up)
            lower.append(weight * low)
        return log_combine(p, upper), log_combine(p, lower)
    raise ParameterOutOfRange(f"{kind.value} is not a split constant")


def structural_k(params: ConstantParams) -> LogMagnitude:
    """
    K = (1-p^{-(alpha+n)})^{1/q+lam} prod (1-p^{-n})^{lam_i}
        / [(1-p^{-n})^lam prod (1-p^{-(alpha_i+n)})^{1/q_i+lam_i}].
    """
    params.require("alphas", "qs", "lams")
    p, n = params.p, params.n
    log = lambda x: LogMagnitude.from_real(x, p)
    sphere = log(one_minus_power(p, n))
    value = log(one_minus_power(p, params.alpha + n)) ** (1 / params.q + params.lam)
    value = value / sphere ** params.lam
    for alpha_i, q_i, lam_i in zip(params.alphas, params.qs, params.lams):
        value = value * sphere ** lam_i / log(one_minus_power(p, alpha_i + n)) ** (1 / q_i + lam_i)
    return value


def herz_a(params: ConstantParams) -> LogMagnitude:
    """A(r) = p^{-rm/p^r} prod (1-p^{-ell_i/p^r})^{1/ell_i} / (1-p^{-m ell/p^r})^{1/ell}."""
    params.require("ells")
    p, m, r = params.p, params.m, params.r
    scale = float(p) ** r
    value = LogMagnitude.from_power(p, -r * m / scale)
    for ell_i in params.ells:
        value = value * LogMagnitude.from_real(one_minus_power(p, ell_i / scale), p) ** (1 / ell_i)
    denominator = LogMagnitude.from_real(one_minus_power(p, m * params.ell / scale), p)
    return value / denominator ** (1 / params.ell)


def herz_a_limit(ells: Sequence[float], ell: float) -> float:
    """Limit of A(r) as r grows: prod ell_i^{1/ell_i} / (m ell)^{1/ell}."""
    m = len(ells)
    return math.prod(e ** (1 / e) for e in ells) / (m * ell) ** (1 / ell)


def _evaluate(kind: ConstantKind, params: ConstantParams) -> LogMagnitude:
    n = params.n
    if kind == ConstantKind.STRUCTURAL_K:
        return structural_k(params)
    if kind == ConstantKind.HERZ_A:
        return herz_a(params)
    if kind in SPLIT_KINDS:
        upper, lower = split_constant(kind, params)
        return upper + lower

    morrey = 1 + (n + params.alpha) * params.lam
    herz = 1 - params.beta - (n + params.alpha) / params.q
    if kind == ConstantKind.C1:
        return _sum(params, morrey)
    if kind == ConstantKind.C3:
        return _sum(params, herz)
    if kind == ConstantKind.C5:
        return _sum(params, herz + params.lam_star)
    if kind == ConstantKind.C6:
        return _doubling_product_sum(params, morrey)
    if kind == ConstantKind.C6_STAR:
        if params.m < 1:
            raise ParameterOutOfRange(f"C6* needs m >= 1, got {params.m}")
        return abs(_sum(params, morrey, degree=params.m))

    starred = 1 - params.beta_star - (n + params.alpha) / params.q
    if kind == ConstantKind.C8:
        return _doubling_product_sum(params, starred + params.lam_star)
    return _doubling_product_sum(params, starred)


def theorem_constant(kind: ConstantKind, params: ConstantParams) -> LogMagnitude:
    """
    Evaluate a theorem constant.

    A divergent series is reported as LogMagnitude.diverges, not raised.

    Raises:
        ParameterOutOfRange: when the parameters do not fit the kind
    """
    try:
        value = _evaluate(kind, params)
    except NonconvergentSum as e:
        logger.warning(f"{kind.value} diverges: {e.message}", extra={"operation": "theorem_constant"})
        return LogMagnitude.diverges(params.p)
    logger.debug(f"{kind.value} = {value.to_real():.15g}")
    return value
