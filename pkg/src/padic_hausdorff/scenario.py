"""
Verification Scenarios
A scenario fixes the prime, the dimension, the per-factor exponents, the
aggregate exponents of the target space, the kernel, the angular factor and
optionally the input functions, together with the theorem it exercises.
Missing aggregates are derived from the per-factor values; explicit ones are
checked against them.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Tuple

from .config import get_config
from .functions import AngularFactor, SeparableFunction
from .models.report import SHARPNESS_THEOREMS, Theorem, VerificationMode
from .operators import PhiKernel
from .utils.error_handling import ParameterOutOfRange
from .weights import classify_power_weight

logger = logging.getLogger(__name__)

Window = Tuple[int, int]


SECTION_THREE = (Theorem.T31, Theorem.T32, Theorem.T33, Theorem.T34I, Theorem.T34II, Theorem.T35)
SECTION_FOUR = (Theorem.T41I, Theorem.T41II, Theorem.T43, Theorem.COR44)
SINGLE_WEIGHT = (Theorem.T32, Theorem.T34I, Theorem.T34II, Theorem.T42)
COMMUTATORS = (Theorem.T41I, Theorem.T41II, Theorem.T42, Theorem.T43, Theorem.COR44)


@dataclass(frozen=True)
class Scenario:
    """
    Full parameter tuple of one verification run.

    For T32 and T34 ``q`` is the auxiliary exponent with sum 1/q_i = 1/q and
    ``q_star`` the target exponent. For T42 ``qs`` and ``rs`` are the starred
    input exponents q_i*, r_i* and ``q`` the target exponent. For T34 the
    target Herz index is ``beta_star``.
    """
    scenario_id: str
    theorem: Theorem
    p: int
    n: int
    qs: Tuple[float, ...] = (1.0,)
    alphas: Tuple[float, ...] = ()
    lams: Tuple[float, ...] = ()
    betas: Tuple[float, ...] = ()
    ells: Tuple[float, ...] = ()
    rs: Tuple[float, ...] = ()
    q: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    ell: Optional[float] = None
    lam: Optional[float] = None
    lam_star: Optional[float] = None
    beta_star: Optional[float] = None
    q_star: Optional[float] = None
    zeta: float = 1.0
    delta: Optional[float] = None
    kernel: PhiKernel = field(default_factory=lambda: PhiKernel.delta(0))
    omega: Optional[AngularFactor] = None
    functions: Tuple[SeparableFunction, ...] = ()
    symbols: Tuple[SeparableFunction, ...] = ()
    draws: Optional[int] = None
    window: Optional[Window] = None
    herz_indices: Tuple[int, ...] = (1, 2, 3, 4, 5, 6)
    mode: Optional[VerificationMode] = None

    def __post_init__(self):
        m = len(self.qs)
        if m < 1:
            raise ParameterOutOfRange("a scenario needs at least one factor")
        defaults = {"lams": 0.0, "betas": 0.0, "ells": 1.0, "rs": math.inf}
        for name, default in defaults.items():
            if not getattr(self, name):
                object.__setattr__(self, name, (default,) * m)
        if not self.alphas:
            base = self.alpha if self.alpha is not None else 0.0
            object.__setattr__(self, "alphas", (base,) * m)
        for name in ("qs", "alphas", "lams", "betas", "ells", "rs"):
            values = tuple(float(v) for v in getattr(self, name))
            if len(values) != m:
                raise ParameterOutOfRange(
                    f"{name} has {len(values)} entries for m={m}", details={"field": name}
                )
            object.__setattr__(self, name, values)
        if self.mode is None:
            sharp = self.theorem in SHARPNESS_THEOREMS
            mode = VerificationMode.SHARPNESS if sharp else VerificationMode.SUFFICIENCY
            object.__setattr__(self, "mode", mode)
        if self.omega is None:
            object.__setattr__(self, "omega", AngularFactor.constant(self.p, self.n))
        for name, value in self._derived().items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, value)

    @property
    def m(self) -> int:
        return len(self.qs)

    @property
    def section_four(self) -> bool:
        return self.theorem in SECTION_FOUR

    def _inverse_exponents(self) -> List[float]:
        """1/q_i, plus 1/r_i for the commutator theorems with split exponents."""
        if self.section_four:
            return [1 / q + 1 / r for q, r in zip(self.qs, self.rs)]
        return [1 / q for q in self.qs]

    def _derived(self) -> Dict[str, float]:
        n = self.n
        inverse_ell = math.fsum(1 / e for e in self.ells)
        derived: Dict[str, float] = {
            "beta": math.fsum(self.betas),
            "ell": 1 / inverse_ell if inverse_ell > 0 else math.inf,
            "lam_star": math.fsum(self.lams),
        }
        if self.theorem == Theorem.T42:
            derived["alpha"] = self.alphas[0]
            return derived
        inverse = self._inverse_exponents()
        q = 1 / math.fsum(inverse)
        derived["q"] = q if self.q is None else self.q
        derived["alpha"] = q * math.fsum(a * i for a, i in zip(self.alphas, inverse))
        alpha = self.alpha if self.alpha is not None else derived["alpha"]
        derived["lam"] = math.fsum((n + a) * l for a, l in zip(self.alphas, self.lams)) / (n + alpha)
        if self.section_four:
            derived["beta_star"] = math.fsum(self.betas) - math.fsum(
                (n + a) / r for a, r in zip(self.alphas, self.rs)
            )
        elif self.q_star is not None:
            derived["beta_star"] = n * (1 / derived["q"] - 1 / self.q_star) + derived["beta"]
        return derived

    def with_changes(self, **changes) -> 'Scenario':
        return replace(self, **changes)


# ----------------------------------------------------------------------
# Homogeneity relations
# ----------------------------------------------------------------------

def _close(lhs: float, rhs: float) -> bool:
    tolerance = get_config().verification.homogeneity_tolerance
    return abs(lhs - rhs) <= tolerance * max(1.0, abs(lhs), abs(rhs))


def _relations(s: Scenario) -> List[Tuple[str, Tuple[Theorem, ...], Callable[[Scenario], Tuple[float, float]]]]:
    n = s.n
    inverse = s._inverse_exponents()
    herz_family = (Theorem.T33, Theorem.T34I, Theorem.T34II, Theorem.T35, Theorem.T43, Theorem.COR44)
    return [
        ("sum 1/q_i = 1/q", SECTION_THREE,
         lambda s: (math.fsum(1 / q for q in s.qs), 1 / s.q)),
        ("sum (1/q_i + 1/r_i) = 1/q", SECTION_FOUR,
         lambda s: (math.fsum(inverse), 1 / s.q)),
        ("sum alpha_i/q_i = alpha/q", SECTION_THREE,
         lambda s: (math.fsum(a / q for a, q in zip(s.alphas, s.qs)), s.alpha / s.q)),
        ("sum alpha_i (1/q_i + 1/r_i) = alpha/q", SECTION_FOUR,
         lambda s: (math.fsum(a * i for a, i in zip(s.alphas, inverse)), s.alpha / s.q)),
        ("sum beta_i = beta", herz_family,
         lambda s: (math.fsum(s.betas), s.beta)),
        ("sum 1/ell_i = 1/ell", herz_family,
         lambda s: (math.fsum(1 / e for e in s.ells), 1 / s.ell)),
        ("sum (n+alpha_i) lambda_i = (n+alpha) lambda", (Theorem.T31, Theorem.T41I, Theorem.T41II),
         lambda s: (math.fsum((n + a) * l for a, l in zip(s.alphas, s.lams)), (n + s.alpha) * s.lam)),
        ("lambda* = sum lambda_i", (Theorem.T32, Theorem.T35, Theorem.T42, Theorem.T43, Theorem.COR44),
         lambda s: (s.lam_star, math.fsum(s.lams))),
        ("1/q* + beta*/n = 1/q + beta/n", (Theorem.T34I, Theorem.T34II),
         lambda s: (1 / s.q_star + s.beta_star / n, 1 / s.q + s.beta / n)),
        ("beta* = sum beta_i - sum (n+alpha_i)/r_i", (Theorem.T43, Theorem.COR44),
         lambda s: (s.beta_star, math.fsum(s.betas) - math.fsum((n + a) / r for a, r in zip(s.alphas, s.rs)))),
    ]


def check_homogeneity(s: Scenario) -> List[str]:
    """Names of the homogeneity relations of the scenario's theorem that fail."""
    violated = []
    for name, theorems, sides in _relations(s):
        if s.theorem not in theorems:
            continue
        try:
            lhs, rhs = sides(s)
        except (TypeError, ZeroDivisionError):
            violated.append(name)
            continue
        if not _close(lhs, rhs):
            violated.append(name)
    if violated:
        logger.debug(f"Scenario {s.scenario_id} violates {violated}")
    return violated


# ----------------------------------------------------------------------
# Standing hypotheses
# ----------------------------------------------------------------------

def critical_index(s: Scenario) -> Optional[float]:
    """Reverse Holder index of |x|^alpha, or None when the weight is not in A_zeta."""
    classification = classify_power_weight(s.p, s.n, s.alpha, s.zeta)
    if not classification.member:
        return None
    return classification.reverse_holder_index


def resolved_delta(s: Scenario) -> Optional[float]:
    """delta, defaulting to the midpoint of (1, r_w)."""
    if s.delta is not None:
        return s.delta
    index = critical_index(s)
    if index is None or math.isinf(index):
        return None
    return (1 + index) / 2


def _muckenhoupt_problems(s: Scenario) -> List[str]:
    problems = []
    index = critical_index(s)
    if index is None:
        return [f"|x|^{s.alpha} is not in A_{s.zeta}"]
    if math.isinf(index):
        return [f"|x|^{s.alpha} has no finite reverse Holder index (needs -n < alpha < 0)"]
    delta = resolved_delta(s)
    if not 1 < delta < index:
        problems.append(f"delta={delta} must lie in (1, {index})")
    if s.theorem in (Theorem.T32, Theorem.T34I, Theorem.T34II):
        if s.q_star is None or s.q_star < 1:
            problems.append("q* must be given and >= 1")
        elif not s.q > s.q_star * s.zeta * index / (index - 1):
            problems.append(f"q={s.q} must exceed q* zeta r_w/(r_w-1)={s.q_star * s.zeta * index / (index - 1)}")
    if s.theorem == Theorem.T42:
        if s.q is None:
            return problems + ["the target exponent q must be given"]
        total = math.fsum(1 / r for r in s.rs) + math.fsum(1 / q for q in s.qs)
        if not 1 / s.q > total * s.zeta * index / (index - 1):
            problems.append("1/q must exceed (sum 1/r_i* + sum 1/q_i*) zeta r_w/(r_w-1)")
    return problems


def check_hypotheses(s: Scenario) -> List[str]:
    """Standing hypotheses of the scenario's theorem that fail, as messages."""
    t, n = s.theorem, s.n
    problems: List[str] = []
    if any(q < 1 for q in s.qs) or (s.q is not None and s.q < 1):
        problems.append("exponents q_i and q must be >= 1")
    if any(e < 1 for e in s.ells):
        problems.append("ell_i must be >= 1")
    if any(a <= -n for a in s.alphas) or (s.alpha is not None and s.alpha <= -n):
        problems.append("weight exponents must exceed -n")
    if s.section_four and any(r < 1 or math.isinf(r) for r in s.rs):
        problems.append("r_i must be finite and >= 1")

    if t in (Theorem.T31, Theorem.T32, Theorem.T41I, Theorem.T41II, Theorem.T42):
        for i, (lam, q) in enumerate(zip(s.lams, s.qs), 1):
            if not -1 / q < lam < 0:
                problems.append(f"lambda_{i}={lam} must lie in (-1/q_{i}, 0) = ({-1 / q}, 0)")
    if t == Theorem.T35:
        for i, lam in enumerate(s.lams, 1):
            if not lam > 0:
                problems.append(f"lambda_{i}={lam} must be > 0")
    if t == Theorem.T43 and any(lam < 0 for lam in s.lams):
        problems.append("lambda_i must be >= 0")
    if t == Theorem.COR44 and any(lam != 0 for lam in s.lams):
        problems.append("lambda_i must be 0")
    if t in (Theorem.T34I, Theorem.T34II):
        if any(b >= 0 for b in s.betas):
            problems.append("beta_i must be negative")
        signs = [1 / q + b / n >= 0 for q, b in zip(s.qs, s.betas)]
        if t == Theorem.T34I and not all(signs):
            problems.append("case (i) needs 1/q_i + beta_i/n >= 0 for every i")
        if t == Theorem.T34II and any(signs):
            problems.append("case (ii) needs 1/q_i + beta_i/n < 0 for every i")
    if t in SINGLE_WEIGHT:
        if any(a != s.alpha for a in s.alphas):
            problems.append("single-weight theorems need alpha_i = alpha")
        problems.extend(_muckenhoupt_problems(s))
    if t in COMMUTATORS and s.symbols and len(s.symbols) != s.m:
        problems.append(f"{len(s.symbols)} symbols for m={s.m}")
    if s.functions and len(s.functions) != s.m:
        problems.append(f"{len(s.functions)} functions for m={s.m}")
    if t == Theorem.HARDY and s.m != 1:
        problems.append("the Hardy reduction is linear (m = 1)")
    return problems
