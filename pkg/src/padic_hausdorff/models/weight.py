"""Weight Models"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple


@dataclass(frozen=True)
class WeightClassification:
    """Muckenhoupt membership of |x|_p^alpha"""
    alpha: float
    ell: float
    member: bool
    reverse_holder_index: Optional[float]
    locally_integrable: bool = True


@dataclass
class SandwichReport:
    """Fitted constants for C1 (|E|/|B|)^ell <= w(E)/w(B) <= C2 (|E|/|B|)^{(r-1)/r}"""
    lower_constant: float
    upper_constant: float
    pairs_checked: int
    passed: bool
    worst_pairs: List[Tuple[str, str]] = field(default_factory=list)


@dataclass
class MeanBoundReport:
    """Fitted constant for the unweighted mean versus weighted ell-mean bound"""
    constant: float
    balls_checked: int
    passed: bool
    per_ball: List[float] = field(default_factory=list)
