#############################################################################
# base.py
#
# result types returned by the capacity modules
#
# Sat Oct 17 2026
#############################################################################

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

from pydantic import TypeAdapter


@dataclass(frozen=True)
class BoundReport:
    guard_len: int
    data_len: int
    power: float
    upsilon: float
    lower_bound_raw: float
    lower_bound: float
    snr: Optional[float] = None
    asymptotic_limit: Optional[float] = None


@dataclass(frozen=True)
class MiEstimate:
    """Mutual information in nats with the Monte-Carlo standard error of h(Y)."""
    value: float
    std_err: float
    n_samples: int


class Verdict(str, Enum):
    BOUNDED = "bounded"
    UNBOUNDED = "unbounded"
    INDETERMINATE = "indeterminate"


class Rule(str, Enum):
    # liminf alpha_{l+1}/alpha_l > 0  => bounded
    RATIO_LIMINF_POSITIVE = "ratio_liminf_positive"
    # (1/l) log(1/alpha_l) -> inf  => unbounded
    SUPER_EXPONENTIAL_DECAY = "super_exponential_decay"
    # alpha_{l+1}/alpha_l -> 0  => unbounded
    RATIO_TO_ZERO = "ratio_to_zero"
    # (1/l) log log(1/alpha_l) -> inf  => unbounded
    DOUBLE_EXPONENTIAL_DECAY = "double_exponential_decay"
    NONE = "none"

    @property
    def verdict(self) -> Verdict:
        if self is Rule.RATIO_LIMINF_POSITIVE:
            return Verdict.BOUNDED
        if self is Rule.NONE:
            return Verdict.INDETERMINATE
        return Verdict.UNBOUNDED


@dataclass(frozen=True)
class Witness:
    """
    Trajectories behind a verdict; inf encodes a/0 and log(1/0).

    For n inspected lags, ells = (0, .., n-1) while the other two have n-1
    entries: ratios[i] = alpha_{i+1} / alpha_i belongs to ells[i] (l = 0..n-2)
    and decay_rates[i] = log(1/alpha_l) / l belongs to ells[i + 1] (l = 1..n-1).
    """
    ells: Tuple[int, ...]
    ratios: Tuple[float, ...]
    decay_rates: Tuple[float, ...]


@dataclass(frozen=True)
class ClassificationReport:
    verdict: Verdict
    rule: Rule
    witness: Witness
    rules_fired: Tuple[Rule, ...] = ()
    symbolic: bool = True
    caveats: Tuple[str, ...] = field(default_factory=tuple)


def finite_or_none(value):
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: finite_or_none(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [finite_or_none(v) for v in value]
    return value


def to_jsonable(result) -> dict:
    """Plain-JSON view of any result dataclass (non-finite floats become null)."""
    return finite_or_none(TypeAdapter(type(result)).dump_python(result, mode="json"))
