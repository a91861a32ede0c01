#############################################################################
# profiles.py
#
# path-gain variance profiles {alpha_l}: closed-form and tabulated decay
# laws, their tail sums, and parsing from structured-text specs
#
# Sat Oct 17 2026
#############################################################################

import logging
import math
import warnings
from functools import cached_property
from typing import Annotated, Any, ClassVar, List, Literal, Optional, Union

import numpy as np
from pydantic import (AliasChoices, BaseModel, ConfigDict, Field, TypeAdapter,
                      field_validator, model_validator)
from scipy.special import zeta

from asdrp.errors import ExtrapolationWarning, NonSummableError

logger = logging.getLogger(__name__)

# partial summation stops once the next term is below REL_TOL of the running sum
REL_TOL = 1e-12
MAX_TERMS = 10**6
CHUNK = 4096
# search ceiling for first_tail_below when every tail_sum call is closed form
MAX_CLOSED_FORM_INDEX = 2**62


class DecayProfile(BaseModel):
    """
    A nonnegative, summable sequence of path-gain variances alpha_0, alpha_1, ...

    Subclasses implement `log_alphas` (vectorised log alpha_l, -inf for a
    zero variance). Closed-form tails override `_closed_form_tail`; the rest
    fall back to adaptive partial summation.
    """
    model_config = ConfigDict(frozen=True)

    # kinds whose ratio alpha_{l+1}/alpha_l is nonincreasing admit a
    # geometric bound on the remainder of a partial sum
    _has_decreasing_ratio: ClassVar[bool] = False

    def log_alphas(self, ells: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def alphas(self, ells: np.ndarray) -> np.ndarray:
        with np.errstate(under="ignore"):
            return np.exp(self.log_alphas(np.asarray(ells)))

    @property
    def has_decreasing_ratio(self) -> bool:
        return self._has_decreasing_ratio

    @property
    def alpha_0(self) -> float:
        return float(self.alphas(np.array([0]))[0])

    @cached_property
    def total_alpha(self) -> float:
        """alpha = sum over all paths of alpha_l."""
        return self.alpha_0 + self.tail_sum(0)

    @property
    def has_closed_form_tail(self) -> bool:
        return self._closed_form_tail(0) is not None

    def is_extrapolated(self, ell: int) -> bool:
        return False

    def tail_sum(self, L: int) -> float:
        """Return sum_{l > L} alpha_l."""
        if L < 0:
            raise ValueError(f"L must be nonnegative, got {L}")
        closed = self._closed_form_tail(int(L))
        if closed is not None:
            return closed
        return _partial_tail(self, int(L) + 1)

    def _closed_form_tail(self, L: int) -> Optional[float]:
        return None

    def remainder_majorant(self, ells: np.ndarray) -> Optional[np.ndarray]:
        """
        Upper bound on sum_{j > l} alpha_j for each l in `ells`, or None when
        no dominating ratio is known for this kind.
        """
        if not self.has_decreasing_ratio:
            return None
        log_a = self.log_alphas(ells)
        log_next = self.log_alphas(ells + 1)
        with np.errstate(invalid="ignore", over="ignore", under="ignore"):
            ratio = np.exp(log_next - log_a)
            bound = np.exp(log_next) / (1.0 - ratio)
        return np.where(np.isfinite(log_a), bound, 0.0)


def _partial_tail(profile: DecayProfile, start: int) -> float:
    accumulated = 0.0
    ell = start
    while ell - start < MAX_TERMS:
        ells = np.arange(ell, ell + CHUNK)
        terms = profile.alphas(ells)
        running = accumulated + np.cumsum(terms)
        settled = terms <= REL_TOL * running
        majorant = profile.remainder_majorant(ells)
        if majorant is not None:
            settled &= majorant <= REL_TOL * running
        hits = np.flatnonzero(settled)
        if hits.size:
            stop = int(hits[0])
            logger.debug("partial tail from %d settled at l=%d", start, ell + stop)
            return float(running[stop])
        accumulated = float(running[-1])
        ell += CHUNK
    raise NonSummableError(
        f"{type(profile).__name__} tail from l={start} did not converge within {MAX_TERMS} terms"
    )


#-------------------------------------
# closed-form kinds
#-------------------------------------

class FiniteTaps(DecayProfile):
    """alpha_0..alpha_L given explicitly, zero beyond the last tap."""
    kind: Literal["finite"] = "finite"
    taps: List[float] = Field(..., min_length=1, description="Variances of the paths 0..L.")

    @field_validator("taps")
    @classmethod
    def validate_taps(cls, v: List[float]) -> List[float]:
        if any(not math.isfinite(t) or t < 0 for t in v):
            raise ValueError("taps must be finite and nonnegative")
        if v[0] <= 0:
            raise ValueError("alpha_0 must be positive")
        return v

    def log_alphas(self, ells: np.ndarray) -> np.ndarray:
        ells = np.asarray(ells)
        padded = np.zeros(ells.shape)
        inside = ells < len(self.taps)
        padded[inside] = np.asarray(self.taps)[ells[inside]]
        with np.errstate(divide="ignore"):
            return np.log(padded)

    @cached_property
    def total_alpha(self) -> float:
        return math.fsum(self.taps)

    def _closed_form_tail(self, L: int) -> Optional[float]:
        return math.fsum(self.taps[L + 1:])


class GeometricRatio(DecayProfile):
    """alpha_l = c * rho^l."""
    kind: Literal["geometric"] = "geometric"
    rho: float = Field(..., gt=0.0, lt=1.0, description="Decay ratio alpha_{l+1}/alpha_l.")
    scale: float = Field(
        default=1.0, gt=0.0,
        validation_alias=AliasChoices("scale", "c"),
        description="Variance of path 0.",
    )

    _has_decreasing_ratio: ClassVar[bool] = True

    def log_alphas(self, ells: np.ndarray) -> np.ndarray:
        return math.log(self.scale) + np.asarray(ells, dtype=float) * math.log(self.rho)

    @cached_property
    def total_alpha(self) -> float:
        return self.scale / (1.0 - self.rho)

    def _closed_form_tail(self, L: int) -> Optional[float]:
        return self.scale * self.rho ** (L + 1) / (1.0 - self.rho)


class StretchedExp(DecayProfile):
    """alpha_l = exp(-l^kappa), so alpha_0 = 1."""
    kind: Literal["stretched_exp"] = "stretched_exp"
    kappa: float = Field(..., gt=0.0, description="Stretch exponent.")

    @property
    def has_decreasing_ratio(self) -> bool:
        return self.kappa >= 1.0

    def log_alphas(self, ells: np.ndarray) -> np.ndarray:
        return -np.power(np.asarray(ells, dtype=float), self.kappa)


class DoubleExp(DecayProfile):
    """alpha_l = exp(-exp(l^kappa))."""
    kind: Literal["double_exp"] = "double_exp"
    kappa: float = Field(..., gt=0.0, description="Inner exponent.")

    _has_decreasing_ratio: ClassVar[bool] = True

    def log_alphas(self, ells: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore"):
            return -np.exp(np.power(np.asarray(ells, dtype=float), self.kappa))


class Polynomial(DecayProfile):
    """alpha_l = (l + 1)^(-p), summable for p > 1."""
    kind: Literal["polynomial"] = "polynomial"
    p: float = Field(..., gt=1.0, description="Decay exponent; p <= 1 diverges.")

    def log_alphas(self, ells: np.ndarray) -> np.ndarray:
        return -self.p * np.log1p(np.asarray(ells, dtype=float))

    @cached_property
    def total_alpha(self) -> float:
        return float(zeta(self.p, 1.0))

    def _closed_form_tail(self, L: int) -> Optional[float]:
        # Hurwitz zeta: sum_{n >= 0} (n + L + 2)^(-p) = sum_{l > L} (l + 1)^(-p)
        return float(zeta(self.p, L + 2.0))


#-------------------------------------
# tabulated data
#-------------------------------------

class ZeroTail(BaseModel):
    model_config = ConfigDict(frozen=True)
    kind: Literal["zero"] = "zero"


class GeometricTail(BaseModel):
    model_config = ConfigDict(frozen=True)
    kind: Literal["geometric"] = "geometric"
    rho: float = Field(..., gt=0.0, lt=1.0)


TailTag = Annotated[Union[ZeroTail, GeometricTail], Field(discriminator="kind")]


class Tabulated(DecayProfile):
    """
    A finite table of variances plus a declared tail: zero, or a geometric
    continuation alpha_{m+j} = alpha_m * rho^j from the last entry m.
    """
    kind: Literal["tabulated"] = "tabulated"
    values: List[float] = Field(..., min_length=1)
    tail: TailTag = Field(default_factory=ZeroTail)

    @field_validator("tail", mode="before")
    @classmethod
    def validate_tail(cls, v: Any) -> Any:
        if isinstance(v, str):
            return {"kind": v}
        return v

    @field_validator("values")
    @classmethod
    def validate_values(cls, v: List[float]) -> List[float]:
        if any(not math.isfinite(a) or a < 0 for a in v):
            raise ValueError("values must be finite and nonnegative")
        if v[0] <= 0:
            raise ValueError("alpha_0 must be positive")
        return v

    @property
    def last_index(self) -> int:
        return len(self.values) - 1

    def is_extrapolated(self, ell: int) -> bool:
        return ell > self.last_index

    def log_alphas(self, ells: np.ndarray) -> np.ndarray:
        ells = np.asarray(ells)
        out = np.zeros(ells.shape)
        inside = ells <= self.last_index
        out[inside] = np.asarray(self.values)[ells[inside]]
        with np.errstate(divide="ignore"):
            logs = np.log(out)
        if isinstance(self.tail, GeometricTail):
            beyond = ~inside
            with np.errstate(divide="ignore"):
                logs[beyond] = (
                    math.log(self.values[-1]) if self.values[-1] > 0 else -np.inf
                ) + (ells[beyond] - self.last_index) * math.log(self.tail.rho)
        return logs

    @cached_property
    def total_alpha(self) -> float:
        return self.values[0] + self.tail_sum(0)

    def _closed_form_tail(self, L: int) -> Optional[float]:
        tabled = math.fsum(self.values[L + 1:])
        if isinstance(self.tail, ZeroTail):
            return tabled
        rho = self.tail.rho
        # first extrapolated index contributing to the tail
        first = max(L + 1, self.last_index + 1)
        return tabled + self.values[-1] * rho ** (first - self.last_index) / (1.0 - rho)


#-------------------------------------
# operations
#-------------------------------------

ProfileSpec = Annotated[
    Union[FiniteTaps, GeometricRatio, StretchedExp, DoubleExp, Polynomial, Tabulated],
    Field(discriminator="kind"),
]
_PROFILE_ADAPTER: TypeAdapter = TypeAdapter(ProfileSpec)


def parse_profile(spec: Union[str, dict, DecayProfile]) -> DecayProfile:
    """Build a profile from a JSON string, a mapping, or pass one through."""
    if isinstance(spec, DecayProfile):
        return spec
    if isinstance(spec, str):
        return _PROFILE_ADAPTER.validate_json(spec)
    return _PROFILE_ADAPTER.validate_python(spec)


def alpha_at(profile: DecayProfile, ell: int) -> float:
    """Variance alpha_l of path `ell`."""
    if ell < 0:
        raise ValueError(f"path index must be nonnegative, got {ell}")
    if profile.is_extrapolated(ell):
        warnings.warn(
            f"path {ell} lies beyond the table; using the declared tail",
            ExtrapolationWarning,
            stacklevel=2,
        )
    return float(profile.alphas(np.array([ell]))[0])


def log_alpha_at(profile: DecayProfile, ell: int) -> float:
    return float(profile.log_alphas(np.array([ell]))[0])


def alpha_vector(profile: DecayProfile, n: int) -> np.ndarray:
    """alpha_0 .. alpha_{n-1} as an array, without extrapolation warnings."""
    return profile.alphas(np.arange(n))


def tail_sum(profile: DecayProfile, L: int) -> float:
    return profile.tail_sum(L)


def first_tail_below(profile: DecayProfile, threshold: float, scale: float = 1.0) -> int:
    """
    Smallest L >= 0 with tail_sum(profile, L) * scale <= threshold.

    Tails are nonincreasing in L, so the search gallops to a bracket and
    bisects inside it; the result equals a linear scan from L = 0.
    """
    if threshold <= 0 or scale <= 0:
        raise ValueError(f"threshold and scale must be positive, got {threshold}, {scale}")

    def above(L: int) -> bool:
        return profile.tail_sum(L) * scale > threshold

    if not above(0):
        return 0
    # partial sums cost O(L) per call; closed forms are O(1)
    limit = MAX_CLOSED_FORM_INDEX if profile.has_closed_form_tail else MAX_TERMS
    lo, hi = 0, 1
    while above(hi):
        lo, hi = hi, 2 * hi
        if hi > limit:
            raise NonSummableError(f"tail stays above {threshold:g} beyond l={limit}")
    # invariant: above(lo) and not above(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if above(mid):
            lo = mid
        else:
            hi = mid
    logger.debug("first tail below %g at L=%d", threshold, hi)
    return hi


def majorant_onset(profile: DecayProfile, rho: float, search_limit: int = 10_000) -> Optional[int]:
    """
    Smallest l0 such that alpha_l < rho^l for every inspected l > l0.

    Returns None when alpha_l >= rho^l still holds at `search_limit`, i.e.
    the profile does not (visibly) decay faster than rho^l.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho}")
    ells = np.arange(1, search_limit + 1)
    violating = np.flatnonzero(profile.log_alphas(ells) >= ells * math.log(rho))
    if violating.size == 0:
        return 0
    last = int(ells[violating[-1]])
    if last == search_limit:
        return None
    return last


if __name__ == "__main__":

    def print_result(test_name, passed):
        print(f"{test_name}: {'PASSED' if passed else 'FAILED'}")

    geo = parse_profile({"kind": "geometric", "rho": 0.5})
    print_result("Geometric tail 2^-7", abs(tail_sum(geo, 7) - 2 ** -7) < 1e-15)
    se = parse_profile('{"kind": "stretched_exp", "kappa": 2.0}')
    print_result("Stretched-exp tail", abs(tail_sum(se, 3) - 1.1254e-7) < 1e-10)
    print_result("Finite taps zero tail", tail_sum(FiniteTaps(taps=[1.0, 0.5]), 1) == 0.0)
