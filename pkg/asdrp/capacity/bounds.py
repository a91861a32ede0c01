#############################################################################
# bounds.py
#
# analytic achievability bounds: the scalar fading-channel lemma, the
# per-slot bound of the log-uniform scheme, the Upsilon constant, the
# capacity lower bound and its high-SNR limit
#
# Sat Oct 17 2026
#############################################################################

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from asdrp.capacity.base import BoundReport
from asdrp.capacity.quadrature import converged_rule
from asdrp.capacity.signaling import (guard_length_closed_form,
                                      guard_satisfied, select_guard_length)
from asdrp.channel.profiles import DecayProfile, alpha_vector
from asdrp.errors import DomainError, GuardTooShortError

logger = logging.getLogger(__name__)

# Euler-Mascheroni constant to 20 significant digits
EULER_GAMMA = 0.57721566490153286061
# slack for E[log|H|^2] <= log E|H|^2
JENSEN_SLACK = 1e-12
# guard lengths beyond this sum alpha_1..alpha_L by complement
NEAR_SUM_TERMS = 10**5


@dataclass(frozen=True)
class ScalarChannelParams:
    """
    Y = H X + W with Var(H) = alpha_h > 0, Var(W) = sigma_w_sq >= 0 and
    E[log|H|^2] = e_log_h_sq (nats).
    """
    alpha_h: float
    e_log_h_sq: float
    sigma_w_sq: float

    def __post_init__(self):
        if not self.alpha_h > 0:
            raise DomainError(f"fading variance must be positive, got {self.alpha_h}")
        if self.sigma_w_sq < 0:
            raise DomainError(f"disturbance variance must be nonnegative, got {self.sigma_w_sq}")
        if self.e_log_h_sq > math.log(self.alpha_h) + JENSEN_SLACK:
            raise DomainError(
                f"E[log|H|^2]={self.e_log_h_sq} exceeds log E|H|^2={math.log(self.alpha_h)}"
            )

    @classmethod
    def gaussian(cls, alpha_h: float, sigma_w_sq: float) -> "ScalarChannelParams":
        return cls(alpha_h=alpha_h, e_log_h_sq=e_log_h_sq_gaussian(alpha_h), sigma_w_sq=sigma_w_sq)


@dataclass(frozen=True)
class WPowerBound:
    """
    Bound alpha + 2 sigma^2 on E|W|^2 / |X|^2 and the tighter intermediate
    sum_{l=1}^{L} alpha_l + tail * P + sigma^2 it is derived from.
    """
    bound: float
    intermediate: float


@dataclass(frozen=True)
class LimitPoint:
    snr: float
    guard_len: int
    lower_bound_raw: float
    limit: float

    @property
    def gap(self) -> float:
        return self.limit - self.lower_bound_raw


def e_log_h_sq_gaussian(alpha: float) -> float:
    """E[log|H|^2] = log(alpha) - gamma for H ~ CN(0, alpha)."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return math.log(alpha) - EULER_GAMMA


def lemma_lower_bound(
    params: ScalarChannelParams,
    h_x: float,
    e_log_x_sq: float,
    e_log_penalty: float,
) -> float:
    """
    I(X; HX + W) >= h(X) - E[log|X|^2] + E[log|H|^2] - E[log(pi e (sigma_H + sigma_W/|X|)^2)].
    `e_log_penalty` is the last expectation, computed under the input law.
    """
    return h_x - e_log_x_sq + params.e_log_h_sq - e_log_penalty


def bounded_penalty(alpha_0: float, w_power: float) -> float:
    """
    log(pi e) + 2 log(sqrt(alpha_0) + sqrt(w_power)): the penalty expectation
    once |X|^2 >= 1 is used to drop the dependence on X.
    """
    return 1.0 + math.log(math.pi) + 2.0 * math.log(math.sqrt(alpha_0) + math.sqrt(w_power))


def exact_penalty(params: ScalarChannelParams, power: float, tau: int, nu: int = 1) -> float:
    """
    E[log(pi e (sigma_H + sigma_W / |X|)^2)] with log|X|^2 uniform on the
    slot-nu interval of the log-uniform scheme; never above `bounded_penalty`.
    """
    if not power > 1:
        raise DomainError(f"P must exceed 1, got {power}")
    step = math.log(power) / tau
    sigma_h = math.sqrt(params.alpha_h)
    sigma_w = math.sqrt(params.sigma_w_sq)
    _, value = converged_rule(
        lambda u: 2.0 * np.log(sigma_h + sigma_w * np.exp(-0.5 * u)),
        (nu - 1) * step,
        nu * step,
    )
    return 1.0 + math.log(math.pi) + value


def scheme_slot_bound(
    alpha_0: float,
    e_log_h0_sq: float,
    power: float,
    tau: int,
    w_power: float,
) -> float:
    """
    Per-slot bound log log P^(1/tau) + E[log|H_0|^2] - 1 - 2 log(sqrt(alpha_0) + sqrt(w_power)),
    the same for every slot and block. Negative when P^(1/tau) <= e.
    """
    if not power > 1:
        raise DomainError(f"log P^(1/tau) must be positive; got P={power}")
    return (
        math.log(math.log(power) / tau)
        + e_log_h0_sq
        - 1.0
        - 2.0 * math.log(math.sqrt(alpha_0) + math.sqrt(w_power))
    )


def w_power_bound(profile: DecayProfile, L: int, power: float, sigma_sq: float) -> WPowerBound:
    """Bound on E|W|^2/|X|^2 for guard length L; L must satisfy the guard condition."""
    tail = profile.tail_sum(L)
    if not guard_satisfied(profile, L, power, sigma_sq):
        raise GuardTooShortError(
            f"L={L} leaves tail*P={tail * power:.6g} above sigma^2={sigma_sq:.6g}"
        )
    if L < NEAR_SUM_TERMS:
        near = math.fsum(alpha_vector(profile, L + 1)[1:])
    else:
        near = profile.total_alpha - profile.alpha_0 - tail
    return WPowerBound(
        bound=profile.total_alpha + 2.0 * sigma_sq,
        intermediate=near + tail * power + sigma_sq,
    )


def upsilon(e_log_h0_sq: float, alpha_0: float, alpha: float, sigma_sq: float) -> float:
    """Upsilon = E[log|H_0|^2] - 1 - 2 log(sqrt(alpha_0) + sqrt(alpha + 2 sigma^2))."""
    if not alpha_0 > 0:
        raise DomainError(f"alpha_0 must be positive, got {alpha_0}")
    if alpha < alpha_0 * (1.0 - JENSEN_SLACK):
        raise DomainError(f"total variance {alpha} is below alpha_0={alpha_0}")
    if not sigma_sq > 0:
        raise DomainError(f"sigma^2 must be positive, got {sigma_sq}")
    return e_log_h0_sq - 1.0 - 2.0 * math.log(math.sqrt(alpha_0) + math.sqrt(alpha + 2.0 * sigma_sq))


def gaussian_upsilon(profile: DecayProfile, sigma_sq: float) -> float:
    """Upsilon for Gaussian path gains with the given variance profile."""
    alpha_0 = profile.alpha_0
    return upsilon(e_log_h_sq_gaussian(alpha_0), alpha_0, profile.total_alpha, sigma_sq)


def capacity_lower_bound(
    L: int,
    tau: int,
    power: float,
    upsilon: float,
    snr: Optional[float] = None,
    rho: Optional[float] = None,
) -> BoundReport:
    """
    C(SNR) >= tau/(L + tau) * (log log P^(1/tau) + Upsilon), reported raw and
    clamped at 0. With `rho`, the report also carries asymptotic_limit(rho, Upsilon).
    """
    if not power > 1:
        raise DomainError(f"the bound needs P > 1, got {power}")
    if tau < 1 or L < 0:
        raise DomainError(f"need tau >= 1 and L >= 0, got tau={tau}, L={L}")
    weight = tau / (L + tau)
    raw = weight * (math.log(math.log(power) / tau) + upsilon)
    return BoundReport(
        guard_len=L,
        data_len=tau,
        power=power,
        upsilon=upsilon,
        lower_bound_raw=raw,
        lower_bound=max(0.0, raw),
        snr=snr,
        asymptotic_limit=None if rho is None else asymptotic_limit(rho, upsilon),
    )


def asymptotic_limit(rho: float, upsilon: float) -> float:
    """1/2 log log(1/rho) + 1/2 Upsilon; negative raw value for rho >= 1/e."""
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (0, 1), got {rho}")
    return 0.5 * math.log(-math.log(rho)) + 0.5 * upsilon


def pre_loglog(report: BoundReport) -> float:
    """lower_bound_raw / log log SNR."""
    if report.snr is None or not report.snr > math.e:
        raise DomainError("pre-loglog needs a report with SNR > e")
    return report.lower_bound_raw / math.log(math.log(report.snr))


def evaluate_scheme(
    profile: DecayProfile,
    snr: float,
    sigma_sq: float,
    tau: Optional[int] = None,
    rho: Optional[float] = None,
) -> BoundReport:
    """
    Bound at one SNR: P = SNR * sigma^2, L from the tail-sum scan, tau = L
    (at least 1) unless fixed, Upsilon for Gaussian gains.
    """
    power = snr * sigma_sq
    L = select_guard_length(profile, power, sigma_sq)
    data_len = tau if tau is not None else max(1, L)
    return capacity_lower_bound(
        L, data_len, power, gaussian_upsilon(profile, sigma_sq), snr=snr, rho=rho
    )


def limit_trajectory(
    rho: float,
    upsilon: float,
    snrs: Sequence[float],
    sigma_sq: float = 1.0,
) -> List[LimitPoint]:
    """
    Bound with L from the closed form and tau = L along `snrs`, next to its
    SNR -> infinity limit. Points whose guard length is 0 are skipped.
    """
    limit = asymptotic_limit(rho, upsilon)
    points = []
    for snr in snrs:
        L = guard_length_closed_form(rho, snr)
        if L == 0:
            continue
        report = capacity_lower_bound(L, L, snr * sigma_sq, upsilon, snr=snr)
        points.append(LimitPoint(snr=snr, guard_len=L, lower_bound_raw=report.lower_bound_raw, limit=limit))
    return points
