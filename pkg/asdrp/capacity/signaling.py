#############################################################################
# signaling.py
#
# guard-interval / log-uniform input distribution: guard-length selection,
# block sampling and the closed-form moments of the block law
#
# Sat Oct 17 2026
#############################################################################

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

from asdrp.channel.profiles import DecayProfile, first_tail_below
from asdrp.errors import (DomainError, GuardLengthClampedWarning,
                          InvalidPowerError)

logger = logging.getLogger(__name__)

# relative slack for round-off at equality in tail * P <= sigma^2 and in the
# closed-form ceiling
GUARD_RTOL = 1e-12
CEIL_SLACK = GUARD_RTOL


@dataclass(frozen=True)
class SignalingScheme:
    """
    Blocks of `guard_len` zeros followed by `data_len` independent symbols;
    symbol nu has log|X|^2 uniform on [(nu-1) log P / tau, nu log P / tau].
    """
    guard_len: int
    data_len: int
    power: float

    def __post_init__(self):
        if self.guard_len < 0:
            raise ValueError(f"guard_len must be nonnegative, got {self.guard_len}")
        if self.data_len < 1:
            raise ValueError(f"data_len must be positive, got {self.data_len}")
        _check_power(self.power)

    @classmethod
    def with_equal_lengths(cls, guard_len: int, power: float) -> "SignalingScheme":
        """tau = L, with tau >= 1 when the guard is empty."""
        return cls(guard_len=guard_len, data_len=max(1, guard_len), power=power)

    @property
    def block_len(self) -> int:
        return self.guard_len + self.data_len

    @property
    def log_power(self) -> float:
        return math.log(self.power)

    def slot_interval(self, nu: int) -> tuple:
        """Bounds (P^((nu-1)/tau), P^(nu/tau)) on |X|^2 in data slot nu."""
        step = self.log_power / self.data_len
        return math.exp((nu - 1) * step), math.exp(nu * step)


def _check_power(power: float) -> None:
    if not power > 1.0:
        raise InvalidPowerError(f"the scheme needs P > 1, got {power}")


def select_guard_length(profile: DecayProfile, power: float, sigma_sq: float) -> int:
    """Smallest L with tail_sum(profile, L) * P <= sigma^2 (to GUARD_RTOL)."""
    if power <= 0 or sigma_sq <= 0:
        raise DomainError(f"P and sigma^2 must be positive, got P={power}, sigma^2={sigma_sq}")
    return first_tail_below(profile, sigma_sq * (1.0 + GUARD_RTOL), scale=power)


def guard_satisfied(profile: DecayProfile, L: int, power: float, sigma_sq: float) -> bool:
    """Whether L meets tail_sum(profile, L) * P <= sigma^2 (to GUARD_RTOL)."""
    return profile.tail_sum(L) * power <= sigma_sq * (1.0 + GUARD_RTOL)


def guard_length_closed_form(rho: float, snr: float) -> int:
    """
    ceil(log(snr * rho / (1 - rho)) / log(1 / rho)): the guard length that makes
    rho^L * rho / (1 - rho) * snr <= 1. Clamped to 0 (with a warning) when the
    ratio inside the ceiling is not positive.
    """
    if not 0.0 < rho < 1.0:
        raise DomainError(f"rho must lie in (0, 1), got {rho}")
    if not snr > 0.0:
        raise DomainError(f"snr must be positive, got {snr}")

    log_inner = math.log(snr) + math.log(rho) - math.log1p(-rho)
    raw = log_inner / -math.log(rho)
    if raw <= 0.0:
        warnings.warn(
            f"closed-form guard length {raw:.3g} <= 0 for rho={rho}, snr={snr}; using 0",
            GuardLengthClampedWarning,
            stacklevel=2,
        )
        return 0

    L = math.ceil(raw - CEIL_SLACK * max(1.0, raw))
    # exact check in the log domain, tolerant to round-off at equality
    while L * math.log(rho) + log_inner > CEIL_SLACK:
        L += 1
    return L


def sample_blocks(scheme: SignalingScheme, n_blocks: int, rng: np.random.Generator) -> np.ndarray:
    """`n_blocks` IID blocks, shape (n_blocks, L + tau)."""
    _check_power(scheme.power)
    tau = scheme.data_len
    step = scheme.log_power / tau
    nu = np.arange(1, tau + 1)
    log_mag_sq = rng.uniform((nu - 1) * step, nu * step, size=(n_blocks, tau))
    phase = rng.uniform(0.0, 2.0 * math.pi, size=(n_blocks, tau))
    blocks = np.zeros((n_blocks, scheme.block_len), dtype=complex)
    blocks[:, scheme.guard_len:] = np.exp(0.5 * log_mag_sq + 1j * phase)
    return blocks


def sample_block(scheme: SignalingScheme, rng: np.random.Generator) -> np.ndarray:
    """One block (0, ..., 0, X_1, ..., X_tau) of length L + tau."""
    return sample_blocks(scheme, 1, rng)[0]


def sample_sequence(scheme: SignalingScheme, n_blocks: int, rng: np.random.Generator) -> np.ndarray:
    """Blocks laid end to end: the transmit sequence x_1 .. x_{n_blocks (L + tau)}."""
    return sample_blocks(scheme, n_blocks, rng).ravel()


def expected_block_power(scheme: SignalingScheme) -> float:
    """
    Exact average power per channel use, tau (P - 1) / ((L + tau) log P).
    Never exceeds P since log P > (P - 1) / P for P > 1.
    """
    _check_power(scheme.power)
    P = scheme.power
    return scheme.data_len * (P - 1.0) / (scheme.block_len * math.log(P))


def log_magnitude_mean(scheme: SignalingScheme, nu: int) -> float:
    """E[log|X_nu|^2] = (nu - 1/2) log P / tau, the midpoint of the slot interval."""
    if not 1 <= nu <= scheme.data_len:
        raise ValueError(f"slot must lie in 1..{scheme.data_len}, got {nu}")
    return (nu - 0.5) * scheme.log_power / scheme.data_len


def entropy_gap(power: float, tau: int) -> float:
    """
    h(X) - E[log|X|^2] for a circularly-symmetric symbol whose log|X|^2 is
    uniform on an interval of width log P / tau: log(log P^(1/tau)) + log pi.
    The slot index does not enter.
    """
    _check_power(power)
    return math.log(math.log(power) / tau) + math.log(math.pi)
