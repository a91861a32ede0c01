#############################################################################
# simulator.py
#
# discrete-time multipath fading channel
#
#     Y_k = sum_{l=0}^{min(k-1, depth)} H_k^(l) x_{k-l} + Z_k
#
# with IID-in-time circularly-symmetric complex Gaussian path gains and
# noise, drawn from seeded, independently keyed substreams
#
# Sat Oct 17 2026
#############################################################################

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from asdrp.channel.profiles import (DecayProfile, FiniteTaps, ProfileSpec,
                                    Tabulated, ZeroTail, alpha_vector,
                                    first_tail_below)
from asdrp.errors import TruncationTooShallowWarning

logger = logging.getLogger(__name__)

# substream keys: gains are keyed (PATH_STREAM, l, block), noise (NOISE_STREAM, block)
PATH_STREAM = 0
NOISE_STREAM = 1
BLOCK = 4096

DEFAULT_TRUNCATION_RATIO = 1e-4
SHALLOW_TRUNCATION_RATIO = 0.01


def default_truncation_depth(
    profile: DecayProfile,
    sigma_sq: float,
    power: float,
    ratio: float = DEFAULT_TRUNCATION_RATIO,
) -> int:
    """Smallest depth >= 1 with tail_sum(profile, depth) * power <= ratio * sigma_sq."""
    return max(1, first_tail_below(profile, ratio * sigma_sq, scale=power))


class ChannelConfig(BaseModel):
    """Noise level, variance profile, simulated depth and seed of one channel."""
    model_config = ConfigDict(frozen=True)

    sigma_sq: float = Field(..., gt=0.0, description="Noise variance sigma^2.")
    profile: ProfileSpec
    truncation_depth: int = Field(..., ge=1, description="Largest path index simulated.")
    seed: int = Field(default=0, ge=0, lt=2**64)

    @classmethod
    def for_power(
        cls,
        profile: DecayProfile,
        sigma_sq: float,
        power: float,
        seed: int = 0,
    ) -> "ChannelConfig":
        """Config whose depth leaves neglected interference below 1e-4 * sigma^2 at `power`."""
        return cls(
            sigma_sq=sigma_sq,
            profile=profile,
            truncation_depth=default_truncation_depth(profile, sigma_sq, power),
            seed=seed,
        )


@dataclass(frozen=True)
class PathGainModel:
    """
    Law of the path gains: IID in time, circularly-symmetric complex Gaussian
    with variance alpha_l on path l, paths mutually independent and
    independent of the noise and of the inputs.
    """
    profile: DecayProfile
    law: str = "iid_circular_gaussian"

    def entropy_rate(self, ell: int) -> float:
        """h_l = log(pi e alpha_l) in nats; -inf for a path with zero variance."""
        alpha = float(self.profile.alphas(np.array([ell]))[0])
        return math.log(math.pi * math.e * alpha) if alpha > 0 else -math.inf

    def entropy_rates_bounded_below(self) -> bool:
        """
        Whether inf over paths with alpha_l > 0 of h_l is finite. For Gaussian
        gains h_l -> -inf as alpha_l -> 0, so this holds only when finitely
        many variances are positive. The lower bound itself only uses h_0.
        """
        if isinstance(self.profile, FiniteTaps):
            return True
        return isinstance(self.profile, Tabulated) and isinstance(self.profile.tail, ZeroTail)


def _substream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _circular_gaussian(rng: np.random.Generator, variance: float, size: int) -> np.ndarray:
    z = rng.standard_normal((size, 2))
    return math.sqrt(variance / 2.0) * (z[:, 0] + 1j * z[:, 1])


def _gain_block(seed: int, ell: int, block: int, alpha: float) -> np.ndarray:
    if alpha == 0.0:
        return np.zeros(BLOCK, dtype=complex)
    return _circular_gaussian(_substream(seed, PATH_STREAM, ell, block), alpha, BLOCK)


def _noise_block(seed: int, block: int, sigma_sq: float) -> np.ndarray:
    return _circular_gaussian(_substream(seed, NOISE_STREAM, block), sigma_sq, BLOCK)


def draw_path_gains(
    config: ChannelConfig,
    k_range: Iterable[int],
    ell_range: Iterable[int],
) -> np.ndarray:
    """
    Gains H_k^(l) for 1-based times `k_range` and paths `ell_range`, shape
    (len(k_range), len(ell_range)); the same realisations `simulate` uses.
    """
    ks = np.asarray(list(k_range), dtype=int)
    ells = np.asarray(list(ell_range), dtype=int)
    if ks.size == 0 or ells.size == 0:
        raise ValueError("k_range and ell_range must be nonempty")
    if ks.min() < 1 or ells.min() < 0:
        raise ValueError("times start at k=1 and paths at l=0")

    alphas = config.profile.alphas(ells)
    blocks, offsets = np.divmod(ks - 1, BLOCK)
    gains = np.empty((ks.size, ells.size), dtype=complex)
    for j, (ell, alpha) in enumerate(zip(ells, alphas)):
        for block in np.unique(blocks):
            rows = blocks == block
            gains[rows, j] = _gain_block(config.seed, int(ell), int(block), float(alpha))[offsets[rows]]
    return gains


def simulate(config: ChannelConfig, inputs: Sequence[complex]) -> np.ndarray:
    """
    Pass `inputs` (x_1..x_n) through the channel and return Y_1..Y_n.
    Deterministic given `config.seed`; gains are regenerated block by block
    so memory does not grow with n.
    """
    x = np.asarray(inputs, dtype=complex).ravel()
    n = x.size
    if n < 1:
        raise ValueError("inputs must hold at least one symbol")
    if not np.all(np.isfinite(x)):
        raise ValueError("inputs must be finite")

    depth = config.truncation_depth
    profile = config.profile
    peak = float(np.max(np.abs(x) ** 2))
    neglected = profile.tail_sum(depth) * peak
    if neglected > SHALLOW_TRUNCATION_RATIO * config.sigma_sq:
        warnings.warn(
            f"paths beyond depth {depth} carry {neglected:.3g} of interference "
            f"against sigma^2={config.sigma_sq:.3g}",
            TruncationTooShallowWarning,
            stacklevel=2,
        )

    alphas = alpha_vector(profile, depth + 1)
    y = np.empty(n, dtype=complex)
    for block in range(-(-n // BLOCK)):
        start = block * BLOCK
        stop = min(n, start + BLOCK)
        size = stop - start
        fading = np.zeros(size, dtype=complex)
        for ell in range(min(depth, stop - 1) + 1):
            if alphas[ell] == 0.0:
                continue
            source = np.arange(start, stop) - ell
            valid = source >= 0
            gains = _gain_block(config.seed, ell, block, float(alphas[ell]))[:size]
            fading[valid] += gains[valid] * x[source[valid]]
        y[start:stop] = fading + _noise_block(config.seed, block, config.sigma_sq)[:size]

    logger.debug("simulated %d outputs over %d paths", n, depth + 1)
    return y
