#############################################################################
# mi_oracle.py
#
# mutual information I(X; HX + W) of the scalar surrogate channel with
# circularly-symmetric Gaussian H and W, by Monte Carlo over Y and by
# deterministic radial integration
#
# Sat Oct 17 2026
#############################################################################

import logging
import math
from dataclasses import dataclass
from typing import Annotated, List, Literal, Optional, Tuple, Union

import numpy as np
from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator
from scipy.integrate import quad
from scipy.special import logsumexp

from asdrp.capacity.base import MiEstimate
from asdrp.capacity.quadrature import converged_rule
from asdrp.errors import DomainError, QuadratureError

logger = logging.getLogger(__name__)

MIN_SAMPLES = 10**4
DEFAULT_SAMPLES = 10**6
SAMPLE_CHUNK = 1 << 12
# radial integration window in log|y|^2 around the mixture variances
LOG_T_BELOW = 40.0
LOG_T_ABOVE = math.log(800.0)
QUAD_LIMIT = 400
MAX_BREAKS = 16


#-------------------------------------
# input laws (on |X|; the phase is uniform)
#-------------------------------------

class _Law(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class LogUniformLaw(_Law):
    """log|X|^2 uniform on [(nu-1) log P / tau, nu log P / tau]."""
    kind: Literal["log_uniform"] = "log_uniform"
    power: float = Field(..., gt=1.0, description="peak power P")
    tau: int = Field(..., ge=1)
    nu: int = Field(1, ge=1)

    @model_validator(mode="after")
    def validate_slot(self) -> "LogUniformLaw":
        if self.nu > self.tau:
            raise ValueError(f"slot nu={self.nu} exceeds tau={self.tau}")
        return self

    @property
    def log_interval(self) -> Tuple[float, float]:
        step = math.log(self.power) / self.tau
        return (self.nu - 1) * step, self.nu * step


class ConstantModulusLaw(_Law):
    """|X| = c."""
    kind: Literal["constant"] = "constant"
    c: float = Field(..., gt=0.0)


class TwoPointLaw(_Law):
    """|X| = c1 with probability q, c2 otherwise."""
    kind: Literal["two_point"] = "two_point"
    c1: float = Field(..., gt=0.0)
    c2: float = Field(..., gt=0.0)
    q: float = Field(..., ge=0.0, le=1.0)


InputLaw = Annotated[
    Union[LogUniformLaw, ConstantModulusLaw, TwoPointLaw],
    Field(discriminator="kind"),
]
_LAW_ADAPTER: TypeAdapter = TypeAdapter(InputLaw)


def parse_law(spec: Union[dict, _Law]) -> _Law:
    if isinstance(spec, _Law):
        return spec
    return _LAW_ADAPTER.validate_python(spec)


#-------------------------------------
# conditional law of Y given |X|^2
#-------------------------------------

@dataclass(frozen=True)
class OutputMixture:
    """
    Y is a mixture of CN(0, variances[i]) with probabilities weights[i];
    `conditional_entropy` is h(Y | X) = E[log(pi e (alpha_h s + sigma_w^2))].
    """
    variances: np.ndarray
    weights: np.ndarray
    conditional_entropy: float

    def log_density(self, t: np.ndarray) -> np.ndarray:
        """log p_Y(y) as a function of t = |y|^2."""
        t = np.asarray(t, dtype=float)
        log_terms = (
            np.log(self.weights)[None, :]
            - np.log(math.pi * self.variances)[None, :]
            - t[:, None] / self.variances[None, :]
        )
        return logsumexp(log_terms, axis=1)


def _discrete_mixture(mags_sq: List[float], probs: List[float], alpha_h: float, sigma_w_sq: float) -> OutputMixture:
    keep = [(s, p) for s, p in zip(mags_sq, probs) if p > 0]
    variances = np.array([alpha_h * s + sigma_w_sq for s, _ in keep])
    weights = np.array([p for _, p in keep])
    cond = math.fsum(p * math.log(math.pi * math.e * v) for (_, p), v in zip(keep, variances))
    return OutputMixture(variances=variances, weights=weights, conditional_entropy=cond)


def output_mixture(law: _Law, alpha_h: float, sigma_w_sq: float) -> OutputMixture:
    """Mixture representation of Y; the log-uniform law is discretised by quadrature over log s."""
    if not alpha_h > 0:
        raise DomainError(f"alpha_h must be positive, got {alpha_h}")
    if sigma_w_sq < 0:
        raise DomainError(f"sigma_w_sq must be nonnegative, got {sigma_w_sq}")

    if isinstance(law, ConstantModulusLaw):
        return _discrete_mixture([law.c ** 2], [1.0], alpha_h, sigma_w_sq)
    if isinstance(law, TwoPointLaw):
        return _discrete_mixture([law.c1 ** 2, law.c2 ** 2], [law.q, 1.0 - law.q], alpha_h, sigma_w_sq)
    if isinstance(law, LogUniformLaw):
        a, b = law.log_interval
        rule, cond = converged_rule(
            lambda u: np.log(math.pi * math.e * (alpha_h * np.exp(u) + sigma_w_sq)), a, b
        )
        logger.debug("log-uniform mixture on [%g, %g] with %d nodes", a, b, rule.nodes.size)
        return OutputMixture(
            variances=alpha_h * np.exp(rule.nodes) + sigma_w_sq,
            weights=rule.weights,
            conditional_entropy=cond,
        )
    raise TypeError(f"unsupported input law {type(law).__name__}")


#-------------------------------------
# Monte Carlo
#-------------------------------------

def _draw_mag_sq(law: _Law, rng: np.random.Generator, n: int) -> np.ndarray:
    if isinstance(law, ConstantModulusLaw):
        return np.full(n, law.c ** 2)
    if isinstance(law, TwoPointLaw):
        return np.where(rng.random(n) < law.q, law.c1 ** 2, law.c2 ** 2)
    a, b = law.log_interval
    return np.exp(rng.uniform(a, b, size=n))


def _circular(rng: np.random.Generator, variance: float, n: int) -> np.ndarray:
    return math.sqrt(variance / 2.0) * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def _partition_moments(
    law: _Law,
    mixture: OutputMixture,
    alpha_h: float,
    sigma_w_sq: float,
    n: int,
    rng: np.random.Generator,
    random_phase: bool = True,
) -> Tuple[int, float, float]:
    """(count, mean, sum of squared deviations) of -log p_Y(Y) over n draws."""
    count, mean, m2 = 0, 0.0, 0.0
    for start in range(0, n, SAMPLE_CHUNK):
        size = min(SAMPLE_CHUNK, n - start)
        x = np.sqrt(_draw_mag_sq(law, rng, size)).astype(complex)
        if random_phase:
            x *= np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, size))
        y = _circular(rng, alpha_h, size) * x + _circular(rng, sigma_w_sq, size)
        surprisal = -mixture.log_density(np.abs(y) ** 2)
        count, mean, m2 = merge_moments((count, mean, m2), _moments(surprisal))
    return count, mean, m2


def _moments(values: np.ndarray) -> Tuple[int, float, float]:
    mean = float(values.mean())
    return values.size, mean, float(np.sum((values - mean) ** 2))


def merge_moments(a: Tuple[int, float, float], b: Tuple[int, float, float]) -> Tuple[int, float, float]:
    """Pairwise combination of (count, mean, M2) summaries."""
    n_a, mean_a, m2_a = a
    n_b, mean_b, m2_b = b
    n = n_a + n_b
    if n == 0:
        return 0, 0.0, 0.0
    delta = mean_b - mean_a
    return n, mean_a + delta * n_b / n, m2_a + m2_b + delta * delta * n_a * n_b / n


def estimate_mi(
    law: Union[dict, _Law],
    alpha_h: float,
    sigma_w_sq: float,
    n_samples: int = DEFAULT_SAMPLES,
    rng: Optional[np.random.Generator] = None,
    n_partitions: int = 1,
    n_jobs: int = 1,
    random_phase: bool = True,
) -> MiEstimate:
    """
    I(X; Y) = h(Y) - h(Y | X) with h(Y) by Monte Carlo over `n_samples`
    outputs. Samples are split across `n_partitions` substreams spawned from
    `rng`; the result depends on (rng state, n_partitions) only, not on n_jobs.
    With `random_phase` off the input is real and positive; the circular
    fading makes Y, and so the estimate, invariant to the input phase.
    """
    law = parse_law(law)
    if n_samples < MIN_SAMPLES:
        raise DomainError(f"n_samples must be at least {MIN_SAMPLES}, got {n_samples}")
    if not sigma_w_sq > 0:
        raise DomainError(f"sigma_w_sq must be positive, got {sigma_w_sq}")
    if n_partitions < 1:
        raise ValueError(f"n_partitions must be positive, got {n_partitions}")
    rng = rng if rng is not None else np.random.default_rng()

    mixture = output_mixture(law, alpha_h, sigma_w_sq)
    sizes = [len(part) for part in np.array_split(np.arange(n_samples), n_partitions)]
    streams = rng.spawn(n_partitions)
    logger.info("estimating MI for %s with %d samples in %d partitions", law.kind, n_samples, n_partitions)

    parts = Parallel(n_jobs=n_jobs)(
        delayed(_partition_moments)(law, mixture, alpha_h, sigma_w_sq, size, stream, random_phase)
        for size, stream in zip(sizes, streams)
    )
    total = (0, 0.0, 0.0)
    for part in parts:
        total = merge_moments(total, part)
    count, h_y, m2 = total
    std_err = math.sqrt(m2 / (count - 1)) / math.sqrt(count)
    return MiEstimate(value=h_y - mixture.conditional_entropy, std_err=std_err, n_samples=count)


#-------------------------------------
# deterministic oracle
#-------------------------------------

def radial_entropy(law: Union[dict, _Law], alpha_h: float, sigma_w_sq: float) -> float:
    """
    h(Y) = -int pi p(t) log p(t) dt over t = |y|^2, integrated in z = log t.
    """
    mixture = output_mixture(parse_law(law), alpha_h, sigma_w_sq)
    log_v = np.log(mixture.variances)
    lo, hi = float(log_v.min()) - LOG_T_BELOW, float(log_v.max()) + LOG_T_ABOVE

    def integrand(z: float) -> float:
        t = math.exp(z)
        log_p = float(mixture.log_density(np.array([t]))[0])
        return -math.pi * t * math.exp(log_p) * log_p

    # the mixture components put their mass near log v_i
    if log_v.size <= MAX_BREAKS:
        breaks = np.unique(log_v)
    else:
        breaks = np.linspace(log_v.min(), log_v.max(), MAX_BREAKS)
    value, abserr = quad(integrand, lo, hi, points=breaks.tolist(), limit=QUAD_LIMIT)
    if not math.isfinite(value) or abserr > 1e-6 * max(1.0, abs(value)):
        raise QuadratureError(f"radial entropy did not converge: {value} +/- {abserr}")
    return value


def exact_mi(law: Union[dict, _Law], alpha_h: float, sigma_w_sq: float) -> float:
    """I(X; Y) from `radial_entropy` and the exact h(Y | X)."""
    law = parse_law(law)
    mixture = output_mixture(law, alpha_h, sigma_w_sq)
    return radial_entropy(law, alpha_h, sigma_w_sq) - mixture.conditional_entropy


if __name__ == "__main__":
    def print_result(test_name, passed):
        print(f"{test_name}: {'PASSED' if passed else 'FAILED'}")

    rng = np.random.default_rng(7)
    est = estimate_mi(ConstantModulusLaw(c=1.0), 1.0, 0.5, n_samples=10**5, rng=rng)
    print_result("constant modulus carries no information", abs(est.value) <= 3 * est.std_err)

    law = TwoPointLaw(c1=1.0, c2=100.0, q=0.5)
    est = estimate_mi(law, 1.0, 0.5, n_samples=10**5, rng=rng)
    print_result("two-point matches radial integration", abs(est.value - exact_mi(law, 1.0, 0.5)) <= 3 * est.std_err)
