#############################################################################
# classifier.py
#
# bounded / unbounded capacity classification of a path-gain variance
# profile from its decay: ratio liminf, super-exponential and
# double-exponential decay rules
#
# Sat Oct 17 2026
#############################################################################

import logging
from typing import List, Tuple

import numpy as np

from asdrp.capacity.base import ClassificationReport, Rule, Verdict, Witness
from asdrp.channel.profiles import (DecayProfile, DoubleExp, FiniteTaps,
                                    GeometricRatio, Polynomial, StretchedExp,
                                    Tabulated)

logger = logging.getLogger(__name__)

DEFAULT_INSPECT_RANGE = 256
# heuristic thresholds for tabulated data
MIN_RATIO = 1e-3
PLATEAU_RTOL = 0.01
GROWTH_FACTOR = 10.0
STEP_RTOL = 1e-9

OSCILLATION_CAVEAT = "decay rate oscillates; its limit and liminf cannot be told apart from finite data"
CONFLICT_CAVEAT = "bounded and unbounded criteria both fired on the inspected range"


def ratio_trajectory(log_alphas: np.ndarray) -> np.ndarray:
    """
    alpha_{l+1} / alpha_l for l = 0..n-2 from log variances, with
    a/0 = inf for a > 0 and 0/0 = 0.
    """
    la = np.asarray(log_alphas, dtype=float)
    here, after = la[:-1], la[1:]
    ratios = np.empty(here.shape)
    zero_here = np.isneginf(here)
    zero_after = np.isneginf(after)
    ratios[zero_here & zero_after] = 0.0
    ratios[zero_here & ~zero_after] = np.inf
    regular = ~zero_here
    with np.errstate(under="ignore", over="ignore"):
        ratios[regular] = np.exp(after[regular] - here[regular])
    return ratios


def decay_rate_trajectory(log_alphas: np.ndarray) -> np.ndarray:
    """(1/l) log(1/alpha_l) for l = 1..n-1, with log(1/0) = inf."""
    la = np.asarray(log_alphas, dtype=float)
    ells = np.arange(1, la.size)
    return -la[1:] / ells


def _witness(log_alphas: np.ndarray) -> Witness:
    return Witness(
        ells=tuple(range(len(log_alphas))),
        ratios=tuple(float(r) for r in ratio_trajectory(log_alphas)),
        decay_rates=tuple(float(s) for s in decay_rate_trajectory(log_alphas)),
    )


def classify_trajectory(log_alphas: np.ndarray) -> Tuple[Verdict, Rule, Tuple[Rule, ...], Tuple[str, ...]]:
    """
    Heuristic verdict from finitely many log variances.

    Bounded when the ratio over the last half stays >= MIN_RATIO and settles
    on a plateau (relative spread < PLATEAU_RTOL over the last quarter).
    Unbounded when the decay rate is nondecreasing over the last half and
    either hits log(1/0) or grows GROWTH_FACTOR-fold from the midpoint.
    """
    la = np.asarray(log_alphas, dtype=float)
    if la.size < 8:
        raise ValueError(f"need at least 8 terms to classify, got {la.size}")
    ratios = ratio_trajectory(la)
    rates = decay_rate_trajectory(la)

    last_half = ratios[ratios.size // 2:]
    last_quarter = ratios[3 * ratios.size // 4:]
    plateau = (
        np.all(np.isfinite(last_quarter))
        and last_quarter.max() > 0
        and (last_quarter.max() - last_quarter.min()) / last_quarter.max() < PLATEAU_RTOL
    )
    bounded = bool(last_half.min() >= MIN_RATIO and plateau)

    rate_half = rates[rates.size // 2:]
    rising = bool(np.all(rate_half[1:] >= rate_half[:-1]))
    s_mid, s_last = rate_half[0], rate_half[-1]
    unbounded = rising and (np.isinf(s_last) or (s_mid > 0 and s_last > GROWTH_FACTOR * s_mid))

    caveats: List[str] = []
    finite = rate_half[np.isfinite(rate_half)]
    steps = np.diff(finite)
    # ignore round-off wiggles of a flat trajectory
    wiggle = STEP_RTOL * max(1.0, float(np.abs(finite).max())) if finite.size else 0.0
    if not rising and np.any(steps > wiggle) and np.any(steps < -wiggle):
        caveats.append(OSCILLATION_CAVEAT)

    fired: List[Rule] = []
    if bounded:
        fired.append(Rule.RATIO_LIMINF_POSITIVE)
    if unbounded:
        fired.append(Rule.SUPER_EXPONENTIAL_DECAY)
    if bounded and unbounded:
        caveats.append(CONFLICT_CAVEAT)
        return Verdict.INDETERMINATE, Rule.NONE, tuple(fired), tuple(caveats)
    if fired:
        return fired[0].verdict, fired[0], tuple(fired), tuple(caveats)
    return Verdict.INDETERMINATE, Rule.NONE, (), tuple(caveats)


def _symbolic_rules(profile: DecayProfile) -> List[Rule]:
    # first entry is the reported rule
    if isinstance(profile, FiniteTaps):
        # zero tail: log(1/0) = inf and 0/0 = 0
        return [Rule.SUPER_EXPONENTIAL_DECAY, Rule.RATIO_TO_ZERO]
    if isinstance(profile, (GeometricRatio, Polynomial)):
        return [Rule.RATIO_LIMINF_POSITIVE]
    if isinstance(profile, StretchedExp):
        if profile.kappa > 1.0:
            return [Rule.SUPER_EXPONENTIAL_DECAY, Rule.RATIO_TO_ZERO]
        return [Rule.RATIO_LIMINF_POSITIVE]
    if isinstance(profile, DoubleExp):
        if profile.kappa > 1.0:
            return [Rule.DOUBLE_EXPONENTIAL_DECAY, Rule.SUPER_EXPONENTIAL_DECAY, Rule.RATIO_TO_ZERO]
        return [Rule.SUPER_EXPONENTIAL_DECAY, Rule.RATIO_TO_ZERO]
    raise TypeError(f"no symbolic rule for {type(profile).__name__}")


def classify(profile: DecayProfile, inspect_range: int = DEFAULT_INSPECT_RANGE) -> ClassificationReport:
    """
    Bounded / Unbounded / Indeterminate verdict for `profile`. Closed-form
    kinds are decided exactly; tabulated data goes through
    `classify_trajectory` over alpha_0 .. alpha_{inspect_range - 1}.
    """
    if inspect_range < 8:
        raise ValueError(f"inspect_range must be at least 8, got {inspect_range}")
    log_alphas = profile.log_alphas(np.arange(inspect_range))
    witness = _witness(log_alphas)

    if isinstance(profile, Tabulated):
        verdict, rule, fired, caveats = classify_trajectory(log_alphas)
        logger.info("tabulated profile classified %s via %s", verdict.value, rule.value)
        return ClassificationReport(
            verdict=verdict, rule=rule, witness=witness,
            rules_fired=fired, symbolic=False, caveats=caveats,
        )

    fired = _symbolic_rules(profile)
    verdicts = {rule.verdict for rule in fired}
    assert len(verdicts) == 1, f"conflicting rules {fired} for {profile!r}"
    return ClassificationReport(
        verdict=fired[0].verdict, rule=fired[0], witness=witness, rules_fired=tuple(fired),
    )


if __name__ == "__main__":
    import math

    def print_result(test_name, passed):
        print(f"{test_name}: {'PASSED' if passed else 'FAILED'}")

    cases = [
        (GeometricRatio(rho=math.exp(-1)), Verdict.BOUNDED),
        (StretchedExp(kappa=1.5), Verdict.UNBOUNDED),
        (DoubleExp(kappa=2.0), Verdict.UNBOUNDED),
        (FiniteTaps(taps=[1.0, 0.5, 0.25]), Verdict.UNBOUNDED),
        (Polynomial(p=2.0), Verdict.BOUNDED),
    ]
    for profile, expected in cases:
        print_result(f"{profile.kind} -> {expected.value}", classify(profile).verdict is expected)
