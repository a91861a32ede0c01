"""
Pytest module for asdrp.capacity.bounds

Covers the scalar-channel lemma, the per-slot scheme bound, the bound on
the disturbance power, Upsilon, the capacity lower bound, its high-SNR
limit and the helpers built on them.
"""
import math

import numpy as np
import pytest

from asdrp.capacity.base import BoundReport, to_jsonable
from asdrp.capacity.bounds import (EULER_GAMMA, ScalarChannelParams,
                                   asymptotic_limit, bounded_penalty,
                                   capacity_lower_bound, e_log_h_sq_gaussian,
                                   evaluate_scheme, exact_penalty,
                                   gaussian_upsilon, lemma_lower_bound,
                                   limit_trajectory, pre_loglog,
                                   scheme_slot_bound, upsilon, w_power_bound)
from asdrp.capacity.signaling import entropy_gap, select_guard_length
from asdrp.channel.profiles import (FiniteTaps, GeometricRatio, Polynomial,
                                    StretchedExp)
from asdrp.errors import (DomainError, GuardLengthClampedWarning,
                          GuardTooShortError)

E = math.e
LOG_1_SQRT2 = math.log(1 + math.sqrt(2))


@pytest.fixture
def unit_params():
    return ScalarChannelParams.gaussian(alpha_h=1.0, sigma_w_sq=0.5)


class BaseTestBounds:

    @staticmethod
    def mc_e_log_exp(rng, n, chunk=10**6):
        """Monte-Carlo E[log|H|^2] for H ~ CN(0, 1), drawn as two real Gaussians."""
        total = 0.0
        for start in range(0, n, chunk):
            z = rng.standard_normal((min(chunk, n - start), 2))
            total += np.log(0.5 * (z ** 2).sum(axis=1)).sum()
        return total / n


class TestScalarChannelParams(BaseTestBounds):

    def test_gaussian(self, unit_params):
        assert unit_params.e_log_h_sq == pytest.approx(-EULER_GAMMA)

    def test_jensen(self):
        with pytest.raises(DomainError):
            ScalarChannelParams(alpha_h=1.0, e_log_h_sq=0.1, sigma_w_sq=0.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            ScalarChannelParams(alpha_h=0.0, e_log_h_sq=-1.0, sigma_w_sq=0.0)
        with pytest.raises(DomainError):
            ScalarChannelParams(alpha_h=1.0, e_log_h_sq=-1.0, sigma_w_sq=-0.1)


class TestELogHSq(BaseTestBounds):

    @pytest.mark.parametrize("alpha, expected", [
        (1.0, -0.5772156649015329),
        (E, 1 - 0.5772156649015329),
        (4.0, math.log(4) - 0.5772156649015329),
    ])
    def test_values(self, alpha, expected):
        assert e_log_h_sq_gaussian(alpha) == pytest.approx(expected, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            e_log_h_sq_gaussian(0.0)

    @pytest.mark.slow
    def test_monte_carlo_gate(self):
        estimate = self.mc_e_log_exp(np.random.default_rng(101), 10**7)
        assert abs(estimate - e_log_h_sq_gaussian(1.0)) <= 1e-3


class TestLemma(BaseTestBounds):

    def test_log_uniform_specialisation(self, unit_params):
        # with the penalty bounded using |X|^2 >= 1 the lemma is the per-slot bound
        power, tau, w = math.exp(10), 1, 2.0
        params = ScalarChannelParams.gaussian(alpha_h=1.0, sigma_w_sq=w)
        h_minus_elog = entropy_gap(power, tau)
        value = lemma_lower_bound(params, h_minus_elog, 0.0, bounded_penalty(1.0, w))
        assert value == pytest.approx(scheme_slot_bound(1.0, -EULER_GAMMA, power, tau, w), abs=1e-13)

    def test_noise_free_penalty(self):
        params = ScalarChannelParams.gaussian(alpha_h=2.0, sigma_w_sq=0.0)
        penalty = bounded_penalty(2.0, 0.0)
        assert penalty == pytest.approx(math.log(math.pi * E * 2.0))
        assert lemma_lower_bound(params, 3.0, 1.0, penalty) == pytest.approx(
            3.0 - 1.0 + params.e_log_h_sq - math.log(math.pi * E * 2.0)
        )

    @pytest.mark.parametrize("tau, nu", [(1, 1), (4, 1), (4, 3)])
    def test_exact_penalty_below_bounded(self, tau, nu):
        params = ScalarChannelParams.gaussian(alpha_h=1.0, sigma_w_sq=2.0)
        exact = exact_penalty(params, math.exp(10), tau, nu)
        assert exact <= bounded_penalty(1.0, 2.0) + 1e-12

    def test_exact_penalty_noise_free(self):
        params = ScalarChannelParams.gaussian(alpha_h=3.0, sigma_w_sq=0.0)
        assert exact_penalty(params, math.exp(5), 2) == pytest.approx(math.log(math.pi * E * 3.0), abs=1e-12)


class TestSchemeSlotBound(BaseTestBounds):

    def test_arranged_unit_penalty(self):
        assert scheme_slot_bound(1.0, -EULER_GAMMA, math.exp(E), 1, 0.0) == pytest.approx(-EULER_GAMMA, abs=1e-14)

    def test_unit_gaussian(self):
        value = scheme_slot_bound(1.0, -EULER_GAMMA, math.exp(E), 1, 2.0)
        assert value == pytest.approx(-EULER_GAMMA - 2 * LOG_1_SQRT2, abs=1e-13)
        assert value == pytest.approx(-2.3399, abs=1e-4)

    def test_power_doubling_in_log(self):
        low = scheme_slot_bound(1.0, -EULER_GAMMA, math.exp(E), 1, 2.0)
        high = scheme_slot_bound(1.0, -EULER_GAMMA, math.exp(2 * E), 1, 2.0)
        assert high - low == pytest.approx(math.log(2), abs=1e-13)

    def test_domain(self):
        with pytest.raises(DomainError):
            scheme_slot_bound(1.0, -EULER_GAMMA, 1.0, 1, 2.0)


class TestWPowerBound(BaseTestBounds):

    def test_single_tap(self):
        assert w_power_bound(FiniteTaps(taps=[1.0]), 0, 1e6, 0.5).bound == 2.0

    def test_geometric_chain(self):
        result = w_power_bound(GeometricRatio(rho=0.5), 7, 100.0, 1.0)
        assert result.bound == 4.0
        assert result.intermediate == pytest.approx(2.7734375, rel=1e-14)
        assert result.intermediate <= result.bound

    def test_guard_too_short(self):
        with pytest.raises(GuardTooShortError):
            w_power_bound(GeometricRatio(rho=0.5), 3, 100.0, 1.0)

    def test_long_guard_by_complement(self):
        profile = Polynomial(p=2.0)
        L = select_guard_length(profile, 1e7, 1.0)
        result = w_power_bound(profile, L, 1e7, 1.0)
        near = profile.total_alpha - 1.0 - profile.tail_sum(L)
        assert result.intermediate == pytest.approx(near + profile.tail_sum(L) * 1e7 + 1.0, rel=1e-12)
        assert result.intermediate <= result.bound

    @pytest.mark.parametrize("profile", [StretchedExp(kappa=2.0), GeometricRatio(rho=0.3, scale=2.0)])
    def test_chain_holds_at_selected_guard(self, profile):
        for power in (10.0, 1e4, 1e8):
            L = select_guard_length(profile, power, 1.0)
            result = w_power_bound(profile, L, power, 1.0)
            assert result.intermediate <= result.bound * (1 + 1e-12)


class TestUpsilon(BaseTestBounds):

    def test_arranged_cancellation(self):
        # sqrt(0.25) + sqrt(0.25 + 2) = 2
        assert upsilon(1 + 2 * math.log(2), 0.25, 0.25, 1.0) == pytest.approx(0.0, abs=1e-15)

    def test_unit_gaussian(self):
        value = upsilon(-EULER_GAMMA, 1.0, 1.0, 0.5)
        assert value == pytest.approx(-EULER_GAMMA - 1 - 2 * LOG_1_SQRT2, abs=1e-14)
        assert value == pytest.approx(-3.3399, abs=1e-4)

    def test_decreasing_in_sigma(self):
        values = [upsilon(-EULER_GAMMA, 1.0, 1.5, s) for s in (0.1, 0.5, 1.0, 5.0)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_domain(self):
        with pytest.raises(DomainError):
            upsilon(0.0, 0.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            upsilon(0.0, 1.0, 1.0, -1.0)

    @pytest.mark.parametrize("alpha_0, alpha, sigma_sq", [(1.0, 0.5, 1.0), (1.0, 1.0, 0.0), (2.0, 1.999, 0.5)])
    def test_preconditions(self, alpha_0, alpha, sigma_sq):
        with pytest.raises(DomainError):
            upsilon(0.0, alpha_0, alpha, sigma_sq)

    def test_gaussian_upsilon(self):
        value = gaussian_upsilon(FiniteTaps(taps=[1.0]), 0.5)
        assert value == pytest.approx(-EULER_GAMMA - 1 - 2 * LOG_1_SQRT2, abs=1e-14)


class TestCapacityLowerBound(BaseTestBounds):

    def test_full_weight(self):
        report = capacity_lower_bound(0, 1, math.exp(E), 0.0)
        assert report.lower_bound_raw == pytest.approx(1.0, abs=1e-14)
        assert report.lower_bound == report.lower_bound_raw

    def test_equal_lengths(self):
        report = capacity_lower_bound(4, 4, math.exp(4 * E), 0.0)
        assert report.lower_bound_raw == pytest.approx(0.5, abs=1e-14)

    @pytest.mark.parametrize("power", [3.0, 1e3, 1e12, 1e200])
    def test_single_path_identity(self, power):
        report = capacity_lower_bound(0, 1, power, -1.234)
        assert report.lower_bound_raw - math.log(math.log(power)) == pytest.approx(-1.234, abs=1e-12)

    def test_clamped(self):
        report = capacity_lower_bound(2, 2, 10.0, -5.0)
        assert report.lower_bound_raw < 0
        assert report.lower_bound == 0.0

    def test_increasing_in_power(self):
        values = [capacity_lower_bound(3, 2, p, -1.0).lower_bound_raw for p in (2.0, 10.0, 1e3, 1e9)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_weight_identity(self):
        power, ups = 1e9, -0.7
        half = capacity_lower_bound(5, 5, power, ups).lower_bound_raw
        assert half == pytest.approx(0.5 * (math.log(math.log(power) / 5) + ups), abs=1e-14)

    def test_asymptotic_limit_attached(self):
        report = capacity_lower_bound(3, 3, 1e6, 0.0, snr=1e6, rho=math.exp(-E))
        assert report.asymptotic_limit == pytest.approx(0.5)
        assert report.snr == 1e6

    @pytest.mark.parametrize("kwargs", [
        {"L": 0, "tau": 1, "power": 1.0},
        {"L": 0, "tau": 0, "power": 10.0},
        {"L": -1, "tau": 1, "power": 10.0},
    ])
    def test_domain(self, kwargs):
        with pytest.raises(DomainError):
            capacity_lower_bound(upsilon=0.0, **kwargs)

    def test_report_json(self):
        data = to_jsonable(capacity_lower_bound(1, 1, 10.0, 0.0))
        assert set(data) == {f for f in BoundReport.__dataclass_fields__}
        assert data["asymptotic_limit"] is None


class TestAsymptoticLimit(BaseTestBounds):

    def test_values(self):
        assert asymptotic_limit(math.exp(-E), 0.0) == pytest.approx(0.5, abs=1e-14)
        assert asymptotic_limit(math.exp(-E ** 3), 0.0) == pytest.approx(1.5, abs=1e-14)

    def test_raw_value_above_one_over_e(self):
        assert asymptotic_limit(0.5, 0.0) < 0

    @pytest.mark.parametrize("rho", [0.0, 1.0, -0.5, 2.0])
    def test_domain(self, rho):
        with pytest.raises(DomainError):
            asymptotic_limit(rho, 0.0)

    def test_trajectory_converges(self):
        rho = math.exp(-9)
        snrs = [rho ** -(m - 0.5) for m in range(12, 41)]
        points = limit_trajectory(rho, -2.0, snrs)
        assert [p.guard_len for p in points] == list(range(11, 40))
        gaps = [abs(p.gap) for p in points]
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
        assert all(abs(p.gap) < 0.05 for p in points if p.guard_len >= 20)

    def test_trajectory_skips_empty_guard(self):
        with pytest.warns(GuardLengthClampedWarning):
            points = limit_trajectory(0.5, 0.0, [0.8, 100.0])
        assert [p.snr for p in points] == [100.0]


class TestEvaluateScheme(BaseTestBounds):

    def test_geometric(self):
        report = evaluate_scheme(GeometricRatio(rho=0.5), 100.0, 1.0)
        assert (report.guard_len, report.data_len) == (7, 7)
        assert report.power == 100.0

    def test_fixed_tau(self):
        report = evaluate_scheme(FiniteTaps(taps=[1.0]), 1e4, 2.0, tau=1)
        assert report.guard_len == 0
        assert report.lower_bound_raw == pytest.approx(
            math.log(math.log(2e4)) + gaussian_upsilon(FiniteTaps(taps=[1.0]), 2.0), abs=1e-13
        )

    def test_polynomial_at_high_snr(self):
        report = evaluate_scheme(Polynomial(p=2.0), 1e8, 1.0)
        assert report.guard_len == report.data_len
        assert abs(report.guard_len / 1e8 - 1.0) < 1e-3
        # log log(P) - log L < 0 when L ~ P
        assert report.lower_bound_raw < 0 and report.lower_bound == 0.0

    def test_pre_loglog(self):
        report = evaluate_scheme(FiniteTaps(taps=[1.0]), 1e8, 1.0, tau=1)
        assert pre_loglog(report) == pytest.approx(report.lower_bound_raw / math.log(math.log(1e8)))
        with pytest.raises(DomainError):
            pre_loglog(capacity_lower_bound(0, 1, 10.0, 0.0))
