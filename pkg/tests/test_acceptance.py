"""
End-to-end checks at desk scale: growth of the bound for a super-exponential
profile up to its rho-majorant ceilings, guard lengths, domination of the
per-slot bound by Monte-Carlo mutual information, the flat-fading identity,
simulator statistics, the signaling law and convergence to the high-SNR limit.

The Monte-Carlo heavy cases are marked slow.
"""
import math

import numpy as np
import pytest

from asdrp.capacity.base import Verdict
from asdrp.capacity.bounds import (EULER_GAMMA, asymptotic_limit,
                                   capacity_lower_bound, e_log_h_sq_gaussian,
                                   evaluate_scheme, gaussian_upsilon,
                                   limit_trajectory, scheme_slot_bound,
                                   upsilon)
from asdrp.capacity.classifier import classify
from asdrp.capacity.mi_oracle import (ConstantModulusLaw, LogUniformLaw,
                                      estimate_mi)
from asdrp.capacity.signaling import (SignalingScheme, expected_block_power,
                                      guard_length_closed_form,
                                      guard_satisfied, log_magnitude_mean,
                                      sample_blocks, select_guard_length)
from asdrp.channel.profiles import (GeometricRatio, StretchedExp,
                                    majorant_onset)
from asdrp.channel.simulator import ChannelConfig, draw_path_gains, simulate
from asdrp.harness.config import SweepConfig
from asdrp.harness.sweep import run_sweep

GAUSSIAN_SQUARE = StretchedExp(kappa=2.0)
EVEN_DECADES = [10.0 ** k for k in range(4, 16, 2)]
DEEP_DECADES = [10.0 ** k for k in range(2, 302, 2)]


class BaseTestAcceptance:

    @staticmethod
    def within_std_errs(samples, expected, k=3.0):
        samples = np.asarray(samples, dtype=float)
        se = samples.std(ddof=1) / math.sqrt(samples.size)
        return abs(samples.mean() - expected) <= k * se


class TestUnboundedGrowth(BaseTestAcceptance):

    def test_majorant_limits_increase(self):
        ups = gaussian_upsilon(GAUSSIAN_SQUARE, 1.0)
        limits = [asymptotic_limit(math.exp(-k), ups) for k in (4, 9, 16)]
        expected = [0.5 * math.log(k) + 0.5 * ups for k in (4, 9, 16)]
        assert limits == pytest.approx(expected, abs=1e-12)
        assert limits[0] < limits[1] < limits[2]

    def test_bound_grows_along_grid(self):
        reports = [evaluate_scheme(GAUSSIAN_SQUARE, snr, 1.0) for snr in EVEN_DECADES]
        guards = [r.guard_len for r in reports]
        assert guards == sorted(guards)
        assert all(r.data_len == r.guard_len for r in reports)
        # the Upsilon-free part of the bound is positive and the bound itself rises
        assert all(math.log(math.log(r.power) / r.data_len) > 0 for r in reports)
        assert reports[-1].lower_bound_raw > reports[0].lower_bound_raw

    @pytest.mark.filterwarnings("ignore::asdrp.errors.GuardLengthClampedWarning")
    @pytest.mark.parametrize("k", [4, 9, 16])
    def test_majorant_ceiling_reached(self, k):
        assert classify(GAUSSIAN_SQUARE).verdict is Verdict.UNBOUNDED
        rho = math.exp(-k)
        onset = majorant_onset(GAUSSIAN_SQUARE, rho)
        assert onset is not None
        ups = gaussian_upsilon(GAUSSIAN_SQUARE, 1.0)
        limit = asymptotic_limit(rho, ups)

        raws = []
        for snr in DEEP_DECADES:
            closed = guard_length_closed_form(rho, snr)
            if closed < max(onset, 1):
                continue
            # alpha_l < rho^l past the onset, so the rho-guard is long enough
            report = evaluate_scheme(GAUSSIAN_SQUARE, snr, 1.0)
            assert 1 <= report.guard_len <= closed
            assert report.lower_bound_raw >= capacity_lower_bound(closed, closed, snr, ups).lower_bound_raw
            raws.append(report.lower_bound_raw)
        assert raws
        for threshold in (-1.0, 0.0, 1.0):
            assert max(raws) >= min(threshold, limit)


class TestGuardLengths(BaseTestAcceptance):

    @pytest.mark.parametrize("rho", [0.2, 0.5, 0.8])
    @pytest.mark.parametrize("snr", [1e2, 1e4, 1e6])
    def test_closed_form_and_scan(self, rho, snr):
        L = guard_length_closed_form(rho, snr)
        assert rho ** L * rho / (1 - rho) * snr <= 1.0 + 1e-12
        assert rho ** (L - 1) * rho / (1 - rho) * snr > 1.0

        profile = GeometricRatio(rho=rho)
        scanned = select_guard_length(profile, snr, 1.0)
        assert guard_satisfied(profile, scanned, snr, 1.0)
        assert scanned == 0 or not guard_satisfied(profile, scanned - 1, snr, 1.0)
        assert scanned == L


class TestSlotBoundDomination(BaseTestAcceptance):

    @pytest.mark.slow
    @pytest.mark.parametrize("log_power", [5.0, 10.0, 20.0])
    @pytest.mark.parametrize("sigma_w_sq", [0.5, 2.0, 10.0])
    @pytest.mark.parametrize("tau", [1, 4])
    def test_oracle_dominates(self, log_power, sigma_w_sq, tau):
        power = math.exp(log_power)
        bound = scheme_slot_bound(1.0, e_log_h_sq_gaussian(1.0), power, tau, sigma_w_sq)
        est = estimate_mi(
            LogUniformLaw(power=power, tau=tau, nu=1), 1.0, sigma_w_sq,
            n_samples=10**6, rng=np.random.default_rng(17), n_partitions=4, n_jobs=-1,
        )
        assert est.value + 3 * est.std_err >= bound

    @pytest.mark.parametrize("c, alpha_h, sigma_w_sq", [(1.0, 1.0, 0.5), (10.0, 2.0, 1.0), (0.1, 0.5, 3.0)])
    def test_constant_modulus_is_silent(self, c, alpha_h, sigma_w_sq):
        est = estimate_mi(ConstantModulusLaw(c=c), alpha_h, sigma_w_sq, n_samples=10**5,
                          rng=np.random.default_rng(23))
        assert abs(est.value) <= 3 * est.std_err


class TestFlatFading(BaseTestAcceptance):

    @pytest.mark.parametrize("sigma_sq", [0.25, 1.0, 4.0])
    def test_sweep_identity(self, sigma_sq):
        config = SweepConfig.model_validate({
            "profile": {"kind": "finite", "taps": [1.0]},
            "sigma_sq": sigma_sq,
            "snr_grid": [12.0, 1e3, 1e6, 1e9],
            "tau_rule": {"fixed": 1},
        })
        closed = -EULER_GAMMA - 1 - 2 * math.log(1 + math.sqrt(1 + 2 * sigma_sq))
        for row in run_sweep(config).rows:
            assert row.guard_len == 0
            assert row.c_lb_raw_nats - math.log(math.log(row.p)) == pytest.approx(row.upsilon_nats, abs=1e-12)
            assert upsilon(e_log_h_sq_gaussian(1.0), 1.0, 1.0, sigma_sq) == pytest.approx(closed, abs=1e-12)


class TestSimulatorStatistics(BaseTestAcceptance):

    @pytest.fixture
    def config(self):
        return ChannelConfig(sigma_sq=1.0, profile=GAUSSIAN_SQUARE, truncation_depth=4, seed=3)

    def test_zero_input_output_power(self, config):
        y = simulate(config, np.zeros(10**6, dtype=complex))
        assert np.mean(np.abs(y) ** 2) == pytest.approx(1.0, rel=0.01)

    def test_superposition_at_fixed_seed(self, config):
        rng = np.random.default_rng(31)
        x1 = rng.standard_normal(500) + 1j * rng.standard_normal(500)
        x2 = rng.standard_normal(500) + 1j * rng.standard_normal(500)
        noise = simulate(config, np.zeros(500, dtype=complex))
        combined = simulate(config, x1 + x2)
        parts = simulate(config, x1) + simulate(config, x2) - noise
        np.testing.assert_allclose(combined, parts, rtol=0, atol=1e-9)

    def test_per_path_variances(self, config):
        gains = draw_path_gains(config, range(1, 10**6 + 1), range(4))
        variances = np.mean(np.abs(gains) ** 2, axis=0)
        np.testing.assert_allclose(variances, np.exp(-np.arange(4.0) ** 2), rtol=0.01)


class TestSignalingLaw(BaseTestAcceptance):

    def test_block_statistics(self):
        scheme = SignalingScheme(guard_len=4, data_len=4, power=1e4)
        blocks = sample_blocks(scheme, 10**5, np.random.default_rng(41))
        assert np.all(blocks[:, :4] == 0)

        mag_sq = np.abs(blocks[:, 4:]) ** 2
        for nu in range(1, 5):
            lo, hi = scheme.slot_interval(nu)
            assert np.all((mag_sq[:, nu - 1] >= lo * (1 - 1e-12)) & (mag_sq[:, nu - 1] <= hi * (1 + 1e-12)))
            assert self.within_std_errs(np.log(mag_sq[:, nu - 1]), log_magnitude_mean(scheme, nu))

        per_block_power = (np.abs(blocks) ** 2).mean(axis=1)
        assert self.within_std_errs(per_block_power, expected_block_power(scheme))


class TestLimitConvergence(BaseTestAcceptance):

    def test_gap_shrinks(self):
        rho = math.exp(-9)
        snrs = [rho ** -(m - 0.5) for m in range(21, 41)]
        points = limit_trajectory(rho, gaussian_upsilon(GeometricRatio(rho=rho), 1.0), snrs)
        assert [p.guard_len for p in points] == list(range(20, 40))
        gaps = [abs(p.gap) for p in points]
        assert all(g < 0.05 for g in gaps)
        assert all(a > b for a, b in zip(gaps, gaps[1:]))
