"""Unit tests for the Monte Carlo union-bound harness."""

import math

import numpy as np
import pytest

from gauge_frontier.config.channel import ChannelKind, ChannelSpec
from gauge_frontier.core.codebook import codebook_for
from gauge_frontier.core.montecarlo import (
    SimConfig,
    energy_only_agreement,
    exponent_estimate,
    simulate_pe,
    verify_avg_bhatt,
)
from gauge_frontier.core.packing import default_codebook
from gauge_frontier.utils.exceptions import (
    NumericalError,
    UnsupportedSpecError,
    ValidationError,
)


class TestSimulatePe:
    """Maximum-likelihood error rate against (K - 1) 2^{-n dmin}."""

    def setup_method(self):
        self.spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=2, rho=1e4)
        self.codebook = default_codebook(self.spec, 4)

    def test_single_codeword_never_errs(self):
        result = simulate_pe(SimConfig(self.spec, default_codebook(self.spec, 1), trials=1000))
        assert result.pe_hat == 0.0
        assert result.passed
        assert result.delta_min == math.inf

    def test_fast_fading_respects_union_bound(self):
        result = simulate_pe(SimConfig(self.spec, self.codebook, n=4, trials=50_000, seed=3))
        expected_bound = 3 * 2.0 ** (-4 * self.codebook.min_distance())
        assert result.bound == pytest.approx(expected_bound)
        assert result.trials == 50_000
        assert result.status == "pass"
        assert result.pe_hat <= result.bound + 3 * result.stderr
        assert result.to_dict()["pass"] is True

    def test_result_independent_of_threads(self):
        one = simulate_pe(SimConfig(self.spec, self.codebook, n=2, trials=40_000, seed=9, threads=1))
        four = simulate_pe(SimConfig(self.spec, self.codebook, n=2, trials=40_000, seed=9, threads=4))
        assert one.errors == four.errors
        assert one.pe_hat == four.pe_hat

    def test_different_seeds_differ(self):
        a = simulate_pe(SimConfig(self.spec, self.codebook, n=1, trials=40_000, seed=1))
        b = simulate_pe(SimConfig(self.spec, self.codebook, n=1, trials=40_000, seed=2))
        assert a.errors != b.errors

    def test_tied_codewords(self):
        """Duplicate points have zero distance and a vacuous bound."""
        codebook = codebook_for(self.spec, np.array([1.0, 1.0]))
        result = simulate_pe(SimConfig(self.spec, codebook, trials=10_000))
        assert result.delta_min == 0.0
        assert result.bound == pytest.approx(1.0)
        assert result.pe_hat == pytest.approx(0.5, abs=0.03)
        assert result.passed

    def test_unresolvable_without_escalation(self):
        spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=1, rho=1e8)
        config = SimConfig(spec, default_codebook(spec, 2), n=10, trials=1000, auto_escalate=False)
        result = simulate_pe(config)
        assert result.status == "unresolvable"
        assert result.passed
        assert result.trials == 1000

    def test_escalates_trial_count(self):
        config = SimConfig(self.spec, self.codebook, n=4, trials=1000, seed=5, auto_escalate=True)
        result = simulate_pe(config)
        assert result.trials * result.bound >= 100

    def test_too_few_trials(self):
        with pytest.raises(ValidationError):
            SimConfig(self.spec, self.codebook, trials=100)

    def test_negative_confidence(self):
        with pytest.raises(ValidationError):
            SimConfig(self.spec, self.codebook, confidence=-1.0)

    def test_invalid_block_count(self):
        with pytest.raises(ValidationError):
            SimConfig(self.spec, self.codebook, n=0)

    def test_frac_log_not_simulated(self):
        spec = ChannelSpec(kind=ChannelKind.FRAC_LOG, N=1, T=8, rho=100.0, beta=0.5, c_beta=1.0)
        with pytest.raises(UnsupportedSpecError):
            SimConfig(spec, self.codebook)

    def test_power_violation(self):
        codebook = codebook_for(self.spec, np.array([0.0, 50.0]))
        with pytest.raises(ValidationError):
            SimConfig(self.spec, codebook)


class TestMatrixChannels:
    """Decoders for the matrix channel classes stay under their bound."""

    @pytest.mark.parametrize(
        "spec",
        [
            ChannelSpec(kind=ChannelKind.FIXED_H, M=2, N=2, T=1, rho=10.0, H=np.eye(2)),
            ChannelSpec(kind=ChannelKind.COHERENT_MIMO, M=1, N=2, T=1, rho=10.0),
            ChannelSpec(kind=ChannelKind.BLOCK_FADING, M=1, N=2, T=2, rho=100.0),
            ChannelSpec(kind=ChannelKind.MULTIPATH, N=1, rho=50.0, taps=(1.0, 0.5)),
        ],
    )
    def test_matrix_decoders_pass(self, spec):
        codebook = default_codebook(spec, 2, seed=1, trials=4)
        result = simulate_pe(SimConfig(spec, codebook, n=1, trials=5000, seed=11))
        assert result.passed
        assert 0.0 <= result.pe_hat <= 1.0


class TestAveragedBhattCheck:
    """Monte Carlo check of the Rayleigh-averaged coefficient."""

    def test_scalar_example(self):
        check = verify_avg_bhatt([[0.2]], 1, 100.0, trials=100_000, seed=4)
        assert check.closed_form == pytest.approx(0.5)
        assert check.z_score < 5.0
        assert check.mc_estimate == pytest.approx(0.5, abs=0.01)

    def test_matrix_difference(self):
        D = np.array([[1.0, 0.0], [0.0, 0.5j]])
        check = verify_avg_bhatt(D, 2, 5.0, trials=50_000, seed=8)
        assert check.z_score < 5.0
        assert check.to_dict()["trials"] == 50_000

    def test_needs_enough_trials(self):
        with pytest.raises(ValidationError):
            verify_avg_bhatt([[1.0]], 1, 10.0, trials=5000)


class TestExponentEstimate:
    """Slope of -log2 pe against the block count."""

    def test_binary_scale_codebook(self):
        spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=1, rho=10.0)
        codebook = default_codebook(spec, 2)
        estimate = exponent_estimate(spec, codebook, [1, 2, 3, 4], trials=20_000, seed=2)
        assert len(estimate.points) >= 3
        assert estimate.slope > 0.3
        assert estimate.delta_min == pytest.approx(codebook.min_distance())
        assert estimate.to_dict()["above_floor"] == estimate.above_floor

    def test_unestimable_grid(self):
        spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=1, rho=1e12)
        codebook = default_codebook(spec, 2)
        with pytest.raises(NumericalError):
            exponent_estimate(spec, codebook, [5, 6, 7], trials=1000)

    def test_short_grid(self):
        spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=1, rho=10.0)
        with pytest.raises(ValidationError):
            exponent_estimate(spec, default_codebook(spec, 2), [1, 2])


class TestEnergyOnlyAgreement:
    def test_energy_statistic_is_sufficient(self):
        spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=3, rho=100.0)
        agreement = energy_only_agreement(spec, default_codebook(spec, 5), n=2, trials=5000, seed=6)
        assert agreement == pytest.approx(1.0, abs=2e-3)
