"""Unit tests for packing numbers and diversity frontiers."""

import math

import numpy as np
import pytest

from gauge_frontier.config.channel import ChannelKind, ChannelSpec
from gauge_frontier.core.channels import block_pair_frontier, fixed_h_pair_frontier
from gauge_frontier.core.codebook import codebook_for
from gauge_frontier.core.divergence import hellinger_from_bhatt, log2_cosh
from gauge_frontier.core.packing import (
    PackingResult,
    bruteforce_frontier,
    coherent_pack_count,
    cutoff_rate,
    default_codebook,
    expurgated_pack_lower,
    frontier_bounds,
    grassmann_frontier_bounds,
    grassmann_line_pack_count,
    greedy_maxmin,
    hellinger_covering_converse,
    kl_converse_bound,
    lattice_pack_count,
    mimo_frontier_lower,
    mimo_frontier_upper,
    pack_count,
    scale_frontier,
    scale_pack_count,
)
from gauge_frontier.utils.exceptions import (
    BudgetExhaustedError,
    InstanceTooLargeError,
    NoPairError,
    SandwichViolationError,
    UnsupportedSpecError,
    ValidationError,
)


# rho with ln(1 + rho) = 2
RHO_SPAN_TWO = math.exp(2.0) - 1.0


def scale_candidates(levels, N=1, rho=RHO_SPAN_TWO):
    return codebook_for(ChannelSpec(kind=ChannelKind.FAST_FADING, N=N, rho=rho), np.asarray(levels))


class TestPackingResult:
    def test_sandwich_violation(self):
        with pytest.raises(SandwichViolationError):
            PackingResult(
                mode="count",
                rho=1.0,
                value_lower=2.0,
                value_upper=1.0,
                method_lower="a",
                method_upper="b",
            )

    def test_threshold_complexity(self):
        result = PackingResult(
            mode="threshold",
            rho=1.0,
            value_lower=8.0,
            value_upper=math.inf,
            method_lower="a",
            method_upper="none",
        )
        assert result.k_pack_lower == pytest.approx(3.0)
        assert result.k_pack_upper == math.inf
        assert not result.exact


class TestScaleFamily:
    """Exact packing of equally spaced log-variance levels."""

    def test_two_points_at_span_two(self):
        """L = 2 and delta = log2 cosh(1) admit exactly two levels."""
        result = scale_pack_count(math.log2(math.cosh(1.0)), RHO_SPAN_TWO, 1)
        assert result.value_lower == result.value_upper == 2.0
        assert result.exact
        assert result.k_pack_lower == pytest.approx(1.0)

    def test_frontier_two_points(self):
        result = scale_frontier(2, RHO_SPAN_TWO, 1)
        assert result.value_lower == pytest.approx(0.62570, abs=1e-5)
        assert result.certificate is not None
        assert result.certificate.min_distance() == pytest.approx(result.value_lower, abs=1e-10)

    def test_count_matches_spacing_formula(self):
        """N_pack = 1 + floor(L / (2 acosh(2^(delta/N)))) on random instances."""
        rng = np.random.default_rng(3)
        for _ in range(50):
            delta = float(rng.uniform(0.05, 5.0))
            rho = float(10.0 ** rng.uniform(0.5, 12.0))
            N = int(rng.integers(1, 4))
            spacing = 2.0 * math.acosh(2.0 ** (delta / N))
            expected = 1 + math.floor(math.log1p(rho) / spacing)
            assert scale_pack_count(delta, rho, N).value_lower == expected

    def test_certificate_reaches_threshold(self):
        result = scale_pack_count(0.5, 1e6, 2)
        assert result.certificate is not None
        assert len(result.certificate) == int(result.value_lower)
        assert result.certificate.min_distance() >= 0.5 * (1 - 1e-12)
        result.certificate.check_power()

    def test_threshold_above_span_gives_one_point(self):
        result = scale_pack_count(50.0, 10.0, 1)
        assert result.value_lower == 1.0
        assert result.certificate is not None
        assert result.certificate.min_distance() == math.inf

    def test_inverse_relationship(self):
        """N_pack(delta) >= K exactly when the K-frontier reaches delta."""
        for rho in (10.0, 1e4, 1e9):
            for K in (2, 3, 5, 17):
                frontier = scale_frontier(K, rho, 2).value_lower
                assert scale_pack_count(frontier, rho, 2).value_lower >= K
                assert scale_pack_count(frontier * 1.001, rho, 2).value_lower < K

    def test_full_load_limit(self):
        """K = ceil(log2 rho) drives the frontier to N log2 cosh(ln 2 / 2)."""
        rho = 1e300
        K = math.ceil(math.log2(rho))
        value = scale_frontier(K, rho, 3).value_lower
        assert value == pytest.approx(3 * log2_cosh(math.log(2.0) / 2.0), rel=1e-2)

    def test_single_codeword_has_no_pair(self):
        with pytest.raises(NoPairError):
            scale_frontier(1, 10.0, 1)

    def test_nonpositive_threshold(self):
        with pytest.raises(ValidationError):
            scale_pack_count(0.0, 10.0, 1)

    def test_hellinger_threshold_matches_bhattacharyya(self):
        for delta in (0.3, 1.0, 2.5):
            bhatt = scale_pack_count(delta, 1e5, 1)
            hellinger = scale_pack_count(hellinger_from_bhatt(delta), 1e5, 1, "hellinger")
            assert hellinger.value_lower == bhatt.value_lower

    def test_hellinger_threshold_range(self):
        with pytest.raises(ValidationError):
            scale_pack_count(1.5, 1e5, 1, "hellinger")

    def test_kl_packing_is_denser(self):
        """KL separation is at least twice the Bhattacharyya one, so KL at 2 delta packs no fewer."""
        kl = scale_pack_count(2.0, 1e6, 1, "kl").value_lower
        bhatt = scale_pack_count(1.0, 1e6, 1).value_lower
        assert kl >= bhatt

    def test_covering_converse_holds(self):
        converse = hellinger_covering_converse(1.0, 1e6, 1)
        assert converse.n_pack == 6
        assert converse.holds
        assert converse.to_dict()["holds"] is True


class TestSearchPrimitives:
    """Exhaustive and greedy max-min selection."""

    def setup_method(self):
        rng = np.random.default_rng(5)
        self.levels = np.sort(rng.uniform(0.0, 2.0, 12))
        self.candidates = scale_candidates(self.levels)

    def test_bruteforce_two_is_diameter(self):
        result = bruteforce_frontier(self.candidates, 2)
        assert result.value_lower == pytest.approx(np.max(self.candidates.distance_matrix()))

    def test_bruteforce_all_is_minimum(self):
        result = bruteforce_frontier(self.candidates, len(self.candidates))
        assert result.value_lower == pytest.approx(self.candidates.min_distance())

    def test_bruteforce_below_exact_frontier(self):
        result = bruteforce_frontier(self.candidates, 4)
        assert result.value_lower <= scale_frontier(4, RHO_SPAN_TWO, 1).value_lower + 1e-12
        assert result.certificate is not None
        assert result.certificate.min_distance() == pytest.approx(result.value_lower, abs=1e-10)

    def test_bruteforce_finds_equal_spacing(self):
        """A candidate set holding the equally spaced levels reaches the exact frontier."""
        levels = np.concatenate([np.linspace(0.0, 2.0, 4), [0.3, 0.9, 1.1, 1.9]])
        result = bruteforce_frontier(scale_candidates(levels), 4)
        assert result.value_lower == pytest.approx(scale_frontier(4, RHO_SPAN_TWO, 1).value_lower)

    def test_bruteforce_size_limit(self):
        with pytest.raises(InstanceTooLargeError):
            bruteforce_frontier(scale_candidates(np.linspace(0.0, 2.0, 25)), 2)

    def test_greedy_single_point(self):
        chosen = greedy_maxmin(self.candidates, 1, seed=4)
        assert len(chosen) == 1
        assert chosen.min_distance() == math.inf

    def test_greedy_two_picks_extremes(self):
        chosen = greedy_maxmin(self.candidates, 2, seed=9)
        assert sorted(chosen.points.tolist()) == pytest.approx([self.levels[0], self.levels[-1]])

    def test_greedy_deterministic_and_bounded(self):
        first = greedy_maxmin(self.candidates, 4, seed=1)
        second = greedy_maxmin(self.candidates, 4, seed=1)
        assert first.points.tolist() == second.points.tolist()
        assert first.min_distance() <= bruteforce_frontier(self.candidates, 4).value_lower + 1e-12


class TestMatrixFrontiers:
    """Coherent and block-fading sandwiches."""

    def test_scalar_coherent_search_near_antipodal(self):
        result = mimo_frontier_lower(1, 1, 1, 100.0, 2, trials=200, seed=0)
        assert result.value_lower >= 0.95 * math.log2(101.0)
        assert result.value_lower <= result.value_upper
        assert result.value_upper == pytest.approx(math.log2(101.0))

    def test_coherent_certificate_reproduces_value(self):
        result = mimo_frontier_lower(2, 2, 2, 1e3, 8, trials=8, seed=2)
        assert result.certificate is not None
        result.certificate.check_power()
        assert result.certificate.min_distance() == pytest.approx(result.value_lower, rel=1e-9)

    def test_coherent_upper_decreasing_in_k(self):
        values = [mimo_frontier_upper(1, 1, 1e4, K) for K in (16, 64, 256, 1024)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_coherent_search_is_seeded(self):
        first = mimo_frontier_lower(2, 1, 2, 1e2, 6, trials=4, seed=11)
        second = mimo_frontier_lower(2, 1, 2, 1e2, 6, trials=4, seed=11, threads=3)
        assert first.value_lower == second.value_lower

    def test_orthogonal_pair_at_high_snr(self):
        rho = 1e12
        result = grassmann_frontier_bounds(1, 1, 2, rho, 2)
        assert result.method_lower == "orthogonal-subspaces"
        assert result.value_lower == pytest.approx(block_pair_frontier(1, 1, 2, rho))
        assert 0.9 <= result.value_lower / math.log2(rho) <= 1.0

    def test_random_subspaces(self):
        result = grassmann_frontier_bounds(1, 2, 3, 1e4, 6, trials=4, seed=0)
        assert result.value_lower <= result.value_upper
        assert result.certificate is not None
        result.certificate.check_power()
        assert result.certificate.min_distance() == pytest.approx(result.value_lower, rel=1e-8)

    def test_grassmann_needs_room(self):
        with pytest.raises(UnsupportedSpecError):
            grassmann_frontier_bounds(2, 1, 3, 1e4, 2)


class TestThresholdBounds:
    """Lattice constructions and volume converses."""

    def test_scalar_lattice_certificate(self):
        result = lattice_pack_count([[1.0]], 1, 1.0, 100.0)
        assert result.log_scale
        assert result.value_lower == pytest.approx(2 * math.log2(9))
        assert result.value_lower <= result.value_upper
        assert result.certificate is not None
        assert len(result.certificate) == 81
        result.certificate.check_power()
        assert result.certificate.min_distance() >= 1.0 * (1 - 1e-9)

    def test_coherent_lattice_sandwich(self):
        result = coherent_pack_count(2, 2, 2, 1.0, 1e4)
        assert 0.0 <= result.value_lower <= result.value_upper

    def test_line_packing(self):
        result = grassmann_line_pack_count(3, 1, 1.0, 1e6)
        assert 0.0 < result.value_lower <= result.value_upper
        assert grassmann_line_pack_count(3, 1, 50.0, 10.0).value_lower == 0.0

    def test_line_packing_needs_two_symbols(self):
        with pytest.raises(UnsupportedSpecError):
            grassmann_line_pack_count(1, 1, 1.0, 10.0)


class TestExpurgation:
    """Random coding with bad pairs removed."""

    def setup_method(self):
        self.spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=1, rho=1e6)

    def test_huge_threshold_certifies_one(self):
        result = expurgated_pack_lower(self.spec, 1000.0)
        assert result.value_lower == 1.0

    def test_close_to_exact_count(self):
        result = expurgated_pack_lower(self.spec, 1.0, seed=3)
        exact = scale_pack_count(1.0, 1e6, 1).value_lower
        assert 1.0 <= result.value_lower <= exact
        assert abs(math.log2(result.value_lower) - math.log2(exact)) <= 2.0
        assert result.certificate is not None
        assert result.certificate.min_distance() >= 1.0

    def test_budget_too_small(self):
        with pytest.raises(BudgetExhaustedError):
            expurgated_pack_lower(self.spec, 1.0, sample_budget=0)

    def test_deterministic(self):
        first = expurgated_pack_lower(self.spec, 0.5, seed=8)
        second = expurgated_pack_lower(self.spec, 0.5, seed=8)
        assert first.value_lower == second.value_lower
        assert first.diagnostics["schedule"] == second.diagnostics["schedule"]


class TestCutoffAndConverse:
    def test_single_point(self):
        assert cutoff_rate(scale_candidates([0.0])) == 0.0

    def test_two_scale_points(self):
        codebook = scale_candidates([0.0, 2.0])
        expected = -math.log2(0.5 * (1.0 + 2.0 ** -math.log2(math.cosh(1.0))))
        assert cutoff_rate(codebook) == pytest.approx(expected)

    def test_bounded_by_log_size(self):
        codebook = default_codebook(ChannelSpec(kind=ChannelKind.FAST_FADING, N=4, rho=1e8), 8)
        assert 0.0 <= cutoff_rate(codebook) <= 3.0

    def test_invalid_weights(self):
        with pytest.raises(ValidationError):
            cutoff_rate(scale_candidates([0.0, 2.0]), [0.7, 0.7])
        with pytest.raises(ValidationError):
            cutoff_rate(scale_candidates([0.0, 2.0]), [1.0])

    def test_kl_converse_example(self):
        assert kl_converse_bound(1024, 1.0, 0.25) == pytest.approx(16.83, abs=5e-3)

    def test_kl_converse_vanishes(self):
        assert kl_converse_bound(1, 0.0, 1e-9) == pytest.approx(0.0, abs=1e-6)

    def test_kl_converse_monotone(self):
        assert kl_converse_bound(2048, 1.0, 0.25) > kl_converse_bound(1024, 1.0, 0.25)
        assert kl_converse_bound(1024, 2.0, 0.25) > kl_converse_bound(1024, 1.0, 0.25)
        assert kl_converse_bound(1024, 1.0, 0.3) > kl_converse_bound(1024, 1.0, 0.25)

    def test_kl_converse_error_range(self):
        with pytest.raises(ValidationError):
            kl_converse_bound(4, 1.0, 0.5)


class TestDispatch:
    """pack_count and frontier_bounds route by channel kind."""

    def test_scale_pack(self):
        spec = ChannelSpec(kind=ChannelKind.MULTIPATH, N=1, rho=RHO_SPAN_TWO / 2, taps=(1.0, 1.0))
        result = pack_count(spec, math.log2(math.cosh(1.0)))
        assert result.value_lower == 2.0

    def test_divergence_restricted_to_scale(self):
        spec = ChannelSpec(kind=ChannelKind.COHERENT_MIMO, M=1, N=1, T=1, rho=10.0)
        with pytest.raises(UnsupportedSpecError):
            pack_count(spec, 1.0, "kl")

    def test_block_fading_routes(self):
        lines = ChannelSpec(kind=ChannelKind.BLOCK_FADING, M=1, N=1, T=2, rho=1e6)
        assert pack_count(lines, 1.0).method_lower == "gilbert-varshamov"
        planes = ChannelSpec(kind=ChannelKind.BLOCK_FADING, M=2, N=1, T=4, rho=1e6)
        assert pack_count(planes, 1.0, sample_budget=2**10).method_lower == "expurgation"

    def test_frontier_needs_two(self):
        spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=1, rho=10.0)
        with pytest.raises(NoPairError):
            frontier_bounds(spec, K=1)
        with pytest.raises(NoPairError):
            frontier_bounds(spec, log2_k=0.5)

    def test_fixed_h_pair(self):
        H = np.array([[1.0, 0.0], [0.0, 0.5]])
        spec = ChannelSpec(kind=ChannelKind.FIXED_H, M=2, N=2, T=1, rho=10.0, H=H)
        result = frontier_bounds(spec, K=2)
        assert result.exact
        assert result.value_lower == pytest.approx(fixed_h_pair_frontier(H, 1, 10.0))
        assert result.certificate is not None
        assert result.certificate.min_distance() == pytest.approx(result.value_lower)

    def test_frac_log_only_pairs(self):
        spec = ChannelSpec(kind=ChannelKind.FRAC_LOG, N=1, T=8, rho=1e4, beta=0.5, c_beta=1.0)
        assert frontier_bounds(spec, K=2).value_upper == math.inf
        with pytest.raises(UnsupportedSpecError):
            frontier_bounds(spec, K=3)

    def test_default_scale_codebook(self):
        spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=2, rho=1e4)
        codebook = default_codebook(spec, 4)
        assert codebook.points.tolist() == pytest.approx(
            (math.log1p(1e4) * np.arange(4) / 3).tolist()
        )
        assert codebook.min_distance() == pytest.approx(2 * log2_cosh(math.log1p(1e4) / 6))
