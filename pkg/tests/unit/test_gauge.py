"""Unit tests for gauge identification and tradeoff classification."""

import math
from fractions import Fraction
from unittest.mock import patch

import numpy as np
import pytest

from gauge_frontier.config.channel import ChannelKind, ChannelSpec
from gauge_frontier.core import gauge as gauge_module
from gauge_frontier.core.gauge import (
    LOG2_10,
    GaugeCandidate,
    GaugeFamily,
    RhoGrid,
    b_diversity,
    capacity_proxy,
    classify_tradeoff,
    dmt_compare,
    gauge_dof,
    identify_gauge,
    load_codebook_size,
    load_log2_size,
    read_sweep,
)
from gauge_frontier.utils.exceptions import (
    ConfigurationError,
    UnsupportedSpecError,
    ValidationError,
)


WIDE_GRID = RhoGrid.parse("3:300:12")


def synthetic(function, log10_start, log10_stop, points=15):
    log2_rho = np.linspace(log10_start, log10_stop, points) * LOG2_10
    return [(float(x), float(function(x))) for x in log2_rho]


class TestIdentifyGauge:
    """Noiseless synthetic sweeps recover their own family."""

    def test_log_family(self):
        reading = identify_gauge(synthetic(lambda x: 3.0 * x, 2, 30))
        assert reading.identified
        assert reading.best == GaugeCandidate(GaugeFamily.LOG)
        assert reading.coefficient == pytest.approx(3.0, abs=0.01)

    def test_loglog_family(self):
        reading = identify_gauge(synthetic(lambda x: 2.0 * math.log2(x), 2, 100))
        assert reading.identified
        assert reading.best is not None
        assert reading.best.family is GaugeFamily.LOGLOG
        assert reading.coefficient == pytest.approx(2.0, abs=0.05)
        pow_log_drifts = [
            drift for label, drift in reading.diagnostics["drifts"].items() if label.startswith("pow-log")
        ]
        assert all(drift > reading.drift for drift in pow_log_drifts)

    def test_pow_log_family(self):
        reading = identify_gauge(synthetic(lambda x: 1.5 * x**0.5, 2, 300))
        assert reading.best == GaugeCandidate(GaugeFamily.POW_LOG, 0.5)
        assert reading.coefficient == pytest.approx(1.5, rel=1e-6)

    def test_constant_family(self):
        reading = identify_gauge(synthetic(lambda x: 5.0, 2, 30))
        assert reading.best is not None
        assert reading.best.family is GaugeFamily.CONST
        assert reading.coefficient == pytest.approx(5.0)

    def test_non_monotone_is_inconclusive(self):
        samples = synthetic(lambda x: 3.0 * x, 2, 30)
        samples[4] = (samples[4][0], samples[4][1] * 10.0)
        assert identify_gauge(samples).status == "inconclusive"

    def test_too_few_samples(self):
        with pytest.raises(ValidationError):
            identify_gauge(synthetic(lambda x: x, 2, 30, points=3))

    def test_rejects_nonpositive_values(self):
        samples = synthetic(lambda x: x - 20.0, 2, 30)
        with pytest.raises(ValidationError):
            identify_gauge(samples)

    def test_candidate_parameters(self):
        with pytest.raises(ValidationError):
            GaugeCandidate(GaugeFamily.POW_LOG, 1.5)
        with pytest.raises(ValidationError):
            GaugeCandidate(GaugeFamily.POW)
        assert GaugeCandidate(GaugeFamily.POW, 0.5).label == "pow(0.5)"

    def test_drift_equal_to_threshold_still_identifies(self):
        samples = synthetic(lambda x: x * (1.0 + 0.0005 * x), 2, 30)
        menu = [GaugeCandidate(GaugeFamily.LOG)]
        drift = identify_gauge(samples, menu).drift
        assert 0 < drift < 1

        assert identify_gauge(samples, menu, drift_threshold=drift).status == "identified"
        assert identify_gauge(samples, menu, drift_threshold=drift / 2).status == "inconclusive"

    @pytest.mark.parametrize("threshold", [0.0, 1.0, -0.1])
    def test_drift_threshold_range(self, threshold):
        with pytest.raises(ValidationError):
            identify_gauge(synthetic(lambda x: 3.0 * x, 2, 30), drift_threshold=threshold)


class TestRhoGrid:
    def test_parse(self):
        grid = RhoGrid.parse("3:300:12")
        assert grid.points == 12
        assert grid.decades == pytest.approx(297.0)
        assert grid.log2_values()[-1] == pytest.approx(300 * LOG2_10)
        assert str(grid) == "3:300:12"

    @pytest.mark.parametrize("text", ["3:300", "a:b:c", "0:10:5", "5:3:4", "1:400:5", "1:10:1"])
    def test_invalid(self, text):
        with pytest.raises(ValidationError):
            RhoGrid.parse(text)

    def test_read_sweep(self, tmp_path):
        path = tmp_path / "sweep.csv"
        path.write_text("# offline sweep\nrho,value\n1024,3\n1048576,6\n")
        assert read_sweep(path) == [(10.0, 3.0), (20.0, 6.0)]

    def test_read_sweep_missing_columns(self, tmp_path):
        path = tmp_path / "sweep.csv"
        path.write_text("snr,y\n1,2\n")
        with pytest.raises(ConfigurationError):
            read_sweep(path)


class TestLoads:
    """Normalization of codebook size by channel class."""

    def test_scale_family_uses_log_of_log(self):
        spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=1, rho=10.0)
        assert load_log2_size(spec, 0.5, 1024.0) == pytest.approx(5.0)
        assert load_codebook_size(spec, 0.5, 1024.0) == 32

    def test_coherent_and_block(self):
        coherent = ChannelSpec(kind=ChannelKind.COHERENT_MIMO, M=2, N=2, T=2, rho=10.0)
        assert load_log2_size(coherent, 0.5, 10.0) == pytest.approx(10.0)
        block = ChannelSpec(kind=ChannelKind.BLOCK_FADING, M=1, N=1, T=4, rho=10.0)
        assert load_log2_size(block, 0.5, 10.0) == pytest.approx(15.0)

    def test_load_out_of_range(self):
        spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=1, rho=10.0)
        with pytest.raises(ValidationError):
            load_log2_size(spec, 1.5, 10.0)

    def test_too_large_to_enumerate(self):
        spec = ChannelSpec(kind=ChannelKind.COHERENT_MIMO, M=2, N=2, T=2, rho=10.0)
        with pytest.raises(ValidationError):
            load_codebook_size(spec, 1.0, 100.0)


class TestGaugeDof:
    """Packing complexity read on its own gauge."""

    @pytest.mark.parametrize("N", [1, 2, 3])
    def test_fast_fading_is_loglog(self, N):
        spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=N, rho=10.0)
        reading = gauge_dof(spec, 1.0, WIDE_GRID)
        assert reading.identified
        assert reading.best is not None
        assert reading.best.family is GaugeFamily.LOGLOG
        assert 0.75 <= reading.coefficient <= 1.1

    def test_fixed_h_rank(self):
        spec = ChannelSpec(kind=ChannelKind.FIXED_H, M=2, N=2, T=1, rho=10.0, H=np.eye(2))
        reading = gauge_dof(spec, 1.0, WIDE_GRID)
        assert reading.best == GaugeCandidate(GaugeFamily.LOG)
        assert reading.coefficient == pytest.approx(2.0, abs=0.05)
        assert len(reading.diagnostics["values"]) == WIDE_GRID.points

    def test_block_fading_lines(self):
        spec = ChannelSpec(kind=ChannelKind.BLOCK_FADING, M=1, N=1, T=2, rho=10.0)
        reading = gauge_dof(spec, 1.0, WIDE_GRID)
        assert reading.best == GaugeCandidate(GaugeFamily.LOG)
        assert reading.coefficient == pytest.approx(0.5, abs=0.1)

    def test_block_fading_planes_unsupported(self):
        spec = ChannelSpec(kind=ChannelKind.BLOCK_FADING, M=2, N=1, T=4, rho=10.0)
        with pytest.raises(UnsupportedSpecError):
            gauge_dof(spec, 1.0, WIDE_GRID)

    def test_grid_span(self):
        spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=1, rho=10.0)
        with pytest.raises(ValidationError):
            gauge_dof(spec, 1.0, RhoGrid.parse("1:5:8"))


class TestBDiversity:
    """Certified frontier read on its diversity gauge."""

    def test_fast_fading_pair(self):
        """Delta*(2; rho) grows like (N/2) log2 rho."""
        spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=2, rho=10.0)
        reading = b_diversity(spec, 0.0, WIDE_GRID)
        assert reading.best == GaugeCandidate(GaugeFamily.LOG)
        assert reading.coefficient == pytest.approx(1.0, abs=0.01)

    def test_fixed_h_pair_is_linear(self):
        spec = ChannelSpec(kind=ChannelKind.FIXED_H, M=1, N=1, T=1, rho=10.0, H=np.eye(1))
        reading = b_diversity(spec, 0.0, WIDE_GRID)
        assert reading.best == GaugeCandidate(GaugeFamily.POW, 1.0)

    def test_frac_log_needs_zero_load(self):
        spec = ChannelSpec(kind=ChannelKind.FRAC_LOG, N=1, T=8, rho=10.0, beta=0.5, c_beta=1.0)
        with pytest.raises(UnsupportedSpecError):
            b_diversity(spec, 0.25, WIDE_GRID)


class TestClassifyTradeoff:
    """Same-gauge versus cross-gauge verdicts."""

    @pytest.mark.parametrize(
        "spec, verdict",
        [
            (ChannelSpec(kind=ChannelKind.FIXED_H, M=2, N=2, T=1, rho=10.0, H=np.eye(2)), "cross-gauge"),
            (ChannelSpec(kind=ChannelKind.COHERENT_MIMO, M=2, N=2, T=2, rho=10.0), "same-gauge"),
            (ChannelSpec(kind=ChannelKind.BLOCK_FADING, M=1, N=1, T=2, rho=10.0), "same-gauge"),
            (ChannelSpec(kind=ChannelKind.FAST_FADING, N=1, rho=10.0), "cross-gauge"),
        ],
    )
    def test_verdicts(self, spec, verdict):
        report = classify_tradeoff(spec, WIDE_GRID)
        assert report.verdict == verdict
        assert len(report.ratio_trace) == WIDE_GRID.points
        assert report.to_dict()["type"] == verdict

    def test_short_grid_is_inconclusive(self):
        spec = ChannelSpec(kind=ChannelKind.COHERENT_MIMO, M=1, N=1, T=1, rho=10.0)
        report = classify_tradeoff(spec, RhoGrid.parse("3:5:12"))
        assert report.verdict == "inconclusive"

    def test_capacity_proxies(self):
        fast = ChannelSpec(kind=ChannelKind.FAST_FADING, N=1, rho=2.0**512)
        assert capacity_proxy(fast) == pytest.approx(9.0, abs=1e-9)
        block = ChannelSpec(kind=ChannelKind.BLOCK_FADING, M=1, N=1, T=4, rho=2.0**40)
        assert capacity_proxy(block) == pytest.approx(30.0)
        with pytest.raises(UnsupportedSpecError):
            capacity_proxy(ChannelSpec(kind=ChannelKind.BLOCK_FADING, M=2, N=1, T=2, rho=10.0))

    def test_divergence_factor_argument(self):
        spec = ChannelSpec(kind=ChannelKind.FIXED_H, M=1, N=1, T=1, rho=10.0, H=np.eye(1))
        with patch.object(gauge_module.analysis_config, "cross_elasticity", math.inf):
            assert classify_tradeoff(spec, WIDE_GRID).verdict == "cross-gauge"
            relaxed = classify_tradeoff(spec, WIDE_GRID, divergence_factor=1e300)
        assert relaxed.verdict == "inconclusive"
        with pytest.raises(ValidationError):
            classify_tradeoff(spec, WIDE_GRID, divergence_factor=1.0)

    def test_rate_reading_comes_from_packing(self):
        spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=1, rho=10.0)
        report = classify_tradeoff(spec, WIDE_GRID)
        expected = gauge_dof(spec, 1.0, WIDE_GRID)

        assert report.rate_reading is not None
        assert report.rate_reading.best is not None
        assert report.rate_reading.best.family is GaugeFamily.LOGLOG
        assert report.rate_reading.coefficient == pytest.approx(expected.coefficient)
        assert report.rate_reading.diagnostics["values"] == expected.diagnostics["values"]
        assert report.capacity_reading is not None
        assert report.to_dict()["capacity_reading"]["best"]["label"] == report.capacity_reading.best.label

    def test_rate_reading_for_fixed_channel(self):
        spec = ChannelSpec(kind=ChannelKind.FIXED_H, M=2, N=2, T=1, rho=10.0, H=np.eye(2))
        report = classify_tradeoff(spec, WIDE_GRID)
        assert report.rate_reading is not None
        assert report.rate_reading.best == GaugeCandidate(GaugeFamily.LOG)

    def test_rate_reading_skipped_without_closed_form_count(self):
        spec = ChannelSpec(kind=ChannelKind.BLOCK_FADING, M=2, N=1, T=4, rho=10.0)
        report = classify_tradeoff(spec, WIDE_GRID)
        assert report.rate_reading is None
        assert report.to_dict()["rate_reading"] is None


class TestDmtCompare:
    """Exact rational comparison of the two diversity curves."""

    def test_zero_load(self):
        point = dmt_compare(2, 3, 0)
        assert (point.d_bh, point.d_star, point.gap) == (6, 6, 0)
        assert not point.vacuous

    def test_square_unit_load(self):
        point = dmt_compare(2, 2, 1)
        assert (point.d_bh, point.d_star, point.gap) == (0, 1, 1)

    def test_vacuous_union_bound(self):
        point = dmt_compare(2, 3, "3/2")
        assert point.d_bh == Fraction(-3, 2)
        assert point.d_star == Fraction(3, 4)
        assert point.gap == Fraction(9, 4)
        assert point.vacuous
        assert dmt_compare(2, 3, 1.5) == point

    @pytest.mark.parametrize("r", ["0", "1/3", "1/2", "1", "7/5", "2"])
    def test_gap_is_load_squared(self, r):
        point = dmt_compare(3, 2, r)
        assert point.gap == Fraction(r) ** 2

    def test_out_of_range(self):
        with pytest.raises(ValidationError):
            dmt_compare(2, 2, 3)
        with pytest.raises(ValidationError):
            dmt_compare(2, 2, -0.5)
