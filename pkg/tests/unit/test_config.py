"""Tests for environment configuration and channel specifications."""

import json
import os
from unittest.mock import patch

import numpy as np
import pytest

from gauge_frontier.config import channel as channel_module
from gauge_frontier.config.channel import (
    ChannelKind,
    ChannelSpec,
    load_channel_spec,
)
from gauge_frontier.config.settings import (
    load_analysis_config,
    load_runtime_config,
    load_simulation_config,
    validate_environment,
)
from gauge_frontier.utils.exceptions import ConfigurationError, ValidationError


class TestEnvironmentLoaders:
    """Settings dataclasses read their overrides from the environment."""

    def test_analysis_defaults(self):
        with patch.dict(os.environ, {}, clear=True):
            config = load_analysis_config()
        assert config.drift_threshold == 0.10
        assert config.same_gauge_band == 0.25
        assert config.divergence_factor == 4.0
        assert config.min_grid_points == 6
        assert config.min_grid_decades == 10.0
        assert config.c_beta == 1.0

    def test_analysis_overrides(self):
        env = {"GAUGE_FRONTIER_DRIFT_THRESHOLD": "0.05", "GAUGE_FRONTIER_C_BETA": "2.5"}
        with patch.dict(os.environ, env):
            config = load_analysis_config()
        assert config.drift_threshold == 0.05
        assert config.c_beta == 2.5

    def test_runtime_threads(self):
        with patch.dict(os.environ, {"GAUGE_FRONTIER_THREADS": "3", "LOG_LEVEL": "debug"}):
            config = load_runtime_config()
        assert config.threads == 3
        assert config.log_level == "DEBUG"

    def test_runtime_rejects_zero_threads(self):
        with patch.dict(os.environ, {"GAUGE_FRONTIER_THREADS": "0"}):
            with pytest.raises(ConfigurationError):
                load_runtime_config()

    def test_non_numeric_value(self):
        with patch.dict(os.environ, {"GAUGE_FRONTIER_MC_CHUNK": "lots"}):
            with pytest.raises(ConfigurationError) as exc_info:
                load_simulation_config()
        assert exc_info.value.details["config_key"] == "GAUGE_FRONTIER_MC_CHUNK"

    def test_simulation_overrides(self):
        env = {"GAUGE_FRONTIER_MC_CHUNK": "4096", "GAUGE_FRONTIER_MAX_TRIALS": "200000"}
        with patch.dict(os.environ, env):
            config = load_simulation_config()
        assert config.chunk_size == 4096
        assert config.max_trials == 200_000
        assert config.min_trials == 1000
        assert config.auto_escalate is True

    def test_escalation_switch(self):
        with patch.dict(os.environ, {"GAUGE_FRONTIER_AUTO_ESCALATE": "false"}):
            assert load_simulation_config().auto_escalate is False


class TestValidateEnvironment:
    def test_defaults_are_valid(self):
        with patch.dict(os.environ, {}, clear=True):
            validate_environment()

    @pytest.mark.parametrize(
        "env",
        [
            {"LOG_LEVEL": "LOUD"},
            {"GAUGE_FRONTIER_DRIFT_THRESHOLD": "1.5"},
            {"GAUGE_FRONTIER_DIVERGENCE_FACTOR": "0.5"},
            {"GAUGE_FRONTIER_C_BETA": "-1"},
            {"GAUGE_FRONTIER_MAX_TRIALS": "10"},
        ],
    )
    def test_invalid_settings(self, env):
        with patch.dict(os.environ, env):
            with pytest.raises(ConfigurationError):
                validate_environment()


class TestChannelSpec:
    """Per-class parameter rules and the JSON document codec."""

    def test_kind_parsing(self):
        assert ChannelKind.parse("fast-fading") is ChannelKind.FAST_FADING
        assert ChannelKind.parse("Coherent_MIMO") is ChannelKind.COHERENT_MIMO
        with pytest.raises(ValidationError):
            ChannelKind.parse("Rician")

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"kind": ChannelKind.FAST_FADING, "rho": 0.0},
            {"kind": ChannelKind.FAST_FADING, "rho": float("inf")},
            {"kind": ChannelKind.FAST_FADING, "T": 2},
            {"kind": ChannelKind.MULTIPATH, "taps": None},
            {"kind": ChannelKind.MULTIPATH, "taps": (0.0, 0.0)},
            {"kind": ChannelKind.FIXED_H, "M": 2, "N": 2},
            {"kind": ChannelKind.FIXED_H, "M": 2, "N": 2, "H": np.zeros((2, 2))},
            {"kind": ChannelKind.FIXED_H, "M": 2, "N": 1, "H": np.eye(2)},
            {"kind": ChannelKind.FRAC_LOG, "T": 8, "beta": 1.0, "c_beta": 1.0},
            {"kind": ChannelKind.FRAC_LOG, "T": 8, "beta": 0.5, "c_beta": 0.0},
            {"kind": ChannelKind.COHERENT_MIMO, "M": 0},
        ],
    )
    def test_invalid_specs(self, kwargs):
        with pytest.raises(ValidationError):
            ChannelSpec(**kwargs)

    def test_document_round_trip(self):
        H = np.array([[1.0, 0.5j], [0.0, 2.0]])
        spec = ChannelSpec(kind=ChannelKind.FIXED_H, M=2, N=2, T=3, rho=40.0, H=H)
        restored = ChannelSpec.from_dict(json.loads(json.dumps(spec.to_dict())))
        assert restored == spec
        assert np.allclose(restored.H, H)

    def test_fixed_h_shape_defaults(self):
        spec = ChannelSpec.from_dict({"kind": "FixedH", "H_re": [[1.0, 0.0, 2.0]], "rho": 5.0})
        assert (spec.M, spec.N, spec.T) == (3, 1, 1)

    def test_frac_log_default_constant(self):
        spec = ChannelSpec.from_dict({"kind": "FracLog", "T": 16, "beta": 0.4, "rho": 100.0})
        assert spec.c_beta == 1.0

    def test_missing_kind(self):
        with pytest.raises(ValidationError):
            ChannelSpec.from_dict({"rho": 10.0})

    def test_imaginary_part_without_real(self):
        with pytest.raises(ValidationError):
            ChannelSpec.from_dict({"kind": "FixedH", "H_im": [[1.0]]})

    def test_with_rho(self):
        spec = ChannelSpec(kind=ChannelKind.FAST_FADING, N=2, rho=10.0)
        assert spec.with_rho(1e6).rho == 1e6
        assert spec.with_rho(1e6).N == 2
        assert spec.is_scale_family

    def test_partial_opening_warned_once(self):
        """Sweeping rho over one block-fading shape logs the M < T < 2M warning once."""
        channel_module._warn_partial_opening.cache_clear()
        with patch.object(channel_module.logger, "warning") as mock_warning:
            spec = ChannelSpec(kind=ChannelKind.BLOCK_FADING, M=3, N=1, T=4, rho=10.0)
            for rho in (1e2, 1e4, 1e8, 1e16):
                spec.with_rho(rho)
            ChannelSpec(kind=ChannelKind.BLOCK_FADING, M=3, N=2, T=4, rho=5.0)

        mock_warning.assert_called_once()
        assert mock_warning.call_args.kwargs["extra_data"] == {"M": 3, "T": 4}

    def test_full_opening_not_warned(self):
        channel_module._warn_partial_opening.cache_clear()
        with patch.object(channel_module.logger, "warning") as mock_warning:
            ChannelSpec(kind=ChannelKind.BLOCK_FADING, M=2, N=1, T=4, rho=10.0)
        mock_warning.assert_not_called()


class TestLoadChannelSpec:
    def test_plain_document(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps({"kind": "Multipath", "N": 1, "rho": 10.0, "taps": [1, 2]}))
        spec = load_channel_spec(path)
        assert spec.kind is ChannelKind.MULTIPATH
        assert spec.taps == (1.0, 2.0)

    def test_result_document_wrapper(self, tmp_path):
        """A previous result's config block can be replayed directly."""
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"spec": {"kind": "CoherentMIMO", "M": 2, "N": 2, "T": 2, "rho": 8.0}}))
        assert load_channel_spec(path).M == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            load_channel_spec(tmp_path / "absent.json")

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text("{kind: FastFading")
        with pytest.raises(ConfigurationError):
            load_channel_spec(path)

    def test_not_an_object(self, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text("[1, 2, 3]")
        with pytest.raises(ConfigurationError):
            load_channel_spec(path)
