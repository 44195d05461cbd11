"""Application configuration settings for gauge-frontier."""

import os
from dataclasses import dataclass, field

from ..utils.exceptions import ConfigurationError


@dataclass
class RuntimeConfig:
    """Process-level configuration (logging, parallelism)."""

    log_level: str = "WARNING"
    debug: bool = False
    enable_structured_logging: bool = True
    log_execution_time: bool = True
    threads: int = 1


@dataclass
class AnalysisConfig:
    """Numerical tolerances and decision thresholds."""

    drift_threshold: float = 0.10
    divergence_factor: float = 4.0
    same_gauge_band: float = 0.25
    cross_elasticity: float = 0.5
    min_grid_points: int = 6
    min_grid_decades: float = 10.0
    beta_grid: tuple[float, ...] = field(
        default=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    )
    power_grid: tuple[float, ...] = field(default=(0.25, 0.5, 0.75, 1.0))
    c_beta: float = 1.0
    rank_tolerance: float = 1e-10
    pd_tolerance: float = 1e-12
    hermitian_tolerance: float = 1e-12
    quadrature_tolerance: float = 1e-9
    szego_tolerance: float = 1e-8
    toeplitz_grid_points: int = 2**16
    eigenvalue_floor: float = 1e-12
    max_bruteforce_candidates: int = 24
    max_certificate_size: int = 100_000


@dataclass
class SimulationConfig:
    """Monte Carlo harness configuration."""

    chunk_size: int = 16384
    min_trials: int = 1000
    max_trials: int = 100_000_000
    confidence: float = 3.0
    auto_escalate: bool = True


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == "true"


def _env_number(name: str, default: str, kind: type[int] | type[float]) -> float:
    raw = os.getenv(name, default)
    try:
        return kind(raw)
    except ValueError as e:
        raise ConfigurationError(
            f"{name} must be a number", config_key=name, config_value=raw
        ) from e


def load_runtime_config() -> RuntimeConfig:
    """Load runtime configuration from environment variables."""
    threads = int(_env_number("GAUGE_FRONTIER_THREADS", str(os.cpu_count() or 1), int))
    if threads < 1:
        raise ConfigurationError(
            "GAUGE_FRONTIER_THREADS must be a positive integer",
            config_key="GAUGE_FRONTIER_THREADS",
            config_value=str(threads),
        )
    return RuntimeConfig(
        log_level=os.getenv("LOG_LEVEL", "WARNING").upper(),
        debug=_env_flag("DEBUG", "false"),
        enable_structured_logging=_env_flag("ENABLE_STRUCTURED_LOGGING", "true"),
        log_execution_time=_env_flag("LOG_EXECUTION_TIME", "true"),
        threads=threads,
    )


def load_analysis_config() -> AnalysisConfig:
    """Load analysis thresholds from environment variables."""
    return AnalysisConfig(
        drift_threshold=_env_number("GAUGE_FRONTIER_DRIFT_THRESHOLD", "0.10", float),
        divergence_factor=_env_number(
            "GAUGE_FRONTIER_DIVERGENCE_FACTOR", "4.0", float
        ),
        same_gauge_band=_env_number("GAUGE_FRONTIER_SAME_GAUGE_BAND", "0.25", float),
        cross_elasticity=_env_number(
            "GAUGE_FRONTIER_CROSS_ELASTICITY", "0.5", float
        ),
        c_beta=_env_number("GAUGE_FRONTIER_C_BETA", "1.0", float),
    )


def load_simulation_config() -> SimulationConfig:
    """Load Monte Carlo settings from environment variables."""
    return SimulationConfig(
        chunk_size=int(_env_number("GAUGE_FRONTIER_MC_CHUNK", "16384", int)),
        max_trials=int(_env_number("GAUGE_FRONTIER_MAX_TRIALS", "100000000", int)),
        auto_escalate=_env_flag("GAUGE_FRONTIER_AUTO_ESCALATE", "true"),
    )


def validate_environment() -> None:
    """Validate that environment-derived settings are usable."""
    errors = []
    runtime = load_runtime_config()
    analysis = load_analysis_config()
    simulation = load_simulation_config()

    if runtime.log_level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
        errors.append(f"unknown LOG_LEVEL {runtime.log_level}")
    if not 0 < analysis.drift_threshold < 1:
        errors.append("GAUGE_FRONTIER_DRIFT_THRESHOLD must lie in (0, 1)")
    if analysis.divergence_factor <= 1:
        errors.append("GAUGE_FRONTIER_DIVERGENCE_FACTOR must exceed 1")
    if analysis.c_beta <= 0:
        errors.append("GAUGE_FRONTIER_C_BETA must be positive")
    if simulation.chunk_size < 1:
        errors.append("GAUGE_FRONTIER_MC_CHUNK must be positive")
    if simulation.max_trials < simulation.min_trials:
        errors.append("GAUGE_FRONTIER_MAX_TRIALS below the minimum trial count")

    if errors:
        raise ConfigurationError(f"Invalid configuration: {'; '.join(errors)}")


# Global configuration instances
runtime_config = load_runtime_config()
analysis_config = load_analysis_config()
simulation_config = load_simulation_config()
