"""
Configuration management for parallax.

Uses environment variables with sensible defaults; a YAML file can override
tolerance and oracle settings per run.
"""
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import TYPE_CHECKING

import yaml

from parallax.errors import ParallaxError, ParseError
from parallax.linalg import Tolerance

if TYPE_CHECKING:
    from parallax.oracle import OracleConfig


class ParallaxConfig:
    """Configuration for the parallax library and CLI."""

    # Oracle reproducibility
    SEED = int(os.getenv("PARALLAX_SEED", "20240601"))

    # Decider tolerances
    ABS_TOL = float(os.getenv("PARALLAX_ABS_TOL", "1e-8"))
    REL_TOL = float(os.getenv("PARALLAX_REL_TOL", "1e-8"))
    GRID_POINTS = int(os.getenv("PARALLAX_GRID", "720"))
    REFINE_ITERS = int(os.getenv("PARALLAX_REFINE", "60"))

    # Brute-force oracle budgets
    LAMBDA_GRID = int(os.getenv("PARALLAX_LAMBDA_GRID", "4096"))
    SPHERE_SAMPLES = int(os.getenv("PARALLAX_SPHERE_SAMPLES", "20000"))
    REFINE_STEPS = int(os.getenv("PARALLAX_REFINE_STEPS", "100"))

    LOG_LEVEL = os.getenv("PARALLAX_LOG_LEVEL", "WARNING")


def get_config():
    """Get configuration for parallax."""
    return ParallaxConfig


def print_config(config_class, console=None):
    """Print configuration for debugging."""
    from rich.console import Console
    from rich.table import Table

    table = Table(title=f"{config_class.__name__} Configuration")
    table.add_column("Setting", style="bold")
    table.add_column("Value")
    for attr in dir(config_class):
        if attr.isupper():
            table.add_row(attr, str(getattr(config_class, attr)))
    (console or Console()).print(table)


def default_tolerance() -> Tolerance:
    """Tolerance built from the environment-backed defaults."""
    config = get_config()
    return Tolerance(
        abs_tol=config.ABS_TOL,
        rel_tol=config.REL_TOL,
        grid_points=config.GRID_POINTS,
        refine_iters=config.REFINE_ITERS,
    )


def default_oracle_config() -> "OracleConfig":
    """OracleConfig built from the environment-backed defaults."""
    from parallax.oracle import OracleConfig

    config = get_config()
    return OracleConfig(
        lambda_grid=config.LAMBDA_GRID,
        sphere_samples=config.SPHERE_SAMPLES,
        refine_steps=config.REFINE_STEPS,
        seed=config.SEED,
    )


# --- Settings files ---

@dataclass
class Settings:
    """Tolerance and oracle settings for one run."""
    tolerance: Tolerance
    oracle: "OracleConfig"


def _apply_overrides(base, overrides: dict | None, section: str):
    if not overrides:
        return base
    if not isinstance(overrides, dict):
        raise ParseError(f"'{section}' must be a mapping")
    known = {f.name for f in fields(base)}
    unknown = set(overrides) - known
    if unknown:
        raise ParseError(f"Unknown {section} settings: {', '.join(sorted(unknown))}")
    try:
        return replace(base, **overrides)
    except (TypeError, ValueError, ParallaxError) as e:
        raise ParseError(f"Invalid {section} settings: {e}") from e


def load_settings(path: Path | None = None) -> Settings:
    """Load tolerance and oracle overrides from a YAML file.

    The file may contain a `tolerance:` mapping (abs_tol, rel_tol,
    grid_points, refine_iters) and an `oracle:` mapping (lambda_grid,
    sphere_samples, refine_steps, seed). Missing keys keep their defaults.
    """
    tolerance = default_tolerance()
    oracle = default_oracle_config()
    if path is None:
        return Settings(tolerance=tolerance, oracle=oracle)

    try:
        with open(path) as f:
            data = yaml.safe_load(f) or {}
    except (OSError, yaml.YAMLError) as e:
        raise ParseError(f"Cannot read settings file {path}: {e}") from e

    if not isinstance(data, dict):
        raise ParseError(f"Settings file {path} must contain a mapping")
    unknown = set(data) - {"tolerance", "oracle"}
    if unknown:
        raise ParseError(f"Unknown settings sections: {', '.join(sorted(unknown))}")

    return Settings(
        tolerance=_apply_overrides(tolerance, data.get("tolerance"), "tolerance"),
        oracle=_apply_overrides(oracle, data.get("oracle"), "oracle"),
    )
