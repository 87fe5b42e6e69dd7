"""
Configuration system for homkit.

Loads settings from YAML config file → environment variables → CLI flags.
Supports named profiles for switching between engine presets.
"""

import os
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import TYPE_CHECKING, Optional

import yaml
from platformdirs import user_config_dir

if TYPE_CHECKING:
    from local_cohomology import CancellationToken


APP_NAME = "homkit"
CONFIG_DIR = Path(user_config_dir(APP_NAME))
CONFIG_FILE = CONFIG_DIR / "config.yaml"

SCHEMA_VERSION = 1
ENGINE_VERSION = "0.1.0"


@dataclass
class Config:
    """Resolved configuration for a script run."""

    json_output: bool = False
    seed: int = 0
    power_cap: int = 12
    window: tuple[int, int] = (-8, 8)
    continue_on_error: bool = False
    include_timing: bool = False
    log_level: str = "WARNING"
    workers: int = 4
    profile_name: str = "default"
    cancel_token: Optional["CancellationToken"] = field(default=None, repr=False, compare=False)

    def display_window(self) -> str:
        return f"{self.window[0]}:{self.window[1]}"

    def engine_metadata(self) -> dict:
        """The engine block embedded in every report."""
        return {
            "version": ENGINE_VERSION,
            "seed": self.seed,
            "power_cap": self.power_cap,
            "window": list(self.window),
        }

    def to_dict(self) -> dict:
        """Serialize to dict (for display/debug)."""
        d = {f.name: getattr(self, f.name) for f in fields(self) if f.name != "cancel_token"}
        d["window"] = self.display_window()
        return d


DEFAULT_CONFIG_YAML = """\
# homkit configuration
# Define profiles for different engine presets.
# Use --profile <name> to select one, or set HOMKIT_PROFILE env var.

default_profile: default

profiles:
  default:
    seed: 0
    power_cap: 12
    window: "-8:8"
    continue_on_error: false
    # include_timing: false
    # workers: 4

  # Example: quick desk checks
  # quick:
  #   power_cap: 6
  #   window: "-3:3"

  # Example: stubborn Ext-limits
  # deep:
  #   power_cap: 24
  #   window: "-12:12"
"""


def parse_window(text: str) -> tuple[int, int]:
    """'lo:hi' -> (lo, hi); ValueError unless lo <= hi."""
    lo, sep, hi = str(text).partition(":")
    if not sep:
        raise ValueError(f"window must look like lo:hi, got {text!r}")
    lo, hi = int(lo), int(hi)
    if lo > hi:
        raise ValueError(f"window {text!r} has lo > hi")
    return lo, hi


def _parse_bool(val: str) -> bool:
    return val.lower() in ("true", "1", "yes")


def _load_yaml_config() -> dict:
    """Load the YAML config file. Returns empty dict if not found."""
    if not CONFIG_FILE.exists():
        return {}
    try:
        with open(CONFIG_FILE, "r") as f:
            data = yaml.safe_load(f) or {}
        return data
    except yaml.YAMLError as e:
        print(f"Warning: Failed to parse {CONFIG_FILE}: {e}", file=sys.stderr)
        return {}


def _get_profile_from_yaml(yaml_data: dict, profile_name: Optional[str]) -> dict:
    """Extract a profile dict from the YAML data."""
    profiles = yaml_data.get("profiles", {})
    if not profiles:
        return {}

    name = profile_name or yaml_data.get("default_profile", "default")
    profile = profiles.get(name)

    if profile is None:
        available = ", ".join(profiles.keys())
        print(
            f"Warning: Profile '{name}' not found. Available: {available}",
            file=sys.stderr,
        )
        return {}

    profile = dict(profile or {})
    if "window" in profile and isinstance(profile["window"], str):
        try:
            profile["window"] = parse_window(profile["window"])
        except ValueError as e:
            print(f"Warning: {e}", file=sys.stderr)
            del profile["window"]
    return profile


def _apply_env_vars(config: dict) -> dict:
    """Override config values with HOMKIT_* environment variables."""
    env_map = {
        "HOMKIT_JSON": "json_output",
        "HOMKIT_SEED": "seed",
        "HOMKIT_POWER_CAP": "power_cap",
        "HOMKIT_WINDOW": "window",
        "HOMKIT_CONTINUE_ON_ERROR": "continue_on_error",
        "HOMKIT_TIMING": "include_timing",
        "HOMKIT_LOG_LEVEL": "log_level",
        "HOMKIT_WORKERS": "workers",
    }

    for env_var, config_key in env_map.items():
        val = os.environ.get(env_var)
        if val is None:
            continue
        # Invalid values are ignored
        if config_key in ("seed", "power_cap", "workers"):
            try:
                val = int(val)
            except ValueError:
                continue
        elif config_key == "window":
            try:
                val = parse_window(val)
            except ValueError:
                continue
        elif config_key in ("json_output", "continue_on_error", "include_timing"):
            val = _parse_bool(val)
        elif config_key == "log_level":
            val = val.upper()
        config[config_key] = val

    return config


def _apply_cli_overrides(config: dict, overrides: dict) -> dict:
    """Apply CLI flag overrides (only non-None values)."""
    for key, val in overrides.items():
        if val is not None:
            config[key] = val
    return config


def load_config(
    profile: Optional[str] = None,
    cli_overrides: Optional[dict] = None,
) -> Config:
    """
    Load configuration with precedence: YAML < env vars < CLI flags.

    Args:
        profile: Profile name to load from YAML config.
        cli_overrides: Dict of CLI flag overrides (non-None values only).

    Returns:
        Resolved Config instance.
    """
    config_dict = asdict(Config())

    # Layer 1: YAML config
    yaml_data = _load_yaml_config()
    profile = profile or os.environ.get("HOMKIT_PROFILE")
    yaml_profile = _get_profile_from_yaml(yaml_data, profile)
    config_dict.update({k: v for k, v in yaml_profile.items() if v is not None})

    # Layer 2: Environment variables
    config_dict = _apply_env_vars(config_dict)

    # Layer 3: CLI flags
    if cli_overrides:
        config_dict = _apply_cli_overrides(config_dict, cli_overrides)

    config_dict["profile_name"] = profile or yaml_data.get("default_profile", "default")
    config_dict["window"] = tuple(config_dict["window"])

    # Build config, filtering out unknown keys
    valid_keys = {f.name for f in Config.__dataclass_fields__.values()}
    filtered = {k: v for k, v in config_dict.items() if k in valid_keys}

    return Config(**filtered)


def create_default_config() -> Path:
    """Create the default config file if it doesn't exist. Returns path."""
    if not CONFIG_FILE.exists():
        CONFIG_FILE.parent.mkdir(parents=True, exist_ok=True)
        CONFIG_FILE.write_text(DEFAULT_CONFIG_YAML)
    return CONFIG_FILE


def list_profiles() -> dict[str, dict]:
    """List all available profiles from the config file."""
    yaml_data = _load_yaml_config()
    return yaml_data.get("profiles", {})
