"""Configuration management for Poly Lab"""

import os
import json
import logging
from pathlib import Path
from typing import Optional
from dataclasses import dataclass, field, asdict

from .exceptions import ConfigError

logger = logging.getLogger(__name__)

ENV_PREFIX = "BPL_"


@dataclass
class BudgetConfig:
    """Optimizer budget shared by every search routine"""
    restarts: int = 64
    iterations: int = 500
    tolerance: float = 1e-8
    seed: int = 0
    # Evaluation budget of the torus-grid sup-norm certificate
    certify_points: int = 2_000_000

    def with_seed(self, seed: int) -> "BudgetConfig":
        return BudgetConfig(self.restarts, self.iterations, self.tolerance, seed, self.certify_points)


@dataclass
class CapsConfig:
    enumeration_cap: int = 10**7
    polarization_max_degree: int = 12
    desk_degree: int = 3
    desk_dimension: int = 3
    # Above this many terms the ball search is replaced by flat test vectors
    search_terms_cap: int = 20_000
    certify_dimension: int = 3
    # Largest index set whose unconditionality lower bound is searched
    chi_search_terms: int = 2_000


@dataclass
class OutputConfig:
    format: str = "csv"  # csv, json
    path: Optional[Path] = None
    timing: bool = False


@dataclass
class LabConfig:
    """Main configuration class for Poly Lab"""

    budget: BudgetConfig = field(default_factory=BudgetConfig)
    caps: CapsConfig = field(default_factory=CapsConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    # 0 = size the worker pool from the host
    threads: int = 0

    # Options: DEBUG, INFO, WARNING, ERROR, CRITICAL
    log_level: str = "WARNING"

    _config_file: Optional[Path] = field(default=None, repr=False)

    def __post_init__(self):
        if isinstance(self.output.path, str):
            self.output.path = Path(self.output.path)
        self.validate()

    def validate(self):
        """Raise ConfigError on values outside their documented ranges"""
        if self.budget.restarts < 1 or self.budget.iterations < 1:
            raise ConfigError("budget restarts and iterations must be positive")
        if not 0 < self.budget.tolerance < 1:
            raise ConfigError(f"tolerance {self.budget.tolerance} outside (0, 1)")
        if self.caps.enumeration_cap < 1:
            raise ConfigError("enumeration cap must be positive")
        if self.output.format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.output.format!r}")
        if self.threads < 0:
            raise ConfigError("threads must be >= 0")

    @classmethod
    def load(cls, config_file: Optional[Path] = None) -> "LabConfig":
        """Load configuration from file, then apply BPL_* overrides"""
        config = cls()

        if config_file:
            config._config_file = Path(config_file)
            if not config._config_file.exists():
                raise ConfigError(f"config file not found: {config._config_file}")
            try:
                with open(config._config_file, 'r') as f:
                    data = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigError(f"invalid JSON in {config._config_file}: {e}") from e
            config._update_from_dict(data)
            logger.info(f"Configuration loaded from {config._config_file}")
        else:
            logger.debug("No config file given, using defaults")

        config._load_env_overrides()
        config.validate()
        return config

    def _update_from_dict(self, data: dict):
        """Update config from dictionary"""
        try:
            if "budget" in data:
                self.budget = BudgetConfig(**data["budget"])
            if "caps" in data:
                self.caps = CapsConfig(**data["caps"])
            if "output" in data:
                self.output = OutputConfig(**data["output"])
        except TypeError as e:
            raise ConfigError(f"unknown configuration key: {e}") from e
        if isinstance(self.output.path, str):
            self.output.path = Path(self.output.path)

        for key in ["threads", "log_level"]:
            if key in data:
                setattr(self, key, data[key])

    def _load_env_overrides(self):
        """Load configuration overrides from environment variables"""
        env_mappings = {
            f"{ENV_PREFIX}THREADS": ("threads", int),
            f"{ENV_PREFIX}SEED": ("budget.seed", int),
            f"{ENV_PREFIX}RESTARTS": ("budget.restarts", int),
            f"{ENV_PREFIX}ITERATIONS": ("budget.iterations", int),
            f"{ENV_PREFIX}TOLERANCE": ("budget.tolerance", float),
            f"{ENV_PREFIX}ENUMERATION_CAP": ("caps.enumeration_cap", int),
            f"{ENV_PREFIX}LOG_LEVEL": ("log_level", str),
        }

        for env_var, (attr_path, type_fn) in env_mappings.items():
            value = os.environ.get(env_var)
            if value:
                try:
                    if "." in attr_path:
                        obj_name, attr_name = attr_path.split(".")
                        setattr(getattr(self, obj_name), attr_name, type_fn(value))
                    else:
                        setattr(self, attr_path, type_fn(value))
                except ValueError as e:
                    raise ConfigError(f"bad value for {env_var}: {value!r}") from e

    def save(self, config_file: Optional[Path] = None):
        """Save configuration to file"""
        target = Path(config_file) if config_file else self._config_file
        if target is None:
            raise ConfigError("no config file to save to")
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, 'w') as f:
            json.dump(self.to_dict(), f, indent=2)
        logger.info(f"Configuration saved to {target}")

    def to_dict(self) -> dict:
        """Convert config to a JSON-ready dictionary (run headers)"""
        output = asdict(self.output)
        output["path"] = str(self.output.path) if self.output.path else None
        return {
            "budget": asdict(self.budget),
            "caps": asdict(self.caps),
            "output": output,
            "threads": self.threads,
            "log_level": self.log_level,
        }
