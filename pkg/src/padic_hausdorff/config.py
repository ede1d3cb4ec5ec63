"""
Configuration Management
Centralized tolerances, windows and caps for the p-adic lab.
"""

import os
import json
import logging
from pathlib import Path
from typing import Dict, Any, Optional, Tuple, Union
from dataclasses import dataclass, field, asdict
import yaml

from .utils.error_handling import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass
class NumericsConfig:
    """Log-domain arithmetic settings"""
    cancellation_tolerance: float = 1e-13
    negligible_bits: int = 60  # explicit tails stop below 2^-60 of the running sum
    max_tail_terms: int = 100_000

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class WindowConfig:
    """Default index windows for suprema and finite profiles"""
    sup_window: Tuple[int, int] = (-40, 40)
    finite_window: Tuple[int, int] = (-30, 30)
    max_abs_index: int = 200

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sup_window": list(self.sup_window),
            "finite_window": list(self.finite_window),
            "max_abs_index": self.max_abs_index,
        }


@dataclass
class GeometryConfig:
    """Unit-sphere discretization settings"""
    coset_cap: int = 1_000_000

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class VerificationConfig:
    """Theorem verification settings"""
    identity_tolerance: float = 1e-10
    homogeneity_tolerance: float = 1e-12
    draws: int = 200
    stability_factor: float = 10.0
    max_window_length: int = 21
    max_angular_level: int = 2
    seed: int = 0
    parallelism: int = 1

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class LabConfig:
    """Main lab configuration"""
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    windows: WindowConfig = field(default_factory=WindowConfig)
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    verification: VerificationConfig = field(default_factory=VerificationConfig)

    log_level: str = "WARNING"
    log_format: str = "text"

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            "numerics": self.numerics.to_dict(),
            "windows": self.windows.to_dict(),
            "geometry": self.geometry.to_dict(),
            "verification": self.verification.to_dict(),
            "log_level": self.log_level,
            "log_format": self.log_format,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'LabConfig':
        """Create from dictionary"""
        config = cls()

        if "numerics" in data:
            config.numerics = NumericsConfig(**data["numerics"])

        if "windows" in data:
            windows_data = dict(data["windows"])
            for key in ("sup_window", "finite_window"):
                if key in windows_data:
                    windows_data[key] = tuple(int(v) for v in windows_data[key])
            config.windows = WindowConfig(**windows_data)

        if "geometry" in data:
            config.geometry = GeometryConfig(**data["geometry"])

        if "verification" in data:
            config.verification = VerificationConfig(**data["verification"])

        for key in ("log_level", "log_format"):
            if key in data:
                setattr(config, key, data[key])

        return config


class ConfigManager:
    """Manages configuration loading and access"""

    _instance: Optional['ConfigManager'] = None
    _config: Optional[LabConfig] = None

    def __new__(cls) -> 'ConfigManager':
        """Singleton pattern"""
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        """Initialize config manager"""
        if self._config is None:
            self._config = LabConfig()
            self._config_file: Optional[Path] = None
            self._env_prefix = "PADIC_LAB_"

    def load(
        self,
        config_file: Optional[Union[str, Path]] = None,
        use_env: bool = True
    ) -> LabConfig:
        """
        Load configuration from file and environment.

        Args:
            config_file: Configuration file path (.json, .yaml or .yml)
            use_env: Whether to apply PADIC_LAB_* environment overrides

        Returns:
            Loaded configuration
        """
        self._config = LabConfig()
        self._config_file = None

        if config_file:
            self._load_from_file(config_file)
        else:
            self._load_from_default_locations()

        if use_env:
            self._load_from_env()

        logger.info(f"Configuration loaded from {self._config_file or 'defaults'}")
        return self._config

    def _load_from_file(self, config_file: Union[str, Path]) -> None:
        """Load configuration from file"""
        config_file = Path(config_file)

        if not config_file.exists():
            logger.warning(f"Config file not found: {config_file}")
            return

        try:
            with open(config_file, "r") as f:
                if config_file.suffix == ".json":
                    data = json.load(f)
                elif config_file.suffix in [".yaml", ".yml"]:
                    data = yaml.safe_load(f)
                else:
                    logger.warning(f"Unknown config file format: {config_file.suffix}")
                    return

            self._config = LabConfig.from_dict(data or {})
            self._config_file = config_file
            logger.info(f"Loaded configuration from {config_file}")

        except (OSError, ValueError, TypeError, yaml.YAMLError) as e:
            logger.error(f"Failed to load config from {config_file}: {str(e)}")
            raise ConfigurationError(
                f"cannot load lab configuration {config_file}: {e}",
                details={"path": str(config_file)},
            )

    def _load_from_default_locations(self) -> None:
        """Try loading from default config locations"""
        default_locations = [
            Path.home() / ".padic_lab" / "config.yaml",
            Path.home() / ".padic_lab" / "config.json",
            Path.cwd() / "padic_lab.yaml",
            Path.cwd() / "padic_lab.json",
        ]

        for location in default_locations:
            if location.exists():
                self._load_from_file(location)
                break

    def _load_from_env(self) -> None:
        """Load configuration from environment variables"""
        env = lambda name: os.getenv(f"{self._env_prefix}{name}")

        if env("LOG_LEVEL"):
            self._config.log_level = env("LOG_LEVEL").upper()

        if env("LOG_FORMAT"):
            self._config.log_format = env("LOG_FORMAT")

        if env("COSET_CAP"):
            self._config.geometry.coset_cap = int(env("COSET_CAP"))

        if env("MAX_TAIL_TERMS"):
            self._config.numerics.max_tail_terms = int(env("MAX_TAIL_TERMS"))

        if env("SEED"):
            self._config.verification.seed = int(env("SEED"))

        if env("PARALLELISM"):
            self._config.verification.parallelism = int(env("PARALLELISM"))

    def save(
        self,
        config_file: Union[str, Path],
        format: str = "yaml"
    ) -> bool:
        """
        Save configuration to file.

        Args:
            config_file: Output file path
            format: Output format (json or yaml)

        Returns:
            True if successful
        """
        config_file = Path(config_file)
        config_file.parent.mkdir(parents=True, exist_ok=True)

        try:
            data = self.get().to_dict()

            with open(config_file, "w") as f:
                if format == "json":
                    json.dump(data, f, indent=2)
                elif format == "yaml":
                    yaml.safe_dump(data, f, default_flow_style=False)
                else:
                    logger.error(f"Unknown format: {format}")
                    return False

            logger.info(f"Configuration saved to {config_file}")
            return True

        except OSError as e:
            logger.error(f"Failed to save config: {str(e)}")
            return False

    def get(self) -> LabConfig:
        """Get current configuration"""
        if self._config is None:
            self.load()
        return self._config

    def update(self, section: str, **kwargs) -> None:
        """
        Update configuration section.

        Args:
            section: Configuration section name
            **kwargs: Configuration values
        """
        config = self.get()

        if hasattr(config, section):
            config_section = getattr(config, section)
            for key, value in kwargs.items():
                if hasattr(config_section, key):
                    setattr(config_section, key, value)
                else:
                    logger.warning(f"Unknown config key: {section}.{key}")
        else:
            logger.warning(f"Unknown config section: {section}")

    def reset(self) -> None:
        """Reset to default configuration"""
        self._config = LabConfig()
        self._config_file = None


def get_config() -> LabConfig:
    """Get the active lab configuration"""
    return ConfigManager().get()


def load_config(
    config_file: Optional[Union[str, Path]] = None,
    use_env: bool = True
) -> LabConfig:
    """Load configuration from a file and the environment"""
    return ConfigManager().load(config_file, use_env)
