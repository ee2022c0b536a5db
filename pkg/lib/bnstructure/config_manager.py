"""
Configuration Manager - loads and validates simulation settings
"""

import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple

from .errors import ConfigError
from .utils import read_yaml_file, write_yaml_file

logger = logging.getLogger(__name__)

SYNTHETIC_PREFIX = "synthetic:"


@dataclass
class SimulationConfig:
    """Settings of one simulation run"""

    reference: str = ""
    ratios: List[float] = field(default_factory=lambda: [0.1, 0.2, 0.5])
    replicates: int = 20
    strategies: List[str] = field(default_factory=lambda: ["bdeu:1+u", "bds:1+mu:0.5"])
    test_set_size: int = 10000
    seed: int = 0
    threads: int = 1
    max_parents: Optional[int] = None
    record_timing: bool = True
    dag_level_shd: bool = False
    fit_alpha: float = 1.0

    def validate(self) -> Tuple[bool, Optional[str]]:
        """
        Validate the settings

        Returns:
            Tuple of (valid: bool, error_message: Optional[str])
        """
        if not self.reference:
            return False, "reference network is required"
        if not self.ratios or any(not r > 0 for r in self.ratios):
            return False, f"ratios must be a non-empty list of positive numbers, got {self.ratios}"
        if self.replicates < 1:
            return False, f"replicates must be at least 1, got {self.replicates}"
        if not self.strategies:
            return False, "at least one strategy is required"
        if self.test_set_size < 1:
            return False, f"test_set_size must be positive, got {self.test_set_size}"
        if not 0 <= self.seed < 2**64:
            return False, f"seed must lie in 0..2**64-1, got {self.seed}"
        if self.threads < 1:
            return False, f"threads must be positive, got {self.threads}"
        if self.max_parents is not None and self.max_parents < 1:
            return False, f"max_parents must be positive, got {self.max_parents}"
        if not self.fit_alpha > 0:
            return False, f"fit_alpha must be positive, got {self.fit_alpha}"
        return True, None

    @property
    def is_synthetic(self) -> bool:
        return self.reference.startswith(SYNTHETIC_PREFIX)

    def synthetic_spec(self) -> Tuple[int, int, int]:
        """Parse ``synthetic:N:ARCS[:SEED]`` into (nodes, arcs, seed)"""
        parts = self.reference[len(SYNTHETIC_PREFIX):].split(":")
        try:
            if len(parts) not in (2, 3):
                raise ValueError
            nodes, arcs = int(parts[0]), int(parts[1])
            seed = int(parts[2]) if len(parts) == 3 else 0
        except ValueError:
            raise ConfigError(
                f"reference {self.reference!r} must look like synthetic:N:ARCS[:SEED]"
            ) from None
        return nodes, arcs, seed


_CONVERTERS = {
    "reference": str,
    "ratios": lambda v: [float(x) for x in (v if isinstance(v, list) else [v])],
    "replicates": int,
    "strategies": lambda v: [str(x) for x in (v if isinstance(v, list) else [v])],
    "test_set_size": int,
    "seed": int,
    "threads": int,
    "max_parents": lambda v: None if v is None else int(v),
    "record_timing": bool,
    "dag_level_shd": bool,
    "fit_alpha": float,
}


class ConfigManager:
    """Merges a YAML file with command-line overrides into a SimulationConfig"""

    def __init__(self, config_path: Optional[Path] = None):
        """
        Initialize configuration manager

        Args:
            config_path: YAML file with simulation settings, if any
        """
        self.config_path = Path(config_path) if config_path else None

    def load_file(self) -> Dict[str, Any]:
        if self.config_path is None:
            return {}
        logger.info(f"Loading simulation config: {self.config_path}")
        data = read_yaml_file(self.config_path)
        unknown = sorted(set(data) - set(_CONVERTERS))
        if unknown:
            raise ConfigError(f"{self.config_path}: unknown keys {unknown}")
        return data

    def build(self, overrides: Optional[Mapping[str, Any]] = None) -> SimulationConfig:
        """
        Combine file values and overrides (None values are ignored)

        Args:
            overrides: Values from command-line flags

        Returns:
            A validated SimulationConfig

        Raises:
            ConfigError: Bad types, unknown keys or invalid values
        """
        merged = dict(self.load_file())
        merged.update({k: v for k, v in (overrides or {}).items() if v is not None})

        values: Dict[str, Any] = {}
        for key, raw in merged.items():
            if key not in _CONVERTERS:
                raise ConfigError(f"unknown setting {key!r}")
            try:
                values[key] = _CONVERTERS[key](raw)
            except (TypeError, ValueError):
                raise ConfigError(f"setting {key!r} has an invalid value {raw!r}") from None

        config = SimulationConfig(**values)
        if (
            config.reference
            and not config.is_synthetic
            and self.config_path is not None
            and not Path(config.reference).is_absolute()
            and (overrides or {}).get("reference") is None
        ):
            config.reference = str(self.config_path.parent / config.reference)

        valid, error = config.validate()
        if not valid:
            raise ConfigError(error or "invalid simulation config")
        if config.is_synthetic:
            config.synthetic_spec()
        return config

    @staticmethod
    def save(config: SimulationConfig, path: Path) -> None:
        write_yaml_file(Path(path), asdict(config))
        logger.info(f"Saved effective config to {path}")
