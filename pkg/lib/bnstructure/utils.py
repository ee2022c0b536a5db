"""
Utility functions for bnstructure
"""

import math
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .errors import ConfigError


def ensure_directory(path: Path) -> None:
    """
    Ensure a directory exists

    Args:
        path: Path to directory
    """
    path.mkdir(parents=True, exist_ok=True)


def ensure_parent(path: Path) -> Path:
    path = Path(path)
    if path.parent != Path("."):
        ensure_directory(path.parent)
    return path


def read_yaml_file(path: Path) -> Dict[str, Any]:
    """
    Read a YAML file

    Args:
        path: Path to YAML file

    Returns:
        Dictionary of YAML contents

    Raises:
        ConfigError: The file is not valid YAML or not a mapping
    """
    try:
        with Path(path).open() as f:
            data = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: invalid YAML: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at the top level")
    return data


def write_yaml_file(path: Path, data: Dict[str, Any]) -> None:
    """
    Write a YAML file

    Args:
        path: Path to YAML file
        data: Data to write
    """
    with Path(path).open("w") as f:
        yaml.safe_dump(data, f, default_flow_style=False, sort_keys=False)


def format_significant(value: float, digits: int = 4) -> str:
    """Format a number to ``digits`` significant figures"""
    if value == 0 or not math.isfinite(value):
        return str(value)
    return f"{value:.{digits}g}"


def format_error(message: str, details: Optional[str] = None) -> str:
    """
    Format an error message

    Args:
        message: Main error message
        details: Optional detailed information

    Returns:
        Formatted error string
    """
    result = f"❌ Error: {message}"
    if details:
        result += f"\n   Details: {details}"
    return result


def format_warning(message: str) -> str:
    return f"⚠️  Warning: {message}"


def format_success(message: str) -> str:
    return f"✅ {message}"


def format_info(message: str) -> str:
    return f"ℹ️  {message}"
