"""
Version management for bnstructure

The environment variable BNSTRUCTURE_VERSION overrides the build version.
"""

import os
from typing import Optional

# Bumped on release
__build_version__ = "0.3.0"


def _get_version_from_environment() -> Optional[str]:
    """
    Get version from environment variable

    Returns:
        Version from BNSTRUCTURE_VERSION or None
    """
    return os.environ.get("BNSTRUCTURE_VERSION") or None


def get_version() -> str:
    """
    Get version using the priority order environment, then build

    Returns:
        Version string
    """
    return _get_version_from_environment() or __build_version__


__version__ = get_version()
