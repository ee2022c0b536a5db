"""
Pytest configuration and fixtures for bnstructure tests
"""

import sys
import tempfile
from pathlib import Path
from typing import Generator

import pytest

# Add lib directory to path for testing
LIB_DIR = Path(__file__).parent.parent.parent / "lib"
sys.path.insert(0, str(LIB_DIR))
sys.path.insert(0, str(Path(__file__).parent))

from bnstructure.core import BNStructureCore
from bnstructure.data import Dataset
from bnstructure.strategy import StrategyRegistry

from fixtures import (
    CONSTANT_Y_COUNTS,
    CONSTANT_Y_NAMES,
    SPARSE_AND_COUNTS,
    SPARSE_AND_NAMES,
    XOR_AND_COUNTS,
    XOR_AND_NAMES,
    binary_levels,
    expand_counts,
)

REPO_ROOT = Path(__file__).parent.parent.parent
NETWORKS_DIR = REPO_ROOT / "data" / "networks"


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for testing"""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def registry() -> StrategyRegistry:
    return StrategyRegistry()


@pytest.fixture
def core(registry: StrategyRegistry) -> BNStructureCore:
    return BNStructureCore(registry)


@pytest.fixture
def sparse_and_data() -> Dataset:
    """Twelve rows, Y = Z and W, X weakly tied to (Z, W)"""
    return Dataset.from_labels(
        SPARSE_AND_NAMES, expand_counts(SPARSE_AND_COUNTS), binary_levels(SPARSE_AND_NAMES)
    )


@pytest.fixture
def xor_and_data() -> Dataset:
    """Twelve rows, X = Z xor W, Y = Z and W"""
    return Dataset.from_labels(
        XOR_AND_NAMES, expand_counts(XOR_AND_COUNTS), binary_levels(XOR_AND_NAMES)
    )


@pytest.fixture
def constant_y_data() -> Dataset:
    """Seven rows over X, Y where Y is always 1"""
    return Dataset.from_labels(
        CONSTANT_Y_NAMES, expand_counts(CONSTANT_Y_COUNTS), binary_levels(CONSTANT_Y_NAMES)
    )


@pytest.fixture
def sparse10_path() -> Path:
    return NETWORKS_DIR / "sparse10.bif"
