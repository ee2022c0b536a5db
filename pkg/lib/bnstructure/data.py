"""
Categorical datasets and family contingency counts

Cardinalities always come from the declared level sets, so a level that never
occurs in the data still counts towards r_i and q_i.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    ConfigOverflowError,
    DimensionMismatchError,
    IndexOutOfRangeError,
    MissingCellError,
    SchemaMismatchError,
    UnknownLevelError,
)
from .graph import Dag

logger = logging.getLogger(__name__)

MAX_CONFIG_COUNT = 2**64 - 1


@dataclass(frozen=True)
class Variable:
    """A categorical variable with an ordered set of level labels"""

    name: str
    levels: Tuple[str, ...]

    def __post_init__(self):
        levels = tuple(str(level) for level in self.levels)
        if not self.name:
            raise SchemaMismatchError("variable name must not be empty")
        if not levels:
            raise SchemaMismatchError(f"variable {self.name} declares no levels")
        if len(set(levels)) != len(levels):
            raise SchemaMismatchError(f"variable {self.name} has duplicate levels")
        object.__setattr__(self, "levels", levels)

    @property
    def cardinality(self) -> int:
        return len(self.levels)

    def index_of(self, label: str) -> int:
        try:
            return self.levels.index(label)
        except ValueError:
            raise UnknownLevelError(f"{label!r} is not a level of {self.name}") from None


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Complete categorical data: one row per record, one column per variable

    ``rows`` holds level indices and is stored read-only.
    """

    variables: Tuple[Variable, ...]
    rows: np.ndarray
    warnings: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        variables = tuple(self.variables)
        rows = np.array(self.rows, dtype=np.int64, copy=True)
        if rows.size == 0:
            rows = rows.reshape(0, len(variables))
        if rows.ndim != 2 or rows.shape[1] != len(variables):
            raise DimensionMismatchError(
                f"rows have shape {rows.shape}, expected (n, {len(variables)})"
            )
        names = [v.name for v in variables]
        if len(set(names)) != len(names):
            raise SchemaMismatchError(f"duplicate variable names in {names}")
        for column, variable in enumerate(variables):
            values = rows[:, column]
            bad = np.flatnonzero((values < 0) | (values >= variable.cardinality))
            if bad.size:
                raise UnknownLevelError(
                    f"row {int(bad[0]) + 1}, column {variable.name}: "
                    f"index {int(values[bad[0]])} outside {variable.cardinality} levels"
                )
        rows.setflags(write=False)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "warnings", tuple(self.warnings))

    @classmethod
    def from_labels(
        cls,
        names: Sequence[str],
        records: Iterable[Sequence[str]],
        levels: Optional[Mapping[str, Sequence[str]]] = None,
    ) -> "Dataset":
        """
        Build a dataset from string labels

        Args:
            names: Variable names, one per column
            records: Rows of labels
            levels: Declared levels per variable; when omitted, levels are the
                sorted distinct observed labels and a warning is attached

        Returns:
            The dataset

        Raises:
            MissingCellError: A cell is empty
            UnknownLevelError: A label is not among the declared levels
        """
        names = list(names)
        table = [list(record) for record in records]
        for row_number, record in enumerate(table, start=1):
            if len(record) != len(names):
                raise DimensionMismatchError(
                    f"row {row_number} has {len(record)} cells, expected {len(names)}"
                )
            for column, cell in enumerate(record):
                if cell is None or str(cell) == "":
                    raise MissingCellError(
                        f"row {row_number}, column {names[column]}: missing value"
                    )

        warnings: List[str] = []
        variables = []
        for column, name in enumerate(names):
            if levels is not None:
                if name not in levels:
                    raise SchemaMismatchError(f"no levels declared for {name}")
                declared = tuple(str(lvl) for lvl in levels[name])
            else:
                declared = tuple(sorted({str(record[column]) for record in table}))
                if not declared:
                    raise SchemaMismatchError(
                        f"cannot infer levels of {name} from an empty dataset"
                    )
                warnings.append(
                    f"levels of {name} derived from data (r={len(declared)}); "
                    f"this shapes every prior that depends on r"
                )
            variables.append(Variable(name, declared))

        codes = np.zeros((len(table), len(names)), dtype=np.int64)
        for column, variable in enumerate(variables):
            lookup = {label: i for i, label in enumerate(variable.levels)}
            for row_number, record in enumerate(table):
                label = str(record[column])
                if label not in lookup:
                    raise UnknownLevelError(
                        f"row {row_number + 1}, column {variable.name}: "
                        f"unknown level {label!r}"
                    )
                codes[row_number, column] = lookup[label]

        for message in warnings:
            logger.warning(message)
        return cls(tuple(variables), codes, tuple(warnings))

    @property
    def n_rows(self) -> int:
        return int(self.rows.shape[0])

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def names(self) -> List[str]:
        return [v.name for v in self.variables]

    @property
    def cardinalities(self) -> List[int]:
        return [v.cardinality for v in self.variables]

    def index_of(self, name: str) -> int:
        for index, variable in enumerate(self.variables):
            if variable.name == name:
                return index
        raise SchemaMismatchError(f"unknown variable {name!r}")

    def labels(self) -> List[List[str]]:
        """Rows converted back to level labels"""
        return [
            [self.variables[c].levels[int(code)] for c, code in enumerate(row)]
            for row in self.rows
        ]

    def select(self, columns: Sequence[str]) -> "Dataset":
        """Dataset restricted to the named columns, in the given order"""
        indices = [self.index_of(name) for name in columns]
        return Dataset(
            tuple(self.variables[i] for i in indices),
            self.rows[:, indices],
            self.warnings,
        )

    def head(self, n: int) -> "Dataset":
        return Dataset(self.variables, self.rows[:n], self.warnings)


def merge_datasets(a: Dataset, b: Dataset) -> Dataset:
    """Concatenate the rows of two datasets over identical variables"""
    if a.variables != b.variables:
        raise SchemaMismatchError("cannot merge datasets with different variables")
    return Dataset(a.variables, np.vstack([a.rows, b.rows]), a.warnings + b.warnings)


@dataclass(frozen=True, eq=False)
class FamilyCounts:
    """
    Sparse counts n_ijk of one child given one parent set

    ``configs`` lists the observed parent-configuration indices in increasing
    order and ``table`` holds one row of child-level counts per observed config.
    """

    child_cardinality: int
    parent_cardinalities: Tuple[int, ...]
    nominal_config_count: int
    configs: Tuple[int, ...]
    table: np.ndarray

    @property
    def observed(self) -> Dict[int, np.ndarray]:
        return {config: self.table[row] for row, config in enumerate(self.configs)}

    @property
    def n_ij(self) -> np.ndarray:
        return self.table.sum(axis=1)

    @property
    def observed_config_count(self) -> int:
        """q-tilde: parent configurations that occur in the data"""
        return len(self.configs)

    @property
    def positive_cells(self) -> np.ndarray:
        """r-tilde per observed configuration"""
        return np.count_nonzero(self.table, axis=1)

    @property
    def total(self) -> int:
        return int(self.table.sum())


def config_count(cardinalities: Iterable[int]) -> int:
    """Product of cardinalities as an exact integer, checked against 64 bits"""
    count = math.prod(int(c) for c in cardinalities)
    if count > MAX_CONFIG_COUNT:
        raise ConfigOverflowError(
            f"{count} parent configurations exceed the 64-bit index range"
        )
    return count


def config_index(levels: Sequence[int], cardinalities: Sequence[int]) -> int:
    """Mixed-radix index of one parent configuration, first parent most significant"""
    index = 0
    for level, card in zip(levels, cardinalities):
        index = index * card + int(level)
    return index


def count_family(data: Dataset, child: int, parents: Iterable[int]) -> FamilyCounts:
    """
    Count child levels per observed parent configuration

    Args:
        data: The dataset
        child: Column index of the child
        parents: Column indices of the parents (any order)

    Returns:
        FamilyCounts keyed by mixed-radix configuration index over the sorted
        parents

    Raises:
        IndexOutOfRangeError: A node index is not a column
        ConfigOverflowError: Too many nominal parent configurations
    """
    parent_list = tuple(sorted(set(parents)))
    for node in (child,) + parent_list:
        if not 0 <= node < data.n_vars:
            raise IndexOutOfRangeError(f"node {node} is not a column of the dataset")
    if child in parent_list:
        raise IndexOutOfRangeError(f"node {child} cannot be its own parent")

    cards = data.cardinalities
    r = cards[child]
    parent_cards = tuple(cards[p] for p in parent_list)
    q = config_count(parent_cards)

    index = np.zeros(data.n_rows, dtype=np.uint64)
    for parent, card in zip(parent_list, parent_cards):
        index = index * np.uint64(card) + data.rows[:, parent].astype(np.uint64)

    configs, inverse = np.unique(index, return_inverse=True)
    table = np.zeros((configs.size, r), dtype=np.int64)
    np.add.at(table, (inverse.ravel(), data.rows[:, child]), 1)
    table.setflags(write=False)
    return FamilyCounts(r, parent_cards, q, tuple(int(c) for c in configs), table)


def nominal_parameter_count(variables: Sequence[Variable], dag: Dag) -> int:
    """
    Free parameters of a network: sum of (r_i - 1) * q_i

    Args:
        variables: One variable per node
        dag: Network structure

    Returns:
        Parameter count p
    """
    if len(variables) != dag.node_count:
        raise DimensionMismatchError(
            f"{len(variables)} variables for a graph on {dag.node_count} nodes"
        )
    total = 0
    for child, parent_set in enumerate(dag.parents):
        q = config_count(variables[p].cardinality for p in parent_set)
        total += (variables[child].cardinality - 1) * q
    return total
