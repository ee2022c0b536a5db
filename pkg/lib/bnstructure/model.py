"""
Parameterised Bayesian networks: fitting, ancestral sampling and prediction

Conditional probability tables are dense arrays with one row per parent
configuration. Rows use the mixed-radix index of ``count_family``: parents in
sorted node order, first parent most significant.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .data import Dataset, Variable, config_count, count_family
from .errors import (
    ConfigOverflowError,
    DimensionMismatchError,
    OutOfRangeError,
    SchemaMismatchError,
    TooLargeError,
)
from .graph import Dag

logger = logging.getLogger(__name__)

MAX_DENSE_ROWS = 10**7
MAX_JOINT_STATES = 2**20
ROW_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Cpt:
    """Conditional distribution of one child: ``table[j, k] = P(child = k | config j)``"""

    child_cardinality: int
    parent_cardinalities: Tuple[int, ...]
    table: np.ndarray

    def __post_init__(self):
        rows = math.prod(self.parent_cardinalities)
        table = np.array(self.table, dtype=float, copy=True)
        if table.shape != (rows, self.child_cardinality):
            raise DimensionMismatchError(
                f"table shape {table.shape}, expected ({rows}, {self.child_cardinality})"
            )
        if np.any(table < 0) or np.any(table > 1) or not np.all(np.isfinite(table)):
            raise OutOfRangeError("probabilities must lie in [0, 1]")
        sums = table.sum(axis=1)
        if np.any(np.abs(sums - 1) > ROW_TOLERANCE):
            worst = int(np.argmax(np.abs(sums - 1)))
            raise OutOfRangeError(f"row {worst} sums to {sums[worst]:.12g}, not 1")
        table = table / sums[:, np.newaxis]
        table.setflags(write=False)
        object.__setattr__(self, "parent_cardinalities", tuple(self.parent_cardinalities))
        object.__setattr__(self, "table", table)

    @classmethod
    def uniform(cls, child_cardinality: int, parent_cardinalities: Sequence[int]) -> "Cpt":
        rows = math.prod(parent_cardinalities)
        return cls(
            child_cardinality,
            tuple(parent_cardinalities),
            np.full((rows, child_cardinality), 1.0 / child_cardinality),
        )

    @property
    def config_count(self) -> int:
        return int(self.table.shape[0])


@dataclass(frozen=True, eq=False)
class Bn:
    """A structure with one CPT per node"""

    dag: Dag
    variables: Tuple[Variable, ...]
    cpts: Tuple[Cpt, ...]

    def __post_init__(self):
        variables = tuple(self.variables)
        cpts = tuple(self.cpts)
        if not len(variables) == len(cpts) == self.dag.node_count:
            raise DimensionMismatchError(
                f"{len(variables)} variables and {len(cpts)} tables for "
                f"{self.dag.node_count} nodes"
            )
        for child, (cpt, parents) in enumerate(zip(cpts, self.dag.parents)):
            expected = tuple(variables[p].cardinality for p in parents)
            if (
                cpt.child_cardinality != variables[child].cardinality
                or cpt.parent_cardinalities != expected
            ):
                raise DimensionMismatchError(
                    f"table of {variables[child].name} does not match its family"
                )
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "cpts", cpts)

    @property
    def node_count(self) -> int:
        return self.dag.node_count

    @property
    def names(self) -> List[str]:
        return [v.name for v in self.variables]

    @cached_property
    def order(self) -> List[int]:
        return self.dag.topological_order()


def _config_indices(rows: np.ndarray, parents: Sequence[int], cards: Sequence[int]) -> np.ndarray:
    index = np.zeros(rows.shape[0], dtype=np.int64)
    for parent in parents:
        index = index * cards[parent] + rows[:, parent]
    return index


def fit(dag: Dag, data: Dataset, alpha: float = 1.0, mode: str = "bdeu") -> Bn:
    """
    Dirichlet posterior estimates of every CPT

    Args:
        dag: Structure over the dataset's columns
        data: Training data
        alpha: Imaginary sample size
        mode: ``bdeu`` spreads alpha over all q parent configurations,
            ``bds`` over the observed ones only

    Returns:
        The fitted network; unobserved configurations get uniform rows
    """
    if not alpha > 0:
        raise OutOfRangeError(f"alpha must be positive, got {alpha}")
    if mode not in ("bdeu", "bds"):
        raise OutOfRangeError(f"unknown fitting mode {mode!r}")
    if dag.node_count != data.n_vars:
        raise DimensionMismatchError(
            f"graph has {dag.node_count} nodes but the data has {data.n_vars} columns"
        )

    cpts = []
    for child, parents in enumerate(dag.parents):
        counts = count_family(data, child, parents)
        q = counts.nominal_config_count
        if q > MAX_DENSE_ROWS:
            raise ConfigOverflowError(
                f"{data.names[child]} has {q} parent configurations, too many for a dense table"
            )
        r = counts.child_cardinality
        table = np.full((q, r), 1.0 / r)
        if counts.configs:
            spread = q if mode == "bdeu" else counts.observed_config_count
            cell = alpha / (r * spread)
            observed = np.asarray(counts.configs, dtype=np.int64)
            table[observed] = (cell + counts.table) / (r * cell + counts.n_ij[:, np.newaxis])
        cpts.append(Cpt(r, counts.parent_cardinalities, table))
    logger.debug(f"Fitted {len(cpts)} tables with alpha={alpha:g} ({mode})")
    return Bn(dag, data.variables, tuple(cpts))


def make_generator(seed: int, *stream: int) -> np.random.Generator:
    """
    Counter-based generator for an independent, reproducible stream

    Args:
        seed: Master seed (0 to 2**64 - 1)
        stream: Extra non-negative integers identifying the stream, e.g. a
            replicate number

    Returns:
        numpy Generator backed by Philox
    """
    for value in (seed,) + stream:
        if not 0 <= int(value) < 2**64:
            raise OutOfRangeError(f"seed component {value} outside 0..2**64-1")
    entropy = [int(seed)] + [int(s) for s in stream]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def sample(
    bn: Bn,
    n: int,
    seed: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> Dataset:
    """
    Ancestral sampling in topological order

    All uniforms are drawn at once as an ``n x N`` matrix in row-major order,
    then each node picks the level whose cumulative probability first exceeds
    its uniform.

    Args:
        bn: Network to sample from
        n: Number of rows
        seed: Master seed used when ``rng`` is not given
        rng: Generator to consume

    Returns:
        Dataset over the network's variables
    """
    if n < 0:
        raise OutOfRangeError(f"sample size must be non-negative, got {n}")
    if rng is None:
        rng = make_generator(0 if seed is None else seed)
    uniforms = rng.random((n, bn.node_count))
    rows = np.zeros((n, bn.node_count), dtype=np.int64)
    cards = [v.cardinality for v in bn.variables]
    for node in bn.order:
        cpt = bn.cpts[node]
        cdf = np.cumsum(cpt.table, axis=1)
        cdf[:, -1] = 1.0
        configs = _config_indices(rows, bn.dag.parents[node], cards)
        levels = (cdf[configs] <= uniforms[:, node][:, np.newaxis]).sum(axis=1)
        rows[:, node] = np.minimum(levels, cards[node] - 1)
    return Dataset(bn.variables, rows)


def _log_probabilities(bn: Bn, rows: np.ndarray) -> np.ndarray:
    cards = [v.cardinality for v in bn.variables]
    total = np.zeros(rows.shape[0])
    with np.errstate(divide="ignore"):
        for node, cpt in enumerate(bn.cpts):
            configs = _config_indices(rows, bn.dag.parents[node], cards)
            total += np.log(cpt.table[configs, rows[:, node]])
    return total


def predictive_loglik(bn: Bn, test: Dataset) -> float:
    """
    Log-likelihood of a test set under the network

    Raises:
        SchemaMismatchError: Variables or levels differ from the network's
    """
    if tuple(test.variables) != bn.variables:
        raise SchemaMismatchError(
            "test data variables or levels do not match the network "
            f"({test.names} vs {bn.names})"
        )
    return float(_log_probabilities(bn, test.rows).sum())


def expected_loglik(bn: Bn) -> float:
    """Exact expected per-row log-likelihood (minus the joint entropy)"""
    cards = [v.cardinality for v in bn.variables]
    states = config_count(cards)
    if states > MAX_JOINT_STATES:
        raise TooLargeError(f"{states} joint states are too many to enumerate")
    rows = np.indices(cards).reshape(len(cards), -1).T
    logp = _log_probabilities(bn, rows)
    probabilities = np.exp(logp)
    return float(np.sum(np.where(probabilities > 0, probabilities * logp, 0.0)))


def random_sparse_bn(
    n_nodes: int,
    n_arcs: int,
    seed: int = 0,
    cardinality: int = 2,
    concentration: float = 0.5,
) -> Bn:
    """
    Deterministic synthetic reference network

    A random node order is drawn, ``n_arcs`` forward pairs are picked without
    replacement, and every CPT row is a Dirichlet draw floored away from zero.

    Args:
        n_nodes: Number of variables
        n_arcs: Number of arcs
        seed: Generator seed
        cardinality: Levels per variable
        concentration: Dirichlet parameter of each row (small means strong effects)

    Returns:
        The network, with variables ``V1..VN`` and levels ``s0..``
    """
    max_arcs = n_nodes * (n_nodes - 1) // 2
    if n_nodes < 1 or not 0 <= n_arcs <= max_arcs:
        raise OutOfRangeError(f"cannot place {n_arcs} arcs on {n_nodes} nodes")
    if cardinality < 2:
        raise OutOfRangeError(f"cardinality must be at least 2, got {cardinality}")
    rng = make_generator(seed, 0)
    order = rng.permutation(n_nodes)
    pairs = [(int(order[i]), int(order[j])) for i in range(n_nodes) for j in range(i + 1, n_nodes)]
    chosen = rng.choice(len(pairs), size=n_arcs, replace=False) if n_arcs else []
    dag = Dag.from_arcs(n_nodes, [pairs[int(c)] for c in chosen])

    levels = tuple(f"s{k}" for k in range(cardinality))
    variables = tuple(Variable(f"V{i + 1}", levels) for i in range(n_nodes))
    cpts = []
    for parents in dag.parents:
        rows = cardinality ** len(parents)
        table = rng.dirichlet(np.full(cardinality, concentration), size=rows)
        table = np.maximum(table, 0.02)
        cpts.append(Cpt(cardinality, (cardinality,) * len(parents), table / table.sum(axis=1, keepdims=True)))
    logger.info(f"Built synthetic network with {n_nodes} nodes and {dag.arc_count} arcs")
    return Bn(dag, variables, tuple(cpts))
