"""
Exhaustive enumeration of small DAGs and the uniform-prior census built on it
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Tuple

import numpy as np

from .errors import TooLargeError
from .graph import Arc, Dag

logger = logging.getLogger(__name__)

MAX_ENUMERATION_NODES = 5

PairKey = Tuple[Arc, Arc]


def _subsets(items: Tuple[int, ...], nonempty: bool) -> List[Tuple[int, ...]]:
    start = 1 if nonempty else 0
    return [
        combo
        for size in range(start, len(items) + 1)
        for combo in itertools.combinations(items, size)
    ]


def _parent_assignments(nodes: Tuple[int, ...]) -> Iterator[Dict[int, Tuple[int, ...]]]:
    """
    Every DAG on ``nodes`` exactly once, keyed by its unique set of sources

    A DAG with source set S is a DAG on the remaining nodes where each remaining
    node takes any subset of S as extra parents, and the remaining nodes that are
    sources of the sub-DAG must take at least one.
    """
    if not nodes:
        yield {}
        return

    for size in range(len(nodes), 0, -1):
        for sources in itertools.combinations(nodes, size):
            rest = tuple(v for v in nodes if v not in sources)
            for sub in _parent_assignments(rest):
                choices = [_subsets(sources, nonempty=not sub[v]) for v in rest]
                for picks in itertools.product(*choices):
                    assignment = {s: () for s in sources}
                    for v, extra in zip(rest, picks):
                        assignment[v] = sub[v] + extra
                    yield assignment


def _check_size(n: int, limit: int = MAX_ENUMERATION_NODES) -> None:
    if n < 1:
        raise TooLargeError(f"node count must be positive, got {n}")
    if n > limit:
        raise TooLargeError(f"exhaustive enumeration is limited to {limit} nodes, got {n}")


def enumerate_dags(n: int) -> Iterator[Dag]:
    """
    Yield every labelled DAG on ``n`` nodes exactly once

    The empty graph comes first; the order is fixed, so ties broken by
    enumeration order are reproducible.

    Args:
        n: Number of nodes (1 to 5)

    Raises:
        TooLargeError: n outside 1..5
    """
    _check_size(n)
    for assignment in _parent_assignments(tuple(range(n))):
        yield Dag(n, tuple(assignment[v] for v in range(n)))


@dataclass(frozen=True)
class PriorCensus:
    """
    Exact arc-state frequencies under the uniform distribution over DAGs

    Probabilities are keyed by node pairs ``(i, j)`` with ``i < j``: forward is
    ``i -> j``, backward is ``j -> i``. Correlations are between signed arc
    variables (0 when absent). For two pairs sharing a node each arc is +1 when
    it points into the shared node and -1 when it points away, so every incident
    correlation measures the same structural relation whatever the node indices.
    Disjoint pairs use +1 forward and -1 backward.
    """

    n_dags: int
    arc_forward_prob: Dict[Arc, Fraction]
    arc_backward_prob: Dict[Arc, Fraction]
    arc_absent_prob: Dict[Arc, Fraction]
    arc_pair_correlation: Dict[PairKey, float]

    def incident_correlations(self) -> Dict[PairKey, float]:
        return {
            key: value
            for key, value in self.arc_pair_correlation.items()
            if set(key[0]) & set(key[1])
        }

    def disjoint_correlations(self) -> Dict[PairKey, float]:
        return {
            key: value
            for key, value in self.arc_pair_correlation.items()
            if not set(key[0]) & set(key[1])
        }


def _orientation(first: Arc, second: Arc) -> int:
    """
    Sign that re-encodes two incident pairs as +1 for an arc into the shared node

    A pair ``(i, j)`` is stored as +1 for ``i -> j``, which points into the
    shared node only when the shared node is ``j``. Disjoint pairs keep the
    stored encoding.
    """
    shared = set(first) & set(second)
    if not shared:
        return 1
    (node,) = shared
    sign = 1
    for i, j in (first, second):
        if node == i:
            sign = -sign
    return sign


def census_uniform_prior(n: int) -> PriorCensus:
    """
    Tally arc states over every DAG on ``n`` nodes

    Args:
        n: Number of nodes (1 to 5)

    Returns:
        PriorCensus with exact rational probabilities

    Raises:
        TooLargeError: n outside 1..5
    """
    _check_size(n)
    pairs = list(itertools.combinations(range(n), 2))
    rows = []
    for dag in enumerate_dags(n):
        rows.append([
            1 if dag.has_arc(i, j) else (-1 if dag.has_arc(j, i) else 0)
            for i, j in pairs
        ])
    total = len(rows)
    states = np.array(rows, dtype=np.int64).reshape(total, len(pairs))
    logger.debug(f"Census over {total} DAGs on {n} nodes")

    forward: Dict[Arc, Fraction] = {}
    backward: Dict[Arc, Fraction] = {}
    absent: Dict[Arc, Fraction] = {}
    for column, pair in enumerate(pairs):
        values = states[:, column]
        forward[pair] = Fraction(int(np.count_nonzero(values == 1)), total)
        backward[pair] = Fraction(int(np.count_nonzero(values == -1)), total)
        absent[pair] = Fraction(int(np.count_nonzero(values == 0)), total)

    # integer moments keep symmetric covariances exactly zero
    sums = states.sum(axis=0)
    cross = states.T @ states
    scaled_cov = total * cross - np.outer(sums, sums)
    correlation: Dict[PairKey, float] = {}
    for a, b in itertools.combinations(range(len(pairs)), 2):
        denom = float(np.sqrt(float(scaled_cov[a, a]) * float(scaled_cov[b, b])))
        value = float(scaled_cov[a, b]) / denom if denom > 0 else 0.0
        correlation[(pairs[a], pairs[b])] = value * _orientation(pairs[a], pairs[b])

    return PriorCensus(total, forward, backward, absent, correlation)
