"""
Score-based structure search: greedy hill climbing and an exhaustive oracle

Moves are enumerated by target node, then source node, then add < delete <
reverse. The best move is taken only when it improves the log posterior by more
than ``improvement_epsilon``; ties keep the earliest move.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from .data import Dataset, count_family
from .enumeration import enumerate_dags
from .errors import (
    DimensionMismatchError,
    CyclicStructureError,
    EmptyDataError,
    IterationLimitError,
    OutOfRangeError,
    TooLargeError,
)
from .graph import ArcMove, Dag, MoveKind, apply_move, creates_cycle, is_acyclic
from .priors import PriorKind, log_graph_prior, log_prior_move_ratio
from .scores.base import ScoreKind

logger = logging.getLogger(__name__)

MAX_EXHAUSTIVE_NODES = 4


@dataclass(frozen=True)
class LearnConfig:
    """Search settings"""

    max_parents: Optional[int] = None
    max_iterations: int = 10000
    improvement_epsilon: float = 1e-10
    start: Optional[Dag] = None
    fail_on_iteration_limit: bool = False

    def validate(self) -> Tuple[bool, Optional[str]]:
        """
        Validate the settings

        Returns:
            Tuple of (valid: bool, error_message: Optional[str])
        """
        if self.max_parents is not None and self.max_parents < 1:
            return False, f"max_parents must be positive, got {self.max_parents}"
        if self.max_iterations < 1:
            return False, f"max_iterations must be positive, got {self.max_iterations}"
        if not self.improvement_epsilon >= 0:
            return False, f"improvement_epsilon must be non-negative, got {self.improvement_epsilon}"
        return True, None


@dataclass(frozen=True)
class TraceStep:
    iteration: int
    move: ArcMove
    delta: float
    log_posterior: float


@dataclass
class SearchTrace:
    """Accepted moves in order, plus how the search ended"""

    initial_log_posterior: float = 0.0
    steps: List[TraceStep] = field(default_factory=list)
    iteration_limit_reached: bool = False
    cache_hits: int = 0
    cache_misses: int = 0

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[TraceStep]:
        return iter(self.steps)

    @property
    def final_log_posterior(self) -> float:
        return self.steps[-1].log_posterior if self.steps else self.initial_log_posterior


class ScoreCache:
    """Local scores keyed by (child, sorted parent set) for one dataset and score"""

    def __init__(self, data: Dataset, kind: ScoreKind):
        self.data = data
        self.kind = kind
        self._scores: Dict[Tuple[int, Tuple[int, ...]], float] = {}
        self.hits = 0
        self.misses = 0

    def local(self, child: int, parents: Tuple[int, ...]) -> float:
        key = (child, tuple(sorted(parents)))
        cached = self._scores.get(key)
        if cached is not None:
            self.hits += 1
            return cached
        self.misses += 1
        value = self.kind.local(count_family(self.data, child, key[1]))
        self._scores[key] = value
        return value

    def network(self, dag: Dag) -> float:
        return float(sum(self.local(child, p) for child, p in enumerate(dag.parents)))

    def __len__(self) -> int:
        return len(self._scores)


def candidate_moves(dag: Dag, max_parents: Optional[int] = None) -> List[ArcMove]:
    """
    Every legal single-arc move in enumeration order

    Args:
        dag: Current graph
        max_parents: Parent limit that moves must respect

    Returns:
        Moves whose preconditions hold and whose result is acyclic
    """
    limit = max_parents if max_parents is not None else dag.node_count
    moves = []
    for target in range(dag.node_count):
        for source in range(dag.node_count):
            if source == target:
                continue
            if dag.has_arc(source, target):
                moves.append(ArcMove(MoveKind.DELETE, source, target))
                reverse = ArcMove(MoveKind.REVERSE, source, target)
                if len(dag.parents[source]) < limit and not creates_cycle(dag, reverse):
                    moves.append(reverse)
            else:
                add = ArcMove(MoveKind.ADD, source, target)
                if len(dag.parents[target]) < limit and not creates_cycle(dag, add):
                    moves.append(add)
    return moves


def _without(parents: Tuple[int, ...], node: int) -> Tuple[int, ...]:
    return tuple(p for p in parents if p != node)


def _cached_delta(dag: Dag, move: ArcMove, cache: ScoreCache) -> float:
    source, target = move.source, move.target
    old_target = dag.parents[target]
    if move.kind is MoveKind.ADD:
        return cache.local(target, old_target + (source,)) - cache.local(target, old_target)
    delta = cache.local(target, _without(old_target, source)) - cache.local(target, old_target)
    if move.kind is MoveKind.REVERSE:
        old_source = dag.parents[source]
        delta += cache.local(source, old_source + (target,)) - cache.local(source, old_source)
    return delta


def delta_score(
    dag: Dag,
    move: ArcMove,
    data: Dataset,
    kind: ScoreKind,
    cache: Optional[ScoreCache] = None,
) -> float:
    """
    Change in network score caused by one move, rescoring affected families only

    Args:
        dag: Current graph
        move: Move valid on ``dag``
        data: The dataset
        kind: Score kind
        cache: Cache built for the same data and kind (a fresh one if omitted)

    Returns:
        score(after) - score(before), natural log
    """
    if cache is None:
        cache = ScoreCache(data, kind)
    elif cache.data is not data or cache.kind != kind:
        raise DimensionMismatchError("score cache was built for another dataset or score")
    return _cached_delta(dag, move, cache)


def _best_move(
    dag: Dag, cache: ScoreCache, prior: PriorKind, config: LearnConfig
) -> Optional[Tuple[ArcMove, float]]:
    best: Optional[Tuple[ArcMove, float]] = None
    threshold = config.improvement_epsilon
    for move in candidate_moves(dag, config.max_parents):
        delta = _cached_delta(dag, move, cache) + log_prior_move_ratio(
            prior, move, dag.node_count
        )
        if delta > threshold and (best is None or delta > best[1]):
            best = (move, delta)
    return best


def _starting_graph(data: Dataset, config: LearnConfig) -> Dag:
    if config.start is None:
        return Dag.empty(data.n_vars)
    start = config.start
    if start.node_count != data.n_vars:
        raise DimensionMismatchError(
            f"start graph has {start.node_count} nodes, data has {data.n_vars} columns"
        )
    if not is_acyclic(start):
        raise CyclicStructureError("start graph is cyclic")
    return start


def hill_climb(
    data: Dataset,
    kind: ScoreKind,
    prior: PriorKind,
    config: Optional[LearnConfig] = None,
) -> Tuple[Dag, SearchTrace]:
    """
    Greedy best-improvement search for the MAP structure

    Args:
        data: Training data (at least one row)
        kind: Score kind
        prior: Graph prior
        config: Search settings

    Returns:
        Tuple of (learned graph, trace)

    Raises:
        EmptyDataError: The dataset has no rows
        IterationLimitError: Only when ``fail_on_iteration_limit`` is set
    """
    config = config or LearnConfig()
    valid, error = config.validate()
    if not valid:
        raise OutOfRangeError(error or "invalid search settings")
    if data.n_rows == 0:
        raise EmptyDataError("cannot learn a structure from an empty dataset")

    logger.info(f"Learning structure with {kind.token}+{prior.token} on {data.n_rows} rows")
    dag = _starting_graph(data, config)
    cache = ScoreCache(data, kind)
    trace = SearchTrace(initial_log_posterior=cache.network(dag) + log_graph_prior(prior, dag))

    iteration = 0
    while True:
        found = _best_move(dag, cache, prior, config)
        if found is None:
            break
        if iteration >= config.max_iterations:
            trace.iteration_limit_reached = True
            break
        iteration += 1
        move, delta = found
        dag = apply_move(dag, move)
        log_posterior = cache.network(dag) + log_graph_prior(prior, dag)
        trace.steps.append(TraceStep(iteration, move, delta, log_posterior))
        logger.debug(f"Iteration {iteration}: {move} delta={delta:.6g}")

    trace.cache_hits, trace.cache_misses = cache.hits, cache.misses
    logger.info(
        f"Search finished after {len(trace)} moves with {dag.arc_count} arcs "
        f"(cache hits {cache.hits}, misses {cache.misses})"
    )
    if trace.iteration_limit_reached:
        message = f"iteration limit {config.max_iterations} reached before convergence"
        logger.warning(message)
        if config.fail_on_iteration_limit:
            raise IterationLimitError(message, dag=dag, trace=trace)
    return dag, trace


def verify_local_optimum(
    dag: Dag,
    data: Dataset,
    kind: ScoreKind,
    prior: PriorKind,
    config: Optional[LearnConfig] = None,
) -> bool:
    """True when no single legal move improves the log posterior"""
    config = config or LearnConfig()
    return _best_move(dag, ScoreCache(data, kind), prior, config) is None


def exhaustive_map(data: Dataset, kind: ScoreKind, prior: PriorKind) -> Dag:
    """
    Global maximum of log score plus log prior over every DAG

    Args:
        data: Dataset with at most four columns
        kind: Score kind
        prior: Graph prior

    Returns:
        The first maximiser in enumeration order

    Raises:
        TooLargeError: More than four columns
    """
    if data.n_vars > MAX_EXHAUSTIVE_NODES:
        raise TooLargeError(
            f"exhaustive search is limited to {MAX_EXHAUSTIVE_NODES} nodes, got {data.n_vars}"
        )
    cache = ScoreCache(data, kind)
    best: Optional[Tuple[Dag, float]] = None
    for dag in enumerate_dags(data.n_vars):
        value = cache.network(dag) + log_graph_prior(prior, dag)
        if best is None or value > best[1]:
            best = (dag, value)
    assert best is not None
    logger.debug(f"Exhaustive optimum {best[0]} at {best[1]:.6g}")
    return best[0]
