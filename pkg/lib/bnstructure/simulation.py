"""
Simulation harness: sample, learn, fit and score against a reference network

For every (ratio, replicate) one training sample and one test sample are drawn
and shared by all strategies, so results are paired. Replicate streams come
from (master seed, replicate, ratio index), never from scheduling order.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from .config_manager import SimulationConfig
from .data import nominal_parameter_count
from .errors import BNStructureError
from .graph import structural_hamming_distance
from .io.bif import read_bif
from .io.tables import RESULT_COLUMNS, ResultsTable
from .model import Bn, fit, make_generator, predictive_loglik, random_sparse_bn, sample
from .priors import PriorKind
from .scores.base import ScoreKind
from .search import LearnConfig, hill_climb
from .strategy import StrategyRegistry

logger = logging.getLogger(__name__)

TRAIN_STREAM = 0
TEST_STREAM = 1


@dataclass(frozen=True)
class Strategy:
    index: int
    score: ScoreKind
    prior: PriorKind

    @property
    def label(self) -> str:
        return f"{self.score.token}+{self.prior.token}"


@dataclass(frozen=True)
class ReplicateTask:
    ratio_index: int
    ratio: float
    replicate: int
    n_train: int


def training_size(ratio: float, parameter_count: int) -> int:
    """n = ceil(ratio * p), at least one row"""
    return max(1, math.ceil(ratio * parameter_count - 1e-9))


def load_reference(config: SimulationConfig) -> Tuple[str, Bn]:
    """Reference network and the name used in the results"""
    if config.is_synthetic:
        nodes, arcs, seed = config.synthetic_spec()
        return f"synthetic{nodes}x{arcs}s{seed}", random_sparse_bn(nodes, arcs, seed)
    path = Path(config.reference)
    logger.info(f"Loading reference network {path}")
    return path.stem, read_bif(path)


def parse_strategies(tokens: Sequence[str], registry: StrategyRegistry) -> List[Strategy]:
    strategies = []
    for index, token in enumerate(tokens):
        score, prior = registry.parse_strategy(token)
        strategies.append(Strategy(index, score, prior))
    return strategies


def _base_row(network: str, task: ReplicateTask, strategy: Strategy) -> Dict[str, Any]:
    alpha = strategy.score.alpha_value
    value = strategy.prior.value
    return {
        "network": network,
        "n_over_p": task.ratio,
        "replicate": task.replicate,
        "score": strategy.score.name,
        "prior": strategy.prior.name,
        "alpha": "" if alpha is None else alpha,
        "beta_or_c": "" if value is None else value,
        "error": "",
    }


def run_replicate(
    task: ReplicateTask,
    network: str,
    reference: Bn,
    strategies: Sequence[Strategy],
    config: SimulationConfig,
) -> List[Dict[str, Any]]:
    """
    Learn every strategy on one shared training sample

    Failures are caught per strategy and written to the ``error`` column.
    """
    train = sample(
        reference,
        task.n_train,
        rng=make_generator(config.seed, task.replicate, task.ratio_index, TRAIN_STREAM),
    )
    test = sample(
        reference,
        config.test_set_size,
        rng=make_generator(config.seed, task.replicate, task.ratio_index, TEST_STREAM),
    )
    reference_arcs = reference.dag.arc_count
    learn_config = LearnConfig(max_parents=config.max_parents)

    rows = []
    for strategy in strategies:
        row = _base_row(network, task, strategy)
        started = time.perf_counter()
        try:
            learned, _ = hill_climb(train, strategy.score, strategy.prior, learn_config)
            fitted = fit(learned, train, config.fit_alpha)
            loglik = predictive_loglik(fitted, test)
            row.update(
                {
                    "shd": structural_hamming_distance(
                        reference.dag, learned, dag_level=config.dag_level_shd
                    ),
                    "arcs": learned.arc_count,
                    "arcs_ratio": (
                        learned.arc_count / reference_arcs if reference_arcs else float("nan")
                    ),
                    "loglik": -loglik / config.test_set_size,
                }
            )
        except BNStructureError as e:
            logger.warning(
                f"Replicate {task.replicate} at n/p={task.ratio:g} failed for "
                f"{strategy.label}: {e}"
            )
            row.update({"shd": "", "arcs": "", "arcs_ratio": "", "loglik": "", "error": str(e)})
        except Exception as e:
            logger.exception(
                f"Replicate {task.replicate} at n/p={task.ratio:g} crashed for {strategy.label}"
            )
            error = f"{type(e).__name__}: {e}"
            row.update({"shd": "", "arcs": "", "arcs_ratio": "", "loglik": "", "error": error})
        elapsed = time.perf_counter() - started
        row["seconds"] = round(elapsed, 6) if config.record_timing else 0
        rows.append(row)
    return rows


def run_simulation(config: SimulationConfig, registry: Optional[StrategyRegistry] = None) -> ResultsTable:
    """
    Run the full (ratio, replicate, strategy) grid

    Args:
        config: Validated simulation settings
        registry: Strategy registry used to parse the strategy tokens

    Returns:
        Results sorted by (ratio, replicate, strategy)
    """
    registry = registry or StrategyRegistry()
    strategies = parse_strategies(config.strategies, registry)
    network, reference = load_reference(config)
    p = nominal_parameter_count(reference.variables, reference.dag)
    logger.info(
        f"Simulating on {network}: {reference.node_count} nodes, "
        f"{reference.dag.arc_count} arcs, p={p}"
    )

    tasks = [
        ReplicateTask(ratio_index, ratio, replicate, training_size(ratio, p))
        for ratio_index, ratio in enumerate(config.ratios)
        for replicate in range(1, config.replicates + 1)
    ]
    worker = partial(
        run_replicate,
        network=network,
        reference=reference,
        strategies=strategies,
        config=config,
    )
    if config.threads > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            batches = list(pool.map(worker, tasks))
    else:
        batches = [worker(task) for task in tasks]

    keyed = []
    for task, batch in zip(tasks, batches):
        for strategy, row in zip(strategies, batch):
            keyed.append(((task.ratio_index, task.replicate, strategy.index), row))
    keyed.sort(key=lambda item: item[0])

    table = ResultsTable()
    for _, row in keyed:
        table.add(row)
    failures = sum(1 for _, row in keyed if row["error"])
    if failures:
        logger.warning(f"{failures} of {len(keyed)} runs failed; see the error column")
    logger.info(f"Simulation produced {len(table)} rows")
    return table


def summarize_results(frame: pd.DataFrame) -> pd.DataFrame:
    """
    Mean SHD, arc ratio and log-likelihood per (ratio, strategy)

    Failed rows are excluded from the means and counted separately.
    """
    frame = frame.copy()
    for column in ("shd", "arcs_ratio", "loglik"):
        frame[column] = pd.to_numeric(frame[column], errors="coerce")
    frame["failed"] = frame["error"].astype(str).str.len() > 0
    for column in ("alpha", "beta_or_c"):
        frame[column] = frame[column].astype(str)
    summary = (
        frame.groupby(["network", "n_over_p", "score", "alpha", "prior", "beta_or_c"], sort=True)
        .agg(
            runs=("replicate", "size"),
            failed=("failed", "sum"),
            shd=("shd", "mean"),
            arcs_ratio=("arcs_ratio", "mean"),
            loglik=("loglik", "mean"),
        )
        .reset_index()
    )
    return summary


__all__ = [
    "RESULT_COLUMNS",
    "ReplicateTask",
    "Strategy",
    "load_reference",
    "parse_strategies",
    "run_replicate",
    "run_simulation",
    "summarize_results",
    "training_size",
]
