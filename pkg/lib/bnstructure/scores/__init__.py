"""
Family scores and their network-level sums

Every score decomposes over families: the network score is the sum of the
local scores of each node given its parents.
"""

import logging
from typing import List

from ..data import Dataset, FamilyCounts, count_family
from ..errors import DimensionMismatchError
from ..graph import Dag
from .base import ScoreKind
from .dirichlet import (
    BDJeffreys,
    BDeu,
    BDs,
    K2,
    bds_equivalent_alpha,
    effective_params,
    local_bd,
    local_bdeu,
    local_bdj,
    local_bds,
    local_k2,
    log_implicit_prior_ratio,
)
from .entropy import empirical_entropy, posterior_entropy_bdeu, posterior_entropy_bds
from .likelihood import BIC, LogLik, local_bic, local_loglik

logger = logging.getLogger(__name__)


def local_score(kind: ScoreKind, counts: FamilyCounts) -> float:
    """Dispatch one family to the given score kind"""
    return kind.local(counts)


def _check_alignment(dag: Dag, data: Dataset) -> None:
    if dag.node_count != data.n_vars:
        raise DimensionMismatchError(
            f"graph has {dag.node_count} nodes but the data has {data.n_vars} columns"
        )


def local_scores(dag: Dag, data: Dataset, kind: ScoreKind) -> List[float]:
    """Local score of every node given its parents in ``dag``"""
    _check_alignment(dag, data)
    return [
        kind.local(count_family(data, child, parents))
        for child, parents in enumerate(dag.parents)
    ]


def network_score(dag: Dag, data: Dataset, kind: ScoreKind) -> float:
    """
    Total log score of a structure

    Args:
        dag: Structure over the dataset's columns
        data: The dataset
        kind: Score to apply to every family

    Returns:
        Sum of local scores (natural log)
    """
    return float(sum(local_scores(dag, data, kind)))


def network_effective_params(dag: Dag, data: Dataset) -> int:
    _check_alignment(dag, data)
    return sum(
        effective_params(count_family(data, child, parents))
        for child, parents in enumerate(dag.parents)
    )


def effective_degrees_of_freedom(g_plus: Dag, g_minus: Dag, data: Dataset) -> int:
    """Difference in effective parameters between two structures"""
    return network_effective_params(g_plus, data) - network_effective_params(
        g_minus, data
    )


__all__ = [
    "BDJeffreys",
    "BDeu",
    "BDs",
    "BIC",
    "K2",
    "LogLik",
    "ScoreKind",
    "bds_equivalent_alpha",
    "effective_degrees_of_freedom",
    "effective_params",
    "empirical_entropy",
    "local_bd",
    "local_bdeu",
    "local_bdj",
    "local_bds",
    "local_bic",
    "local_k2",
    "local_loglik",
    "local_score",
    "local_scores",
    "log_implicit_prior_ratio",
    "network_effective_params",
    "network_score",
    "posterior_entropy_bdeu",
    "posterior_entropy_bds",
]
