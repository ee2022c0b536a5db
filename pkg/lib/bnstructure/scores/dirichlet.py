"""
Bayesian Dirichlet marginal likelihoods: BD, BDeu, BDs, K2 and BD with Jeffreys' prior

All values are natural logs computed with log-gamma. Parent configurations that
never occur in the data contribute a factor of one and are skipped.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, ClassVar, Dict

import numpy as np
from scipy.special import gammaln

from ..data import FamilyCounts
from ..errors import InvalidPriorError, OutOfRangeError
from .base import ScoreKind

logger = logging.getLogger(__name__)


def check_alpha(alpha: float) -> None:
    if not alpha > 0 or not math.isfinite(alpha):
        raise OutOfRangeError(f"alpha must be a positive finite number, got {alpha}")


def _bd_from_cells(table: np.ndarray, cells: np.ndarray) -> float:
    """BD log score for observed rows given a matching matrix of cell priors"""
    if table.size == 0:
        return 0.0
    if np.any((cells == 0) & (table > 0)):
        raise InvalidPriorError("zero prior mass on a cell with positive count")
    used = cells > 0
    row_prior = cells.sum(axis=1)
    n_ij = table.sum(axis=1)
    cell_terms = np.where(
        used,
        gammaln(np.where(used, cells + table, 1.0)) - gammaln(np.where(used, cells, 1.0)),
        0.0,
    )
    return float(np.sum(gammaln(row_prior) - gammaln(row_prior + n_ij)) + cell_terms.sum())


def _bd_uniform(table: np.ndarray, cell: float) -> float:
    """BD log score when every cell carries the same prior mass"""
    if table.size == 0:
        return 0.0
    r = table.shape[1]
    n_ij = table.sum(axis=1)
    return float(
        np.sum(gammaln(r * cell) - gammaln(r * cell + n_ij))
        + np.sum(gammaln(cell + table) - gammaln(cell))
    )


def local_bd(counts: FamilyCounts, alpha_cell: Callable[[int, int], float]) -> float:
    """
    Generic BD score with an arbitrary cell prior

    Args:
        counts: Family counts
        alpha_cell: Prior mass for (configuration index j, child level k)

    Returns:
        Log marginal likelihood of the family

    Raises:
        InvalidPriorError: A cell with positive count has zero prior mass
    """
    r = counts.child_cardinality
    cells = np.array(
        [[float(alpha_cell(j, k)) for k in range(r)] for j in counts.configs],
        dtype=float,
    ).reshape(len(counts.configs), r)
    if np.any(cells < 0):
        raise InvalidPriorError("negative prior mass")
    return _bd_from_cells(counts.table, cells)


def bdeu_cell_prior(counts: FamilyCounts, alpha: float) -> float:
    """alpha* = alpha / (r q)"""
    return alpha / (counts.child_cardinality * counts.nominal_config_count)


def bds_cell_prior(counts: FamilyCounts, alpha: float) -> float:
    """alpha-tilde = alpha / (r q-tilde); zero when nothing is observed"""
    if counts.observed_config_count == 0:
        return 0.0
    return alpha / (counts.child_cardinality * counts.observed_config_count)


def local_bdeu(counts: FamilyCounts, alpha: float) -> float:
    """BDeu: uniform cell prior spread over every nominal parent configuration"""
    check_alpha(alpha)
    return _bd_uniform(counts.table, bdeu_cell_prior(counts, alpha))


def local_bds(counts: FamilyCounts, alpha: float) -> float:
    """BDs: uniform cell prior spread over the observed parent configurations only"""
    check_alpha(alpha)
    if counts.observed_config_count == 0:
        return 0.0
    return _bd_uniform(counts.table, bds_cell_prior(counts, alpha))


def local_k2(counts: FamilyCounts) -> float:
    return _bd_uniform(counts.table, 1.0)


def local_bdj(counts: FamilyCounts) -> float:
    return _bd_uniform(counts.table, 0.5)


def effective_params(counts: FamilyCounts) -> int:
    """
    Effective number of parameters of a family

    Counts the positive cells of every observed configuration minus one per
    configuration: each observed row with a single positive cell adds nothing.
    """
    return int(counts.positive_cells.sum()) - counts.observed_config_count


def bds_equivalent_alpha(counts: FamilyCounts, alpha: float) -> float:
    """Imaginary sample size for which BDeu reproduces BDs on this family"""
    check_alpha(alpha)
    if counts.observed_config_count == 0:
        return alpha
    return alpha * counts.nominal_config_count / counts.observed_config_count


def log_config_ratio(counts: FamilyCounts) -> float:
    """log(q / q-tilde), zero when nothing is observed"""
    if counts.observed_config_count == 0:
        return 0.0
    return math.log(counts.nominal_config_count) - math.log(
        counts.observed_config_count
    )


def log_implicit_prior_ratio(plus: FamilyCounts, minus: FamilyCounts) -> float:
    """
    Small-alpha limit of the BDs over BDeu Bayes-factor ratio between two families

    Args:
        plus: Family counts under the larger parent set
        minus: Family counts under the smaller parent set

    Returns:
        d_EP(plus) log(q+/q~+) - d_EP(minus) log(q-/q~-)
    """
    return effective_params(plus) * log_config_ratio(plus) - effective_params(
        minus
    ) * log_config_ratio(minus)


@dataclass(frozen=True)
class BDeu(ScoreKind):
    alpha: float = 1.0

    name: ClassVar[str] = "bdeu"
    takes_alpha: ClassVar[bool] = True

    def __post_init__(self):
        check_alpha(self.alpha)

    @property
    def metadata(self) -> Dict[str, str]:
        return {
            "name": self.name,
            "token": self.token,
            "description": "Bayesian Dirichlet equivalent uniform marginal likelihood",
        }

    def local(self, counts: FamilyCounts) -> float:
        return local_bdeu(counts, self.alpha)


@dataclass(frozen=True)
class BDs(ScoreKind):
    alpha: float = 1.0

    name: ClassVar[str] = "bds"
    takes_alpha: ClassVar[bool] = True

    def __post_init__(self):
        check_alpha(self.alpha)

    @property
    def metadata(self) -> Dict[str, str]:
        return {
            "name": self.name,
            "token": self.token,
            "description": "Bayesian Dirichlet sparse marginal likelihood",
        }

    def local(self, counts: FamilyCounts) -> float:
        return local_bds(counts, self.alpha)


@dataclass(frozen=True)
class K2(ScoreKind):
    name: ClassVar[str] = "k2"

    @property
    def metadata(self) -> Dict[str, str]:
        return {
            "name": self.name,
            "token": self.token,
            "description": "BD with unit prior mass on every cell",
        }

    def local(self, counts: FamilyCounts) -> float:
        return local_k2(counts)


@dataclass(frozen=True)
class BDJeffreys(ScoreKind):
    name: ClassVar[str] = "jeffreys"

    @property
    def metadata(self) -> Dict[str, str]:
        return {
            "name": self.name,
            "token": self.token,
            "description": "BD with Jeffreys' prior (one half on every cell)",
        }

    def local(self, counts: FamilyCounts) -> float:
        return local_bdj(counts)
