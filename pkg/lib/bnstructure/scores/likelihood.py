"""
Maximised multinomial log-likelihood and the BIC penalty built on it
"""

import math
from dataclasses import dataclass
from typing import ClassVar, Dict

import numpy as np
from scipy.special import xlogy

from ..data import FamilyCounts
from ..errors import EmptyDataError
from .base import ScoreKind


def local_loglik(counts: FamilyCounts) -> float:
    """Sum of n_ijk log(n_ijk / n_ij); empty cells contribute zero"""
    if counts.table.size == 0:
        return 0.0
    n_ij = counts.n_ij[:, np.newaxis]
    return float(xlogy(counts.table, counts.table / n_ij).sum())


def local_bic(counts: FamilyCounts) -> float:
    """
    BIC in the maximising convention

    Args:
        counts: Family counts

    Returns:
        log-likelihood minus ((r - 1) q / 2) log n

    Raises:
        EmptyDataError: No rows were counted
    """
    n = counts.total
    if n == 0:
        raise EmptyDataError("BIC is undefined without data")
    penalty = (counts.child_cardinality - 1) * counts.nominal_config_count / 2
    return local_loglik(counts) - penalty * math.log(n)


@dataclass(frozen=True)
class BIC(ScoreKind):
    name: ClassVar[str] = "bic"

    @property
    def metadata(self) -> Dict[str, str]:
        return {
            "name": self.name,
            "token": self.token,
            "description": "Bayesian information criterion (higher is better)",
        }

    def local(self, counts: FamilyCounts) -> float:
        return local_bic(counts)


@dataclass(frozen=True)
class LogLik(ScoreKind):
    name: ClassVar[str] = "loglik"

    @property
    def metadata(self) -> Dict[str, str]:
        return {
            "name": self.name,
            "token": self.token,
            "description": "Maximised log-likelihood without penalty",
        }

    def local(self, counts: FamilyCounts) -> float:
        return local_loglik(counts)
