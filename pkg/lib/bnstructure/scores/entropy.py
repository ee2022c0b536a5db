"""
Posterior and empirical conditional entropies of a family (natural log)
"""

import numpy as np
from scipy.special import entr

from ..data import FamilyCounts
from ..errors import EmptyDataError
from .dirichlet import check_alpha, bdeu_cell_prior, bds_cell_prior


def _posterior_entropy(table: np.ndarray, cell: float) -> float:
    if table.size == 0:
        return 0.0
    r = table.shape[1]
    n_ij = table.sum(axis=1)[:, np.newaxis]
    posterior = (cell + table) / (r * cell + n_ij)
    return float(entr(posterior).sum())


def posterior_entropy_bdeu(counts: FamilyCounts, alpha: float) -> float:
    """Entropy of the BDeu posterior estimates, summed over observed configurations"""
    check_alpha(alpha)
    return _posterior_entropy(counts.table, bdeu_cell_prior(counts, alpha))


def posterior_entropy_bds(counts: FamilyCounts, alpha: float) -> float:
    """Same as the BDeu entropy with the BDs cell prior"""
    check_alpha(alpha)
    return _posterior_entropy(counts.table, bds_cell_prior(counts, alpha))


def empirical_entropy(counts: FamilyCounts) -> float:
    """
    Plug-in conditional entropy over observed configurations

    Raises:
        EmptyDataError: No rows were counted
    """
    if counts.total == 0:
        raise EmptyDataError("empirical entropy is undefined without data")
    frequencies = counts.table / counts.n_ij[:, np.newaxis]
    return float(entr(frequencies).sum())
