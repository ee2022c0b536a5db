"""
Bayes-factor curves of two nested structures over a grid of imaginary sample sizes
"""

import logging
from typing import List, Sequence

import numpy as np
import pandas as pd

from .data import Dataset, count_family
from .errors import DimensionMismatchError, OutOfRangeError
from .graph import Dag
from .scores import local_bdeu, local_bds, log_implicit_prior_ratio

logger = logging.getLogger(__name__)

CURVE_COLUMNS = [
    "alpha",
    "log_bf_bdeu",
    "log_bf_bds",
    "log_ratio_bds_bdeu",
    "log_implicit_prior",
    "bf_bdeu",
    "bf_bds",
    "ratio_bds_bdeu",
    "implicit_prior",
]

DEFAULT_ALPHA_GRID = tuple(float(a) for a in np.logspace(-6, 8, 29))


def differing_nodes(g_plus: Dag, g_minus: Dag) -> List[int]:
    return [
        node
        for node in range(g_plus.node_count)
        if g_plus.parents[node] != g_minus.parents[node]
    ]


def bayes_factor_curves(
    data: Dataset, g_plus: Dag, g_minus: Dag, alpha_grid: Sequence[float] = DEFAULT_ALPHA_GRID
) -> pd.DataFrame:
    """
    Log Bayes factors of ``g_plus`` against ``g_minus`` under BDeu and BDs

    Only families whose parents differ enter the sums. The ratio column is the
    BDs Bayes factor over the BDeu one; the implicit-prior column is its
    small-alpha limit, which does not depend on alpha.

    Args:
        data: Dataset over both structures' nodes
        g_plus: Structure with the extra arc(s)
        g_minus: Reference structure
        alpha_grid: Positive imaginary sample sizes

    Returns:
        DataFrame with one row per alpha, log columns then exponentiated ones
    """
    for dag in (g_plus, g_minus):
        if dag.node_count != data.n_vars:
            raise DimensionMismatchError(
                f"structure has {dag.node_count} nodes, data has {data.n_vars} columns"
            )
    if not alpha_grid or any(not a > 0 for a in alpha_grid):
        raise OutOfRangeError("alpha grid must be non-empty and positive")

    nodes = differing_nodes(g_plus, g_minus)
    families = [
        (count_family(data, n, g_plus.parents[n]), count_family(data, n, g_minus.parents[n]))
        for n in nodes
    ]
    implicit = sum(log_implicit_prior_ratio(plus, minus) for plus, minus in families)
    logger.info(f"Bayes-factor curves over {len(alpha_grid)} alphas, differing nodes {nodes}")

    rows = []
    for alpha in alpha_grid:
        bf_bdeu = sum(local_bdeu(p, alpha) - local_bdeu(m, alpha) for p, m in families)
        bf_bds = sum(local_bds(p, alpha) - local_bds(m, alpha) for p, m in families)
        rows.append(
            {
                "alpha": float(alpha),
                "log_bf_bdeu": bf_bdeu,
                "log_bf_bds": bf_bds,
                "log_ratio_bds_bdeu": bf_bds - bf_bdeu,
                "log_implicit_prior": implicit,
            }
        )
    frame = pd.DataFrame(rows, columns=CURVE_COLUMNS[:5])
    frame["bf_bdeu"] = np.exp(frame["log_bf_bdeu"])
    frame["bf_bds"] = np.exp(frame["log_bf_bds"])
    frame["ratio_bds_bdeu"] = np.exp(frame["log_ratio_bds_bdeu"])
    frame["implicit_prior"] = np.exp(frame["log_implicit_prior"])
    return frame[CURVE_COLUMNS]
