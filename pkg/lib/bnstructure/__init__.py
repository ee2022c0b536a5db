"""
bnstructure - score-based structure learning for discrete Bayesian networks

Dirichlet marginal-likelihood scores (BDeu, BDs, K2, Jeffreys), BIC, uniform
and marginal-uniform graph priors, greedy hill climbing, BIF and CSV
interchange, and a simulation harness comparing scoring strategies.
"""

from ._version import __version__

__description__ = "Score-based structure learning for discrete Bayesian networks"

from .strategy import StrategyRegistry

__all__ = ["__version__", "StrategyRegistry"]
