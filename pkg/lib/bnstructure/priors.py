"""
Graph priors: the uniform prior over DAGs and the marginal uniform prior

The marginal uniform prior treats every node pair independently: an arc is
present with probability beta and, when present, points either way with equal
probability. Search only needs its move ratios, which are constants.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import ClassVar, Dict, Optional, Tuple

from .errors import NotApplicableError, OutOfRangeError, StrategyError
from .graph import ArcMove, Dag, MoveKind

logger = logging.getLogger(__name__)


class PriorKind(ABC):
    """Abstract base class for structure priors"""

    name: ClassVar[str] = ""
    parameter: ClassVar[Optional[str]] = None

    @property
    @abstractmethod
    def metadata(self) -> Dict[str, str]:
        """
        Return prior metadata

        Returns:
            Dict containing name, token and description
        """

    @abstractmethod
    def resolve_beta(self, n_nodes: int) -> Optional[float]:
        """Per-arc inclusion probability for a graph on ``n_nodes`` nodes (None for U)"""

    @property
    def value(self) -> Optional[float]:
        return getattr(self, self.parameter) if self.parameter else None

    @property
    def token(self) -> str:
        if self.parameter:
            return f"{self.name}:{self.value:g}"
        return self.name

    def validate_config(self) -> Tuple[bool, Optional[str]]:
        return True, None

    @classmethod
    def from_argument(cls, argument: Optional[str]) -> "PriorKind":
        """Build the prior from the part of a token after the colon"""
        if cls.parameter is None:
            if argument is not None:
                raise StrategyError(f"prior {cls.name} takes no parameter")
            return cls()
        if argument is None:
            raise StrategyError(f"prior {cls.name} needs a value for {cls.parameter}")
        try:
            return cls(float(argument))  # type: ignore[call-arg]
        except ValueError as e:
            if isinstance(e, OutOfRangeError):
                raise StrategyError(str(e)) from None
            raise StrategyError(
                f"prior {cls.name}: {cls.parameter} {argument!r} is not a number"
            ) from None

    def __str__(self) -> str:
        return self.token


@dataclass(frozen=True)
class Uniform(PriorKind):
    name: ClassVar[str] = "u"

    @property
    def metadata(self) -> Dict[str, str]:
        return {
            "name": self.name,
            "token": self.token,
            "description": "Uniform prior over all DAGs",
        }

    def resolve_beta(self, n_nodes: int) -> Optional[float]:
        return None


@dataclass(frozen=True)
class MarginalUniform(PriorKind):
    beta: float = 0.5

    name: ClassVar[str] = "mu"
    parameter: ClassVar[Optional[str]] = "beta"

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise OutOfRangeError(f"beta must lie strictly inside (0, 1), got {self.beta}")

    @property
    def metadata(self) -> Dict[str, str]:
        return {
            "name": self.name,
            "token": self.token,
            "description": "Marginal uniform prior with arc inclusion probability beta",
        }

    def resolve_beta(self, n_nodes: int) -> Optional[float]:
        return self.beta


@dataclass(frozen=True)
class MarginalUniformSparse(PriorKind):
    c: float = 1.0

    name: ClassVar[str] = "mu-sparse"
    parameter: ClassVar[Optional[str]] = "c"

    def __post_init__(self):
        if not self.c > 0:
            raise OutOfRangeError(f"c must be positive, got {self.c}")

    @property
    def metadata(self) -> Dict[str, str]:
        return {
            "name": self.name,
            "token": self.token,
            "description": "Marginal uniform prior expecting c arcs per node",
        }

    def resolve_beta(self, n_nodes: int) -> Optional[float]:
        if n_nodes < 2:
            raise OutOfRangeError(f"{self.token} needs at least two nodes")
        beta = 2 * self.c / (n_nodes - 1)
        if not 0 < beta < 1:
            raise OutOfRangeError(
                f"{self.token} gives beta = {beta:g} on {n_nodes} nodes, outside (0, 1)"
            )
        return beta

    def validate_for(self, n_nodes: int) -> Tuple[bool, Optional[str]]:
        try:
            self.resolve_beta(n_nodes)
        except OutOfRangeError as e:
            return False, str(e)
        return True, None


def resolve_beta(prior: PriorKind, n_nodes: int) -> Optional[float]:
    """
    Effective per-arc probability

    Args:
        prior: Prior kind
        n_nodes: Number of nodes in the graph

    Returns:
        beta, or None for the uniform prior

    Raises:
        OutOfRangeError: Resolved beta outside (0, 1)
    """
    return prior.resolve_beta(n_nodes)


def _log_add_ratio(beta: float) -> float:
    return math.log(beta / 2) - math.log1p(-beta)


def log_prior_move_ratio(prior: PriorKind, move: ArcMove, n_nodes: int) -> float:
    """log P(after) / P(before) for one arc move"""
    beta = prior.resolve_beta(n_nodes)
    if beta is None or move.kind is MoveKind.REVERSE:
        return 0.0
    ratio = _log_add_ratio(beta)
    return ratio if move.kind is MoveKind.ADD else -ratio


def log_graph_prior(prior: PriorKind, dag: Dag) -> float:
    """
    Unnormalised log prior of a structure

    Zero under U. Under MU each arc contributes log(beta/2) and each
    non-adjacent pair log(1 - beta), so differences reproduce the move ratios.
    """
    if dag.node_count < 2:
        return 0.0
    beta = prior.resolve_beta(dag.node_count)
    if beta is None:
        return 0.0
    pairs = dag.node_count * (dag.node_count - 1) // 2
    arcs = dag.arc_count
    return arcs * math.log(beta / 2) + (pairs - arcs) * math.log1p(-beta)


def expected_arc_count(prior: PriorKind, n_nodes: int) -> float:
    """Expected number of arcs, N(N-1) beta / 2"""
    if n_nodes < 2:
        raise OutOfRangeError(f"expected arc count needs at least two nodes, got {n_nodes}")
    beta = prior.resolve_beta(n_nodes)
    if beta is None:
        raise NotApplicableError("the uniform prior has no per-arc inclusion probability")
    return n_nodes * (n_nodes - 1) * beta / 2


def uniform_arc_probability_approx(n_nodes: int) -> Tuple[float, float]:
    """
    Large-N approximation of arc probabilities under the uniform prior

    Returns:
        Tuple of (probability of each direction, probability of no arc)
    """
    if n_nodes < 2:
        raise OutOfRangeError(f"needs at least two nodes, got {n_nodes}")
    directed = 0.25 + 1 / (4 * (n_nodes - 1))
    return directed, 0.5 - 1 / (2 * (n_nodes - 1))


def uniform_incident_correlation_approx(n_nodes: int) -> float:
    """Large-N approximation of the correlation between two arcs sharing a node"""
    directed, _ = uniform_arc_probability_approx(n_nodes)
    return 2 * (1 - directed) ** 2 * directed
