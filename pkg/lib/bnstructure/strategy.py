"""
Strategy registry - discovers score and prior kinds and parses their tokens
"""

import importlib
import inspect
import logging
from typing import Dict, List, Optional, Tuple, Type

from .errors import StrategyError
from .priors import PriorKind
from .scores.base import ScoreKind

logger = logging.getLogger(__name__)

SCORE_MODULES = (f"{__package__}.scores.dirichlet", f"{__package__}.scores.likelihood")
PRIOR_MODULES = (f"{__package__}.priors",)


class StrategyRegistry:
    """Maps token names such as ``bdeu`` or ``mu-sparse`` to their classes"""

    def __init__(
        self,
        score_modules: Tuple[str, ...] = SCORE_MODULES,
        prior_modules: Tuple[str, ...] = PRIOR_MODULES,
    ):
        """
        Initialize the registry

        Args:
            score_modules: Modules searched for ScoreKind subclasses
            prior_modules: Modules searched for PriorKind subclasses
        """
        self.scores: Dict[str, Type[ScoreKind]] = {}
        self.priors: Dict[str, Type[PriorKind]] = {}
        for module_name in score_modules:
            self._discover(module_name, ScoreKind, self.scores)
        for module_name in prior_modules:
            self._discover(module_name, PriorKind, self.priors)

    def _discover(self, module_name: str, base: type, registry: Dict) -> None:
        logger.debug(f"Discovering {base.__name__} classes in {module_name}")
        module = importlib.import_module(module_name)
        for _, obj in inspect.getmembers(module, inspect.isclass):
            if issubclass(obj, base) and obj is not base and not inspect.isabstract(obj):
                if obj.name in registry and registry[obj.name] is not obj:
                    raise StrategyError(f"duplicate strategy name {obj.name!r}")
                registry[obj.name] = obj
                logger.debug(f"Registered {base.__name__} {obj.name}")

    @staticmethod
    def _split(token: str) -> Tuple[str, Optional[str]]:
        token = token.strip()
        if not token:
            raise StrategyError("empty strategy token")
        name, sep, argument = token.partition(":")
        return name.strip().lower(), (argument.strip() if sep else None)

    def parse_score(self, token: str) -> ScoreKind:
        """
        Parse a score token

        Args:
            token: e.g. ``bdeu:1``, ``bds:10``, ``k2``, ``bic``

        Returns:
            The score kind
        """
        name, argument = self._split(token)
        cls = self.scores.get(name)
        if cls is None:
            raise StrategyError(
                f"unknown score {name!r}; choose from {', '.join(self.score_names())}"
            )
        return cls.from_argument(argument)

    def parse_prior(self, token: str) -> PriorKind:
        """
        Parse a prior token

        Args:
            token: e.g. ``u``, ``mu:0.5``, ``mu-sparse:1``

        Returns:
            The prior kind
        """
        name, argument = self._split(token)
        cls = self.priors.get(name)
        if cls is None:
            raise StrategyError(
                f"unknown prior {name!r}; choose from {', '.join(self.prior_names())}"
            )
        return cls.from_argument(argument)

    def parse_strategy(self, token: str) -> Tuple[ScoreKind, PriorKind]:
        """Parse ``score+prior``, e.g. ``bds:1+mu:0.5``"""
        score_token, sep, prior_token = token.partition("+")
        if not sep:
            raise StrategyError(f"strategy {token!r} must look like score+prior")
        return self.parse_score(score_token), self.parse_prior(prior_token)

    def score_names(self) -> List[str]:
        return sorted(self.scores)

    def prior_names(self) -> List[str]:
        return sorted(self.priors)

    def list_strategies(self) -> List[Dict[str, str]]:
        """Metadata of every registered kind with its default parameters"""
        listed = [cls.from_argument(None).metadata for cls in self.scores.values()]
        for cls in self.priors.values():
            default = None if cls.parameter is None else "0.5"
            listed.append(cls.from_argument(default).metadata)
        return listed


def strategy_label(score: ScoreKind, prior: PriorKind) -> str:
    return f"{score.token}+{prior.token}"
