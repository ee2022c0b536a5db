"""
Base interface for family scores
"""

from abc import ABC, abstractmethod
from typing import ClassVar, Dict, Optional, Tuple

from ..data import FamilyCounts
from ..errors import OutOfRangeError, StrategyError


class ScoreKind(ABC):
    """Abstract base class for every local (per-family) score

    Concrete kinds are small frozen dataclasses; the strategy registry finds
    them by their ``name`` and builds them from command-line tokens such as
    ``bdeu:10``.
    """

    name: ClassVar[str] = ""
    takes_alpha: ClassVar[bool] = False

    @property
    @abstractmethod
    def metadata(self) -> Dict[str, str]:
        """
        Return score metadata

        Returns:
            Dict containing:
            - name: Registry name
            - token: Full token including parameters
            - description: One-line description
        """

    @abstractmethod
    def local(self, counts: FamilyCounts) -> float:
        """
        Score one family on the natural-log scale

        Args:
            counts: Contingency counts of the family

        Returns:
            Local score
        """

    @property
    def token(self) -> str:
        alpha = getattr(self, "alpha", None)
        if self.takes_alpha and alpha is not None:
            return f"{self.name}:{alpha:g}"
        return self.name

    @property
    def alpha_value(self) -> Optional[float]:
        """Imaginary sample size, when the kind has one"""
        return getattr(self, "alpha", None) if self.takes_alpha else None

    def validate_config(self) -> Tuple[bool, Optional[str]]:
        """
        Validate score parameters

        Returns:
            Tuple of (valid: bool, error_message: Optional[str])
        """
        alpha = self.alpha_value
        if self.takes_alpha and not (alpha is not None and alpha > 0):
            return False, f"{self.name} needs a positive alpha, got {alpha}"
        return True, None

    @classmethod
    def from_argument(cls, argument: Optional[str]) -> "ScoreKind":
        """
        Build the kind from the part of a token after the colon

        Args:
            argument: Parameter text, or None when the token has no colon

        Returns:
            A validated instance
        """
        if not cls.takes_alpha:
            if argument is not None:
                raise StrategyError(f"score {cls.name} takes no parameter")
            instance = cls()
        else:
            try:
                alpha = 1.0 if argument is None else float(argument)
            except ValueError:
                raise StrategyError(
                    f"score {cls.name}: alpha {argument!r} is not a number"
                ) from None
            try:
                instance = cls(alpha)  # type: ignore[call-arg]
            except OutOfRangeError as e:
                raise StrategyError(str(e)) from None
        valid, error = instance.validate_config()
        if not valid:
            raise StrategyError(error or f"invalid score {cls.name}")
        return instance

    def __str__(self) -> str:
        return self.token
