"""
Exception hierarchy for bnstructure

Input errors describe bad files, flags or preconditions and map to exit code 2;
computation errors are raised while scoring, searching or fitting and map to
exit code 3.
"""

from typing import Optional


class BNStructureError(Exception):
    """Base class for all bnstructure errors"""

    exit_code = 1


class InputError(BNStructureError, ValueError):
    """Invalid input: files, flags, indices or preconditions"""

    exit_code = 2


class ComputationError(BNStructureError, RuntimeError):
    """Failure while computing a score, a search step or a fit"""

    exit_code = 3


class IndexOutOfRangeError(InputError):
    """A node index does not exist in the dataset or graph"""


class DimensionMismatchError(InputError):
    """Two objects disagree on their number of nodes"""


class SchemaMismatchError(InputError):
    """Variables or levels of a dataset and a network do not align"""


class MissingCellError(InputError):
    """A dataset cell is empty (the complete-data assumption is violated)"""


class UnknownLevelError(InputError):
    """A dataset cell holds a level not declared in the schema"""


class HeaderMismatchError(InputError):
    """The CSV header does not match the declared schema"""


class CsvFormatError(InputError):
    """A CSV file cannot be tokenised"""


class CyclicStructureError(InputError):
    """A given structure has a self-loop or a directed cycle"""


class InvalidMoveError(InputError):
    """An arc move whose preconditions do not hold"""


class OutOfRangeError(InputError):
    """A hyperparameter falls outside its admissible range"""


class TooLargeError(InputError):
    """An exhaustive operation was requested beyond its desk-scale cap"""


class StrategyError(InputError):
    """A score or prior token cannot be parsed"""


class ConfigError(InputError):
    """Invalid simulation configuration"""


class BifSyntaxError(InputError):
    """Malformed BIF text, with the position of the offending token"""

    def __init__(self, line: int, column: int, expected: str, found: Optional[str] = None):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        message = f"line {line}, column {column}: expected {expected}"
        if found is not None:
            message += f", found {found!r}"
        super().__init__(message)


class BifSemanticError(InputError):
    """Well-formed BIF text describing an invalid network"""

    def __init__(self, message: str, block: Optional[str] = None):
        self.block = block
        if block:
            message = f"{block}: {message}"
        super().__init__(message)


class CyclicResultError(ComputationError):
    """A move would turn the graph into a cyclic one"""


class ConfigOverflowError(ComputationError):
    """The number of parent configurations exceeds the 64-bit unsigned range"""


class InvalidPriorError(ComputationError):
    """A zero Dirichlet hyperparameter was paired with a positive count"""


class EmptyDataError(ComputationError):
    """An operation requires at least one observation"""


class NotApplicableError(ComputationError):
    """The quantity is undefined for the requested prior or score"""


class IterationLimitError(ComputationError):
    """Hill climbing exhausted its iteration budget"""

    def __init__(self, message: str, dag=None, trace=None):
        super().__init__(message)
        self.dag = dag
        self.trace = trace
