"""
CSV interchange: datasets, level schemas, structures, search traces and results
"""

import io
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import pandas as pd

from ..data import Dataset, Variable
from ..errors import (
    CsvFormatError,
    HeaderMismatchError,
    SchemaMismatchError,
)
from ..graph import Dag
from ..search import SearchTrace

logger = logging.getLogger(__name__)

RESULTS_HEADER = "# bnstructure results v1"
RESULT_COLUMNS = [
    "network",
    "n_over_p",
    "replicate",
    "score",
    "prior",
    "alpha",
    "beta_or_c",
    "shd",
    "arcs",
    "arcs_ratio",
    "loglik",
    "seconds",
    "error",
]
STRUCTURE_COLUMNS = ["from", "to"]
TRACE_COLUMNS = ["iteration", "move", "from", "to", "delta", "log_posterior"]

Schema = Dict[str, List[str]]


def _read_frame(text: str) -> pd.DataFrame:
    try:
        return pd.read_csv(
            io.StringIO(text),
            header=None,
            dtype=str,
            keep_default_na=False,
            na_filter=False,
            skip_blank_lines=True,
        )
    except pd.errors.EmptyDataError:
        raise CsvFormatError("CSV input is empty; a header row is required") from None
    except pd.errors.ParserError as e:
        raise CsvFormatError(f"malformed CSV: {e}") from None


def _emit_frame(frame: pd.DataFrame, path: Optional[Path] = None, header: str = "") -> str:
    text = header + frame.to_csv(index=False, lineterminator="\n")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {len(frame)} rows to {path}")
    return text


def read_csv_dataset(text: str, schema: Optional[Mapping[str, Sequence[str]]] = None) -> Dataset:
    """
    Parse a categorical CSV dataset

    Args:
        text: CSV text whose first row names the variables
        schema: Declared levels per variable; without it levels are the sorted
            distinct observed values and the dataset carries a warning

    Returns:
        The dataset

    Raises:
        HeaderMismatchError: Header and schema disagree, or duplicate names
        MissingCellError: Empty cell
        UnknownLevelError: Value outside the declared levels
    """
    frame = _read_frame(text).fillna("")
    header = [str(name) for name in frame.iloc[0]]
    if any(name == "" for name in header):
        raise HeaderMismatchError("header contains an empty column name")
    if len(set(header)) != len(header):
        raise HeaderMismatchError(f"duplicate column names in header {header}")
    if schema is not None:
        missing = [name for name in schema if name not in header]
        extra = [name for name in header if name not in schema]
        if missing or extra:
            raise HeaderMismatchError(
                f"header does not match schema (missing {missing}, undeclared {extra})"
            )
    records = frame.iloc[1:].values.tolist()
    return Dataset.from_labels(header, records, schema)


def load_csv_dataset(path: Union[str, Path], schema: Optional[Mapping[str, Sequence[str]]] = None) -> Dataset:
    logger.debug(f"Reading dataset {path}")
    return read_csv_dataset(Path(path).read_text(encoding="utf-8"), schema)


def write_csv_dataset(data: Dataset, path: Optional[Path] = None) -> str:
    """Write level labels with a header row; returns the CSV text"""
    frame = pd.DataFrame(data.labels(), columns=data.names)
    return _emit_frame(frame, path)


def read_schema(text: str) -> Schema:
    """
    Parse level declarations, one ``name:level1,level2,...`` per line

    Blank lines and lines starting with ``#`` are ignored.
    """
    schema: Schema = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, levels = line.partition(":")
        name = name.strip()
        if not sep or not name:
            raise SchemaMismatchError(f"schema line {number}: expected name:level1,level2,...")
        if name in schema:
            raise SchemaMismatchError(f"schema line {number}: {name} declared twice")
        parsed = [level.strip() for level in levels.split(",")]
        if any(level == "" for level in parsed):
            raise SchemaMismatchError(f"schema line {number}: empty level for {name}")
        schema[name] = parsed
    return schema


def load_schema(path: Union[str, Path]) -> Schema:
    return read_schema(Path(path).read_text(encoding="utf-8"))


def write_schema(variables: Sequence[Variable], path: Optional[Path] = None) -> str:
    text = "".join(f"{v.name}:{','.join(v.levels)}\n" for v in variables)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_structure(source: Union[str, Path], names: Sequence[str]) -> Dag:
    """
    Load a structure for the given variable names

    Args:
        source: Arc-list CSV (header ``from,to``) or a ``.bif`` file
        names: Variable names fixing the node order

    Returns:
        The structure
    """
    path = Path(source)
    if path.suffix.lower() == ".bif":
        from .bif import read_bif

        bn = read_bif(path)
        if sorted(bn.names) != sorted(names):
            raise SchemaMismatchError(
                f"network variables {bn.names} do not match data columns {list(names)}"
            )
        arcs = [(bn.names[a], bn.names[b]) for a, b in bn.dag.arcs]
    else:
        arcs = read_arc_list(path)
    return structure_from_names(arcs, names)


def read_arc_list(path: Union[str, Path]) -> List[Tuple[str, str]]:
    """Named arcs of a ``from,to`` CSV, in file order"""
    frame = _read_frame(Path(path).read_text(encoding="utf-8"))
    header = [str(h).strip() for h in frame.iloc[0]]
    if header != STRUCTURE_COLUMNS:
        raise HeaderMismatchError(f"structure header must be from,to, got {header}")
    return [(str(a).strip(), str(b).strip()) for a, b in frame.iloc[1:].values.tolist()]


def structure_from_names(arcs: Sequence[Sequence[str]], names: Sequence[str]) -> Dag:
    positions = {name: i for i, name in enumerate(names)}
    indexed = []
    for source, target in arcs:
        for name in (source, target):
            if name not in positions:
                raise SchemaMismatchError(f"structure names unknown variable {name!r}")
        indexed.append((positions[source], positions[target]))
    return Dag.from_arcs(len(names), indexed)


def write_structure(dag: Dag, names: Sequence[str], path: Optional[Path] = None) -> str:
    frame = pd.DataFrame(
        [(names[a], names[b]) for a, b in dag.arcs], columns=STRUCTURE_COLUMNS
    )
    return _emit_frame(frame, path)


def write_trace(trace: SearchTrace, names: Sequence[str], path: Optional[Path] = None) -> str:
    frame = pd.DataFrame(
        [
            (
                step.iteration,
                step.move.kind.value,
                names[step.move.source],
                names[step.move.target],
                step.delta,
                step.log_posterior,
            )
            for step in trace
        ],
        columns=TRACE_COLUMNS,
    )
    return _emit_frame(frame, path)


class ResultsTable:
    """Simulation rows with the fixed, versioned column set"""

    def __init__(self):
        self.rows: List[Dict[str, Any]] = []

    def add(self, row: Mapping[str, Any]) -> None:
        unknown = set(row) - set(RESULT_COLUMNS)
        if unknown:
            raise HeaderMismatchError(f"unknown result columns {sorted(unknown)}")
        self.rows.append({column: row.get(column, "") for column in RESULT_COLUMNS})

    def __len__(self) -> int:
        return len(self.rows)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=RESULT_COLUMNS)

    def to_csv(self, path: Optional[Path] = None) -> str:
        return _emit_frame(self.to_frame(), path, header=RESULTS_HEADER + "\n")


def read_results(path: Union[str, Path]) -> pd.DataFrame:
    """Load a results CSV written by ResultsTable"""
    text = Path(path).read_text(encoding="utf-8")
    if not text.startswith(RESULTS_HEADER):
        raise HeaderMismatchError(f"{path} does not start with {RESULTS_HEADER!r}")
    frame = pd.read_csv(io.StringIO(text), comment="#", keep_default_na=False)
    if list(frame.columns) != RESULT_COLUMNS:
        raise HeaderMismatchError(f"unexpected result columns {list(frame.columns)}")
    return frame
