"""
File formats: BIF networks and CSV tables
"""

from .bif import (
    BifDocument,
    emit_bif,
    parse_bif,
    parse_bif_document,
    read_bif,
    write_bif,
)
from .tables import (
    RESULT_COLUMNS,
    RESULTS_HEADER,
    ResultsTable,
    load_csv_dataset,
    load_schema,
    read_csv_dataset,
    read_results,
    read_arc_list,
    read_schema,
    read_structure,
    structure_from_names,
    write_csv_dataset,
    write_schema,
    write_structure,
    write_trace,
)

__all__ = [
    "BifDocument",
    "RESULT_COLUMNS",
    "RESULTS_HEADER",
    "ResultsTable",
    "emit_bif",
    "load_csv_dataset",
    "load_schema",
    "parse_bif",
    "parse_bif_document",
    "read_bif",
    "read_csv_dataset",
    "read_results",
    "read_arc_list",
    "read_schema",
    "read_structure",
    "structure_from_names",
    "write_bif",
    "write_csv_dataset",
    "write_schema",
    "write_structure",
    "write_trace",
]
