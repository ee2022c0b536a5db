"""
Unit tests for CSV datasets, schemas, structures and result tables
"""

import pytest

from bnstructure.errors import (
    CsvFormatError,
    CyclicStructureError,
    HeaderMismatchError,
    MissingCellError,
    SchemaMismatchError,
    UnknownLevelError,
)
from bnstructure.graph import Dag
from bnstructure.io import (
    RESULT_COLUMNS,
    RESULTS_HEADER,
    ResultsTable,
    load_csv_dataset,
    parse_bif,
    read_csv_dataset,
    read_results,
    read_schema,
    read_structure,
    write_csv_dataset,
    write_schema,
    write_structure,
    write_trace,
)
from bnstructure.model import sample
from bnstructure.priors import Uniform
from bnstructure.scores import BDeu
from bnstructure.search import hill_climb

from fixtures import CHAIN_BIF

SCHEMA = {"A": ["0", "1"], "B": ["x", "y", "z"]}


class TestCsvDataset:
    """Test cases for reading and writing CSV datasets"""

    def test_read_with_schema(self):
        """Test labels stay strings and follow the schema order"""
        data = read_csv_dataset("A,B\n1,z\n0,x\n", SCHEMA)
        assert data.names == ["A", "B"]
        assert data.rows.tolist() == [[1, 2], [0, 0]]
        assert data.cardinalities == [2, 3]

    def test_numeric_labels_kept_verbatim(self):
        """Test labels such as 01 are not converted to numbers"""
        data = read_csv_dataset("A\n01\n1\n")
        assert data.variables[0].levels == ("01", "1")

    def test_header_only(self):
        """Test a header with a schema gives an empty dataset"""
        data = read_csv_dataset("A,B\n", SCHEMA)
        assert data.n_rows == 0

    def test_empty_text(self):
        """Test a missing header"""
        with pytest.raises(CsvFormatError):
            read_csv_dataset("")

    def test_header_schema_mismatch(self):
        """Test undeclared and missing columns"""
        with pytest.raises(HeaderMismatchError, match="undeclared"):
            read_csv_dataset("A,C\n0,1\n", SCHEMA)

    def test_duplicate_header(self):
        """Test repeated column names"""
        with pytest.raises(HeaderMismatchError):
            read_csv_dataset("A,A\n0,1\n")

    def test_missing_cell(self):
        """Test an empty cell"""
        with pytest.raises(MissingCellError):
            read_csv_dataset("A,B\n0,\n", SCHEMA)

    def test_unknown_level(self):
        """Test a value outside the schema"""
        with pytest.raises(UnknownLevelError):
            read_csv_dataset("A,B\n2,x\n", SCHEMA)

    def test_ragged_row(self):
        """Test a row with too many cells"""
        with pytest.raises(CsvFormatError):
            read_csv_dataset("A,B\n0,x\n0,x,1\n", SCHEMA)

    def test_write_then_load(self, temp_dir):
        """Test labels survive a file round trip"""
        data = read_csv_dataset("A,B\n1,z\n0,x\n", SCHEMA)
        path = temp_dir / "data.csv"
        text = write_csv_dataset(data, path)
        assert text == "A,B\n1,z\n0,x\n"
        assert load_csv_dataset(path, SCHEMA).rows.tolist() == data.rows.tolist()

    def test_write_then_read_with_schema(self):
        """Test a sampled dataset reads back unchanged under its own schema"""
        bn = parse_bif(CHAIN_BIF)
        data = sample(bn, 150, seed=4)
        schema = read_schema(write_schema(data.variables))
        restored = read_csv_dataset(write_csv_dataset(data), schema)
        assert restored.variables == data.variables
        assert restored.rows.tolist() == data.rows.tolist()
        assert restored.warnings == ()
        assert write_csv_dataset(restored) == write_csv_dataset(data)


class TestSchema:
    """Test cases for level schemas"""

    def test_read(self):
        """Test comments, blanks and spacing"""
        schema = read_schema("# levels\nA: 0, 1\n\nB:x,y,z\n")
        assert schema == SCHEMA

    @pytest.mark.parametrize("text", ["A\n", ":0,1\n", "A:0,1\nA:0,1\n", "A:0,,1\n"])
    def test_invalid(self, text):
        """Test malformed declarations"""
        with pytest.raises(SchemaMismatchError):
            read_schema(text)

    def test_write(self):
        """Test writing a dataset's variables"""
        data = read_csv_dataset("A,B\n1,z\n", SCHEMA)
        assert write_schema(data.variables) == "A:0,1\nB:x,y,z\n"
        assert read_schema(write_schema(data.variables)) == SCHEMA


class TestStructures:
    """Test cases for structure files"""

    def test_arc_list(self, temp_dir):
        """Test a from,to CSV maps names to column indices"""
        path = temp_dir / "g.csv"
        path.write_text("from,to\nC,A\nB,A\n")
        dag = read_structure(path, ["A", "B", "C"])
        assert dag == Dag.from_arcs(3, [(2, 0), (1, 0)])

    def test_empty_arc_list(self, temp_dir):
        """Test a header-only file is the empty graph"""
        path = temp_dir / "g.csv"
        path.write_text("from,to\n")
        assert read_structure(path, ["A", "B"]) == Dag.empty(2)

    def test_arc_list_errors(self, temp_dir):
        """Test bad headers, unknown names and cycles"""
        path = temp_dir / "g.csv"
        path.write_text("source,target\nA,B\n")
        with pytest.raises(HeaderMismatchError):
            read_structure(path, ["A", "B"])
        path.write_text("from,to\nA,Q\n")
        with pytest.raises(SchemaMismatchError):
            read_structure(path, ["A", "B"])
        path.write_text("from,to\nA,B\nB,A\n")
        with pytest.raises(CyclicStructureError):
            read_structure(path, ["A", "B"])

    def test_bif_structure(self, temp_dir):
        """Test arcs are taken from a network file by name"""
        path = temp_dir / "chain.bif"
        path.write_text(CHAIN_BIF)
        dag = read_structure(path, ["C", "B", "A"])
        assert dag == Dag.from_arcs(3, [(2, 1), (1, 0)])
        with pytest.raises(SchemaMismatchError):
            read_structure(path, ["A", "B"])

    def test_write_structure(self, temp_dir):
        """Test named arcs in arc order"""
        dag = Dag.from_arcs(3, [(2, 0), (1, 0)])
        assert write_structure(dag, ["A", "B", "C"]) == "from,to\nB,A\nC,A\n"
        assert write_structure(Dag.empty(2), ["A", "B"]) == "from,to\n"

    def test_write_trace(self, sparse_and_data):
        """Test one trace row per accepted move"""
        _, trace = hill_climb(sparse_and_data, BDeu(1.0), Uniform())
        lines = write_trace(trace, sparse_and_data.names).splitlines()
        assert lines[0] == "iteration,move,from,to,delta,log_posterior"
        assert len(lines) == len(trace) + 1


class TestResultsTable:
    """Test cases for simulation result files"""

    def test_columns_and_header(self, temp_dir):
        """Test the versioned header and fixed columns"""
        table = ResultsTable()
        table.add({"network": "net", "n_over_p": 0.1, "replicate": 1, "score": "bdeu", "shd": 3})
        path = temp_dir / "results.csv"
        text = table.to_csv(path)
        assert text.splitlines()[0] == RESULTS_HEADER
        assert text.splitlines()[1] == ",".join(RESULT_COLUMNS)
        frame = read_results(path)
        assert list(frame.columns) == RESULT_COLUMNS
        assert frame.loc[0, "shd"] == 3

    def test_unknown_column(self):
        """Test rows cannot add columns"""
        with pytest.raises(HeaderMismatchError):
            ResultsTable().add({"colour": "red"})

    def test_missing_header(self, temp_dir):
        """Test files without the version line are refused"""
        path = temp_dir / "results.csv"
        path.write_text(",".join(RESULT_COLUMNS) + "\n")
        with pytest.raises(HeaderMismatchError):
            read_results(path)
