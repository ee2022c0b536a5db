"""
BIF (Bayesian Interchange Format) reader and writer

Supported subset: ``network``, ``variable`` (discrete only) and ``probability``
blocks, ``property`` statements kept as opaque text, ``//`` and ``/* */``
comments. Probability blocks take either a flat ``table`` (one row of child
probabilities per parent configuration, first listed parent most significant)
or per-configuration entries ``(level, ...) p, ...;`` with an optional
``default`` row. See docs/BIF_FORMAT.md.
"""

import bisect
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..data import Variable
from ..errors import BifSemanticError, BifSyntaxError, CyclicStructureError
from ..graph import Dag, is_acyclic
from ..model import Bn, Cpt

logger = logging.getLogger(__name__)

ROW_SUM_TOLERANCE = 1e-6

_TOKEN = re.compile(r'"(?P<quoted>[^"\n]*)"|(?P<word>[A-Za-z0-9_.+\-]+)|(?P<punct>[{}\[\]();,|])')
_BARE_WORD = re.compile(r"[A-Za-z0-9_.+\-]+\Z")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


@dataclass
class BifVariable:
    name: str
    levels: List[str]
    properties: List[str] = field(default_factory=list)


@dataclass
class BifProbability:
    """One probability block with its parents in listed order"""

    child: str
    parents: List[str]
    table: Optional[List[float]] = None
    entries: List[Tuple[Tuple[str, ...], List[float], Token]] = field(default_factory=list)
    default: Optional[List[float]] = None
    properties: List[str] = field(default_factory=list)

    @property
    def label(self) -> str:
        if self.parents:
            return f"probability ( {self.child} | {', '.join(self.parents)} )"
        return f"probability ( {self.child} )"


@dataclass
class BifDocument:
    name: str = "unnamed"
    properties: List[str] = field(default_factory=list)
    variables: List[BifVariable] = field(default_factory=list)
    probabilities: List[BifProbability] = field(default_factory=list)

    def to_bn(self) -> Bn:
        return _build_bn(self)


def _tokenize(text: str) -> List[Token]:
    line_starts = [0] + [m.end() for m in re.finditer("\n", text)]

    def where(offset: int) -> Tuple[int, int]:
        line = bisect.bisect_right(line_starts, offset)
        return line, offset - line_starts[line - 1] + 1

    tokens: List[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        if text.startswith("//", pos):
            end = text.find("\n", pos)
            pos = len(text) if end < 0 else end
            continue
        if text.startswith("/*", pos):
            end = text.find("*/", pos + 2)
            if end < 0:
                raise BifSyntaxError(*where(pos), "end of comment '*/'")
            pos = end + 2
            continue
        match = _TOKEN.match(text, pos)
        if match is None:
            raise BifSyntaxError(*where(pos), "a name, number or punctuation", text[pos])
        line, column = where(pos)
        if match.group("word") == "property":
            end = text.find(";", match.end())
            if end < 0:
                raise BifSyntaxError(line, column, "';' closing the property")
            tokens.append(Token("property", text[match.end():end].strip(), line, column))
            pos = end + 1
            continue
        if match.group("punct") is not None:
            tokens.append(Token("punct", match.group("punct"), line, column))
        elif match.group("quoted") is not None:
            tokens.append(Token("word", match.group("quoted"), line, column))
        else:
            tokens.append(Token("word", match.group("word"), line, column))
        pos = match.end()
    line, column = where(len(text))
    tokens.append(Token("eof", "", line, column))
    return tokens


class _Parser:
    """Recursive-descent parser over the token list"""

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        if token.kind != "eof":
            self.index += 1
        return token

    def fail(self, expected: str, token: Optional[Token] = None) -> BifSyntaxError:
        token = token or self.peek()
        found = token.text if token.kind != "eof" else "end of file"
        return BifSyntaxError(token.line, token.column, expected, found)

    def expect_punct(self, symbol: str) -> Token:
        token = self.peek()
        if token.kind != "punct" or token.text != symbol:
            raise self.fail(f"'{symbol}'")
        return self.advance()

    def expect_word(self, what: str = "a name", value: Optional[str] = None) -> Token:
        token = self.peek()
        if token.kind != "word" or (value is not None and token.text != value):
            raise self.fail(f"'{value}'" if value else what)
        return self.advance()

    def at_punct(self, symbol: str) -> bool:
        token = self.peek()
        return token.kind == "punct" and token.text == symbol

    def word_list(self, closing: str) -> List[str]:
        words = [self.expect_word().text]
        while self.at_punct(","):
            self.advance()
            words.append(self.expect_word().text)
        self.expect_punct(closing)
        return words

    def numbers(self) -> List[float]:
        values = []
        while True:
            token = self.expect_word("a probability")
            try:
                values.append(float(token.text))
            except ValueError:
                raise self.fail("a probability", token) from None
            if self.at_punct(","):
                self.advance()
                continue
            self.expect_punct(";")
            return values

    def parse(self) -> BifDocument:
        document = BifDocument()
        while self.peek().kind != "eof":
            keyword = self.expect_word("'network', 'variable' or 'probability'")
            if keyword.text == "network":
                self.parse_network(document)
            elif keyword.text == "variable":
                document.variables.append(self.parse_variable())
            elif keyword.text == "probability":
                document.probabilities.append(self.parse_probability())
            else:
                raise self.fail("'network', 'variable' or 'probability'", keyword)
        return document

    def parse_network(self, document: BifDocument) -> None:
        document.name = self.expect_word("a network name").text
        self.expect_punct("{")
        while not self.at_punct("}"):
            token = self.peek()
            if token.kind != "property":
                raise self.fail("'property' or '}'")
            document.properties.append(self.advance().text)
        self.expect_punct("}")

    def parse_variable(self) -> BifVariable:
        name = self.expect_word("a variable name").text
        variable = BifVariable(name, [])
        declared = None
        self.expect_punct("{")
        while not self.at_punct("}"):
            token = self.peek()
            if token.kind == "property":
                variable.properties.append(self.advance().text)
                continue
            self.expect_word("'type' or 'property'", "type")
            self.expect_word("'discrete'", "discrete")
            self.expect_punct("[")
            size = self.expect_word("a level count")
            if not size.text.isdigit():
                raise self.fail("a level count", size)
            declared = int(size.text)
            self.expect_punct("]")
            self.expect_punct("{")
            variable.levels = self.word_list("}")
            self.expect_punct(";")
        self.expect_punct("}")
        block = f"variable {name}"
        if declared is None:
            raise BifSemanticError("no 'type discrete' declaration", block)
        if declared != len(variable.levels):
            raise BifSemanticError(
                f"declares {declared} levels but lists {len(variable.levels)}", block
            )
        if len(set(variable.levels)) != len(variable.levels):
            raise BifSemanticError("duplicate level labels", block)
        return variable

    def parse_probability(self) -> BifProbability:
        self.expect_punct("(")
        child = self.expect_word("a variable name").text
        parents: List[str] = []
        if self.at_punct("|"):
            self.advance()
            parents = self.word_list(")")
        else:
            self.expect_punct(")")
        block = BifProbability(child, parents)
        self.expect_punct("{")
        while not self.at_punct("}"):
            token = self.peek()
            if token.kind == "property":
                block.properties.append(self.advance().text)
            elif token.kind == "word" and token.text == "table":
                self.advance()
                block.table = self.numbers()
            elif token.kind == "word" and token.text == "default":
                self.advance()
                block.default = self.numbers()
            elif token.kind == "punct" and token.text == "(":
                self.advance()
                levels = tuple(self.word_list(")"))
                block.entries.append((levels, self.numbers(), token))
            else:
                raise self.fail("'table', 'default', '(' or '}'")
        self.expect_punct("}")
        return block


def parse_bif_document(text: str) -> BifDocument:
    """Parse BIF text into its blocks without building a network"""
    return _Parser(text).parse()


def _check_row(values: Sequence[float], expected: int, where: str, block: str) -> np.ndarray:
    if len(values) != expected:
        raise BifSemanticError(f"{where} has {len(values)} values, expected {expected}", block)
    row = np.asarray(values, dtype=float)
    if np.any(row < 0) or not np.all(np.isfinite(row)):
        raise BifSemanticError(f"{where} has a negative or non-finite probability", block)
    total = float(row.sum())
    if abs(total - 1) > ROW_SUM_TOLERANCE:
        raise BifSemanticError(f"{where} sums to {total:.6g}, not 1", block)
    return row / total


def _block_table(
    block: BifProbability, child: BifVariable, parents: List[BifVariable]
) -> np.ndarray:
    """Rows in listed-parent order, shape (q, r)"""
    label = block.label
    r = len(child.levels)
    cards = [len(p.levels) for p in parents]
    q = math.prod(cards)
    if block.table is not None and block.entries:
        raise BifSemanticError("mixes a flat table with configuration entries", label)

    rows = np.zeros((q, r))
    if block.table is not None:
        if len(block.table) != q * r:
            raise BifSemanticError(
                f"table has {len(block.table)} values, expected {q * r}", label
            )
        for j in range(q):
            rows[j] = _check_row(block.table[j * r:(j + 1) * r], r, f"row {j}", label)
        return rows

    filled = np.zeros(q, dtype=bool)
    for levels, values, _ in block.entries:
        if len(levels) != len(parents):
            raise BifSemanticError(
                f"configuration {levels} names {len(levels)} levels for {len(parents)} parents",
                label,
            )
        index = 0
        for level, parent in zip(levels, parents):
            if level not in parent.levels:
                raise BifSemanticError(f"{level!r} is not a level of {parent.name}", label)
            index = index * len(parent.levels) + parent.levels.index(level)
        if filled[index]:
            raise BifSemanticError(f"configuration {levels} given twice", label)
        rows[index] = _check_row(values, r, f"row ({', '.join(levels)})", label)
        filled[index] = True
    if not filled.all():
        if block.default is None:
            missing = int(np.flatnonzero(~filled)[0])
            levels = np.unravel_index(missing, cards) if cards else ()
            names = ", ".join(p.levels[int(k)] for p, k in zip(parents, levels))
            raise BifSemanticError(f"no row for configuration ({names})", label)
        rows[~filled] = _check_row(block.default, r, "default row", label)
    return rows


def _build_bn(document: BifDocument) -> Bn:
    index: Dict[str, int] = {}
    for position, variable in enumerate(document.variables):
        if variable.name in index:
            raise BifSemanticError("declared twice", f"variable {variable.name}")
        index[variable.name] = position
    if not document.variables:
        raise BifSemanticError("document declares no variables", "network")

    blocks: Dict[str, BifProbability] = {}
    for block in document.probabilities:
        for name in [block.child] + block.parents:
            if name not in index:
                raise BifSemanticError(f"undeclared variable {name}", block.label)
        if block.child in blocks:
            raise BifSemanticError("duplicate probability block", block.label)
        if block.child in block.parents or len(set(block.parents)) != len(block.parents):
            raise BifSemanticError("invalid parent list", block.label)
        blocks[block.child] = block

    parent_sets = []
    cpts = []
    for variable in document.variables:
        block = blocks.get(variable.name)
        if block is None:
            raise BifSemanticError("missing probability block", f"variable {variable.name}")
        listed = [document.variables[index[p]] for p in block.parents]
        rows = _block_table(block, variable, listed)

        listed_ids = [index[p] for p in block.parents]
        sorted_ids = sorted(listed_ids)
        cards = [len(p.levels) for p in listed]
        r = len(variable.levels)
        axes = [listed_ids.index(i) for i in sorted_ids] + [len(listed_ids)]
        reordered = rows.reshape(tuple(cards) + (r,)).transpose(axes).reshape(-1, r)
        parent_sets.append(tuple(sorted_ids))
        cpts.append(
            Cpt(r, tuple(len(document.variables[i].levels) for i in sorted_ids), reordered)
        )

    dag = Dag(len(document.variables), tuple(parent_sets))
    if not is_acyclic(dag):
        raise BifSemanticError("cyclic parent structure", document.name)
    variables = tuple(Variable(v.name, tuple(v.levels)) for v in document.variables)
    logger.debug(f"Parsed network {document.name} with {len(variables)} variables")
    return Bn(dag, variables, tuple(cpts))


def parse_bif(text: str) -> Bn:
    """
    Parse BIF text into a network

    Args:
        text: Document text

    Returns:
        The network; node indices follow variable declaration order

    Raises:
        BifSyntaxError: Malformed text, with line and column
        BifSemanticError: Undeclared variables, bad rows, duplicates, cycles
    """
    try:
        return parse_bif_document(text).to_bn()
    except CyclicStructureError as e:
        raise BifSemanticError(str(e), "network") from None


def _quote(word: str) -> str:
    return word if _BARE_WORD.match(word) and word != "property" else f'"{word}"'


def emit_bif(bn: Bn, name: str = "bnstructure", properties: Sequence[str] = ()) -> str:
    """
    Write a network as BIF text

    Root tables use the flat ``table`` form and conditional tables one entry per
    parent configuration. Probabilities are written with ``repr`` so that
    parsing the output reproduces them exactly.

    Args:
        bn: Network to write
        name: Network name
        properties: Network-level property strings

    Returns:
        Document text
    """
    lines = [f"network {_quote(name)} {{"]
    lines += [f"  property {p};" for p in properties]
    lines.append("}")
    for variable in bn.variables:
        levels = ", ".join(_quote(level) for level in variable.levels)
        lines.append(f"variable {_quote(variable.name)} {{")
        lines.append(f"  type discrete [ {variable.cardinality} ] {{ {levels} }};")
        lines.append("}")
    for node, (variable, cpt) in enumerate(zip(bn.variables, bn.cpts)):
        parents = bn.dag.parents[node]
        parent_vars = [bn.variables[p] for p in parents]
        if parents:
            header = ", ".join(_quote(p.name) for p in parent_vars)
            lines.append(f"probability ( {_quote(variable.name)} | {header} ) {{")
            for j in range(cpt.config_count):
                levels = np.unravel_index(j, cpt.parent_cardinalities)
                labels = ", ".join(
                    _quote(p.levels[int(k)]) for p, k in zip(parent_vars, levels)
                )
                values = ", ".join(repr(float(x)) for x in cpt.table[j])
                lines.append(f"  ({labels}) {values};")
        else:
            lines.append(f"probability ( {_quote(variable.name)} ) {{")
            values = ", ".join(repr(float(x)) for x in cpt.table[0])
            lines.append(f"  table {values};")
        lines.append("}")
    return "\n".join(lines) + "\n"


def read_bif(path: Path) -> Bn:
    return parse_bif(Path(path).read_text(encoding="utf-8"))


def write_bif(path: Path, bn: Bn, name: Optional[str] = None) -> None:
    path = Path(path)
    path.write_text(emit_bif(bn, name or path.stem), encoding="utf-8")
    logger.info(f"Wrote network to {path}")
