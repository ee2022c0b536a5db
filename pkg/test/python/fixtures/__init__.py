"""
Test fixtures and utilities

Small hand-checkable datasets whose family scores have known closed-form
values, plus helpers to build datasets and graphs by variable name.
"""

from typing import Dict, List, Sequence, Tuple

BINARY = ("0", "1")

# Four variables: Y = Z and W; X given (Z, W) is two-to-one in one direction.
# Every (Z, W) configuration is observed three times with both X levels.
SPARSE_AND_NAMES = ["X", "Z", "W", "Y"]
SPARSE_AND_COUNTS: Dict[Tuple[str, str, str, str], int] = {
    ("0", "0", "0", "0"): 2,
    ("1", "0", "0", "0"): 1,
    ("0", "1", "0", "0"): 1,
    ("1", "1", "0", "0"): 2,
    ("0", "0", "1", "0"): 1,
    ("1", "0", "1", "0"): 2,
    ("0", "1", "1", "1"): 2,
    ("1", "1", "1", "1"): 1,
}

# X = Z xor W and Y = Z and W, three copies of each (Z, W) configuration.
XOR_AND_NAMES = ["X", "Z", "W", "Y"]
XOR_AND_COUNTS: Dict[Tuple[str, str, str, str], int] = {
    ("0", "0", "0", "0"): 3,
    ("1", "1", "0", "0"): 3,
    ("1", "0", "1", "0"): 3,
    ("0", "1", "1", "1"): 3,
}

# Two variables where Y never takes level 0.
CONSTANT_Y_NAMES = ["X", "Y"]
CONSTANT_Y_COUNTS: Dict[Tuple[str, str], int] = {
    ("0", "1"): 2,
    ("1", "1"): 5,
}


def expand_counts(counts: Dict[Tuple[str, ...], int]) -> List[List[str]]:
    """Rows repeated by their count, in insertion order"""
    rows: List[List[str]] = []
    for labels, count in counts.items():
        rows.extend([list(labels)] * count)
    return rows


def binary_levels(names: Sequence[str]) -> Dict[str, Tuple[str, str]]:
    return {name: BINARY for name in names}


def to_csv(names: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = [",".join(names)] + [",".join(row) for row in rows]
    return "\n".join(lines) + "\n"


UNIFORM_SINGLE_NODE_BIF = """\
network single {
}
variable A {
  type discrete [ 2 ] { a0, a1 };
}
probability ( A ) {
  table 0.5, 0.5;
}
"""

CHAIN_BIF = """\
// three-node chain A -> B -> C
network chain {
  property "note = test network";
}
variable A {
  type discrete [ 2 ] { yes, no };
}
variable B {
  type discrete [ 3 ] { low, mid, high };
}
variable C {
  type discrete [ 2 ] { off, on };
}
probability ( A ) {
  table 0.3, 0.7;
}
probability ( B | A ) {
  (yes) 0.2, 0.5, 0.3;
  (no) 0.6, 0.3, 0.1;
}
probability ( C | B ) {
  (low) 0.9, 0.1;
  (mid) 0.5, 0.5;
  default 0.1, 0.9;
}
"""
