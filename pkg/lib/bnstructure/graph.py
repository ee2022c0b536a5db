"""
Graph core - DAGs over indexed nodes, arc moves, CPDAGs and structural Hamming distance

Nodes are dense 0-based indices; variable names live in the data module.
Parent sets are stored sorted so every iteration order is deterministic.
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from .errors import (
    CyclicResultError,
    CyclicStructureError,
    DimensionMismatchError,
    IndexOutOfRangeError,
    InvalidMoveError,
)

logger = logging.getLogger(__name__)

Arc = Tuple[int, int]


@dataclass(frozen=True)
class Dag:
    """Directed graph over ``node_count`` indexed nodes, stored as parent sets

    The constructor checks well-formedness (indices, self-loops). Acyclicity is
    enforced by :meth:`from_arcs`, :func:`apply_move` and every other producer in
    this package; use :func:`is_acyclic` to test graphs built by hand.
    """

    node_count: int
    parents: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.node_count < 1:
            raise DimensionMismatchError(
                f"node_count must be positive, got {self.node_count}"
            )
        normalized = tuple(tuple(sorted(set(p))) for p in self.parents)
        if len(normalized) != self.node_count:
            raise DimensionMismatchError(
                f"expected {self.node_count} parent sets, got {len(normalized)}"
            )
        for child, parent_set in enumerate(normalized):
            for parent in parent_set:
                if not 0 <= parent < self.node_count:
                    raise IndexOutOfRangeError(
                        f"parent {parent} of node {child} is not a node index"
                    )
                if parent == child:
                    raise CyclicStructureError(f"self-loop on node {child}")
        object.__setattr__(self, "parents", normalized)

    @classmethod
    def empty(cls, node_count: int) -> "Dag":
        """Graph with no arcs"""
        return cls(node_count, tuple(() for _ in range(node_count)))

    @classmethod
    def from_arcs(
        cls, node_count: int, arcs: Iterable[Arc], check_acyclic: bool = True
    ) -> "Dag":
        """
        Build a graph from ``(from, to)`` pairs

        Args:
            node_count: Number of nodes
            arcs: Iterable of directed arcs
            check_acyclic: Raise CyclicStructureError when the arcs contain a cycle

        Returns:
            The graph
        """
        parent_sets: List[Set[int]] = [set() for _ in range(node_count)]
        for source, target in arcs:
            if not 0 <= target < node_count:
                raise IndexOutOfRangeError(f"arc target {target} is not a node index")
            parent_sets[target].add(source)
        dag = cls(node_count, tuple(tuple(p) for p in parent_sets))
        if check_acyclic and not is_acyclic(dag):
            raise CyclicStructureError("arc set contains a directed cycle")
        return dag

    @cached_property
    def arcs(self) -> Tuple[Arc, ...]:
        """All arcs sorted by (from, to)"""
        return tuple(
            sorted(
                (parent, child)
                for child, parent_set in enumerate(self.parents)
                for parent in parent_set
            )
        )

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    def has_arc(self, source: int, target: int) -> bool:
        return source in self.parents[target]

    def adjacent(self, a: int, b: int) -> bool:
        return self.has_arc(a, b) or self.has_arc(b, a)

    @cached_property
    def children(self) -> Tuple[Tuple[int, ...], ...]:
        kids: List[List[int]] = [[] for _ in range(self.node_count)]
        for source, target in self.arcs:
            kids[source].append(target)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def skeleton(self) -> FrozenSet[Arc]:
        """Unordered adjacencies as ``(min, max)`` pairs"""
        return frozenset((min(a, b), max(a, b)) for a, b in self.arcs)

    def vstructures(self) -> FrozenSet[Tuple[int, int, int]]:
        """Triples ``(a, c, b)`` with ``a -> c <- b``, ``a < b`` and a, b non-adjacent"""
        found = set()
        for child, parent_set in enumerate(self.parents):
            for a, b in itertools.combinations(parent_set, 2):
                if not self.adjacent(a, b):
                    found.add((a, child, b))
        return frozenset(found)

    @cached_property
    def _graph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.node_count))
        graph.add_edges_from(self.arcs)
        return graph

    def to_networkx(self) -> nx.DiGraph:
        """A fresh networkx copy of the graph"""
        return self._graph.copy()

    @cached_property
    def descendants(self) -> Tuple[FrozenSet[int], ...]:
        """Nodes reachable from each node (excluding itself)"""
        return tuple(
            frozenset(nx.descendants(self._graph, node))
            for node in range(self.node_count)
        )

    def topological_order(self) -> List[int]:
        """Smallest-index-first topological order"""
        return list(nx.lexicographical_topological_sort(self._graph))

    def with_parents(self, child: int, parent_set: Iterable[int]) -> "Dag":
        """Copy of the graph with the parents of ``child`` replaced (unchecked)"""
        updated = list(self.parents)
        updated[child] = tuple(parent_set)
        return Dag(self.node_count, tuple(updated))

    def __str__(self) -> str:
        if not self.arcs:
            return f"empty graph on {self.node_count} nodes"
        return ", ".join(f"{a}->{b}" for a, b in self.arcs)


def is_acyclic(dag: Dag) -> bool:
    """True iff the graph admits a topological order"""
    return nx.is_directed_acyclic_graph(dag._graph)


class MoveKind(Enum):
    """Single-arc operations, declared in enumeration order"""

    ADD = "add"
    DELETE = "delete"
    REVERSE = "reverse"


@dataclass(frozen=True)
class ArcMove:
    """Add, delete or reverse the arc ``source -> target``"""

    kind: MoveKind
    source: int
    target: int

    def __post_init__(self):
        if self.source == self.target:
            raise InvalidMoveError(f"move endpoints coincide: {self.source}")

    @property
    def arc(self) -> Arc:
        return (self.source, self.target)

    def __str__(self) -> str:
        return f"{self.kind.value}({self.source}->{self.target})"


def _check_move(dag: Dag, move: ArcMove) -> None:
    for endpoint in move.arc:
        if not 0 <= endpoint < dag.node_count:
            raise IndexOutOfRangeError(f"{move} references node {endpoint}")
    present = dag.has_arc(move.source, move.target)
    if move.kind is MoveKind.ADD and present:
        raise InvalidMoveError(f"{move}: arc already present")
    if move.kind is not MoveKind.ADD and not present:
        raise InvalidMoveError(f"{move}: arc not present")


def creates_cycle(dag: Dag, move: ArcMove) -> bool:
    """
    Whether applying a (precondition-satisfying) move would close a cycle

    Args:
        dag: Acyclic starting graph
        move: Candidate move

    Returns:
        True if the resulting graph would be cyclic
    """
    if move.kind is MoveKind.DELETE:
        return False
    if move.kind is MoveKind.ADD:
        return move.source in dag.descendants[move.target]
    # reversal: any other directed path source ~> target becomes a cycle
    return any(
        move.target in dag.descendants[child]
        for child in dag.children[move.source]
        if child != move.target
    )


def apply_move(dag: Dag, move: ArcMove) -> Dag:
    """
    Apply a single-arc move

    Args:
        dag: Acyclic graph
        move: Move whose preconditions hold on ``dag``

    Returns:
        The modified graph, always acyclic

    Raises:
        InvalidMoveError: Preconditions violated
        CyclicResultError: The move would create a cycle
    """
    _check_move(dag, move)
    if creates_cycle(dag, move):
        raise CyclicResultError(f"{move} would create a directed cycle")

    source, target = move.source, move.target
    if move.kind is MoveKind.ADD:
        return dag.with_parents(target, dag.parents[target] + (source,))
    without = dag.with_parents(target, (p for p in dag.parents[target] if p != source))
    if move.kind is MoveKind.DELETE:
        return without
    return without.with_parents(source, dag.parents[source] + (target,))


@dataclass(frozen=True)
class Cpdag:
    """Partially directed graph; undirected edges are stored as ``(min, max)``"""

    node_count: int
    directed_arcs: FrozenSet[Arc]
    undirected_edges: FrozenSet[Arc]

    def __post_init__(self):
        undirected = frozenset((min(a, b), max(a, b)) for a, b in self.undirected_edges)
        object.__setattr__(self, "undirected_edges", undirected)
        object.__setattr__(self, "directed_arcs", frozenset(self.directed_arcs))
        for a, b in itertools.chain(self.directed_arcs, undirected):
            if a == b:
                raise CyclicStructureError(f"self-loop on node {a}")
            for endpoint in (a, b):
                if not 0 <= endpoint < self.node_count:
                    raise IndexOutOfRangeError(f"edge endpoint {endpoint} out of range")
        overlap = {(min(a, b), max(a, b)) for a, b in self.directed_arcs} & undirected
        if overlap:
            raise InvalidMoveError(f"pairs both directed and undirected: {sorted(overlap)}")

    @classmethod
    def all_directed(cls, dag: Dag) -> "Cpdag":
        """The DAG itself viewed as a PDAG with every arc directed"""
        return cls(dag.node_count, frozenset(dag.arcs), frozenset())

    def edge_state(self, a: int, b: int) -> str:
        """State of the pair {a, b} seen from ``a``: none, forward, backward or undirected"""
        if (min(a, b), max(a, b)) in self.undirected_edges:
            return "undirected"
        if (a, b) in self.directed_arcs:
            return "forward"
        if (b, a) in self.directed_arcs:
            return "backward"
        return "none"

    def __str__(self) -> str:
        parts = [f"{a}->{b}" for a, b in sorted(self.directed_arcs)]
        parts += [f"{a}--{b}" for a, b in sorted(self.undirected_edges)]
        return ", ".join(parts) if parts else f"empty graph on {self.node_count} nodes"


class _Pdag:
    """Mutable working copy used while closing orientation rules"""

    def __init__(self, directed: Set[Arc], undirected: Set[Arc]):
        self.directed = directed
        self.undirected = undirected

    def adjacent(self, a: int, b: int) -> bool:
        return (
            (a, b) in self.directed
            or (b, a) in self.directed
            or (min(a, b), max(a, b)) in self.undirected
        )

    def linked(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.undirected

    def orient(self, a: int, b: int) -> None:
        self.undirected.discard((min(a, b), max(a, b)))
        self.directed.add((a, b))

    def compelled(self, u: int, v: int, nodes: range) -> bool:
        """Whether u -- v must be oriented u -> v by the orientation rules"""
        # rule 1: w -> u -- v with w, v non-adjacent
        for w in nodes:
            if (w, u) in self.directed and w != v and not self.adjacent(w, v):
                return True
        # rule 2: u -> w -> v
        for w in nodes:
            if (u, w) in self.directed and (w, v) in self.directed:
                return True
        # rule 3: u -- w1 -> v and u -- w2 -> v with w1, w2 non-adjacent
        feeders = [
            w for w in nodes if w != u and self.linked(u, w) and (w, v) in self.directed
        ]
        for w1, w2 in itertools.combinations(feeders, 2):
            if not self.adjacent(w1, w2):
                return True
        return False


def to_cpdag(dag: Dag) -> Cpdag:
    """
    Completed PDAG of the Markov-equivalence class of ``dag``

    Arcs taking part in v-structures are compelled; the remaining skeleton is
    closed under the orientation rules until no edge changes.

    Args:
        dag: Acyclic graph

    Returns:
        CPDAG with compelled arcs directed and reversible arcs undirected
    """
    pdag = _Pdag(set(), set(dag.skeleton))
    for a, c, b in sorted(dag.vstructures()):
        pdag.orient(a, c)
        pdag.orient(b, c)

    nodes = range(dag.node_count)
    changed = True
    while changed:
        changed = False
        for a, b in sorted(pdag.undirected):
            if (a, b) not in pdag.undirected:
                continue
            for u, v in ((a, b), (b, a)):
                if pdag.compelled(u, v, nodes):
                    pdag.orient(u, v)
                    changed = True
                    break

    return Cpdag(dag.node_count, frozenset(pdag.directed), frozenset(pdag.undirected))


def shd(a: Cpdag, b: Cpdag) -> int:
    """
    Structural Hamming distance between two partially directed graphs

    Every unordered pair whose state differs (missing, extra, flipped,
    directed vs undirected) costs one edit.

    Args:
        a: First graph
        b: Second graph

    Returns:
        Number of edge edits

    Raises:
        DimensionMismatchError: Graphs have different node counts
    """
    if a.node_count != b.node_count:
        raise DimensionMismatchError(
            f"cannot compare graphs on {a.node_count} and {b.node_count} nodes"
        )
    return sum(
        1
        for i, j in itertools.combinations(range(a.node_count), 2)
        if a.edge_state(i, j) != b.edge_state(i, j)
    )


def shd_dag(a: Dag, b: Dag) -> int:
    """SHD computed on the DAGs themselves, ignoring equivalence classes"""
    return shd(Cpdag.all_directed(a), Cpdag.all_directed(b))


def structural_hamming_distance(g1: Dag, g2: Dag, dag_level: bool = False) -> int:
    """SHD between two DAGs, on their CPDAGs unless ``dag_level`` is set"""
    if dag_level:
        return shd_dag(g1, g2)
    return shd(to_cpdag(g1), to_cpdag(g2))


def is_markov_equivalent(g1: Dag, g2: Dag) -> bool:
    """Same skeleton and same v-structures"""
    return g1.skeleton == g2.skeleton and g1.vstructures() == g2.vstructures()


def arc_labels(dag: Dag, names: Optional[List[str]] = None) -> List[str]:
    """Human-readable arcs, using variable names when given"""
    label = (lambda i: names[i]) if names else str
    return [f"{label(a)} -> {label(b)}" for a, b in dag.arcs]

