"""Cover-label graphs on {1..n} and their connected-component partitions.

An interval's atom labels, read as edges a--b for each labeling
transposition (a b), form a simple graph on the vertex set {1..n}; the
coatom labels form a second graph.  Their connected-component partitions
always coincide, and that shared partition is what the extremal bounds in
:mod:`bruhatkit.extremal` are computed from.  A disagreement between the
two partitions can only come from an implementation bug, so it is raised
as a hard error rather than returned as data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .order import Interval, LeqFn, atom_labels, coatom_labels
from .perm import Transposition


class ComponentMismatchError(RuntimeError):
    """Atom-side and coatom-side component partitions disagree."""


@dataclass(frozen=True)
class LabeledGraph:
    """A simple graph on vertices {1..n} with transposition-labeled edges."""

    n: int
    edges: frozenset[Transposition]

    def __post_init__(self):
        for t in self.edges:
            if t.b > self.n:
                raise ValueError(f"edge ({t.a} {t.b}) outside vertex set 1..{self.n}")

    def sorted_edges(self) -> list[Transposition]:
        return sorted(self.edges)


@dataclass(frozen=True)
class SetPartition:
    """A partition of {1..n} in canonical form.

    Blocks are sorted ascending internally and ordered by their minimum
    element, so equality of partitions is plain structural equality.
    """

    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def from_blocks(cls, blocks) -> "SetPartition":
        canonical = tuple(sorted((tuple(sorted(b)) for b in blocks), key=min))
        seen: set[int] = set()
        for block in canonical:
            if not block:
                raise ValueError("empty block")
            if seen.intersection(block):
                raise ValueError("blocks are not disjoint")
            seen.update(block)
        if seen != set(range(1, len(seen) + 1)):
            raise ValueError(f"blocks do not cover 1..{len(seen)}: {canonical!r}")
        return cls(canonical)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_sizes(self) -> tuple[int, ...]:
        """Multiset of block sizes, ascending."""
        return tuple(sorted(len(b) for b in self.blocks))


class UnionFind:
    """Disjoint sets over {1..n} with path compression and size union."""

    def __init__(self, n: int):
        self.parent = list(range(n + 1))
        self.size = [1] * (n + 1)

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        i, j = self.find(i), self.find(j)
        if i == j:
            return
        if self.size[i] < self.size[j]:
            i, j = j, i
        self.parent[j] = i
        self.size[i] += self.size[j]


def atom_graph(interval: Interval, leq: Optional[LeqFn] = None) -> LabeledGraph:
    """Graph on {1..n} whose edges are the interval's atom labels."""
    return LabeledGraph(interval.n, atom_labels(interval, leq).labels)


def coatom_graph(interval: Interval, leq: Optional[LeqFn] = None) -> LabeledGraph:
    """Graph on {1..n} whose edges are the interval's coatom labels."""
    return LabeledGraph(interval.n, coatom_labels(interval, leq).labels)


def components(graph: LabeledGraph) -> SetPartition:
    """Connected-component partition of the graph; singletons for isolated
    vertices, so the edgeless graph yields n singleton blocks."""
    uf = UnionFind(graph.n)
    for t in graph.edges:
        uf.union(t.a, t.b)
    blocks: dict[int, list[int]] = {}
    for i in range(1, graph.n + 1):
        blocks.setdefault(uf.find(i), []).append(i)
    return SetPartition.from_blocks(blocks.values())


def check_components_equal(interval: Interval, leq: Optional[LeqFn] = None) -> bool:
    """Whether the atom-side and coatom-side component partitions agree.

    This holds for every interval; a False return indicates a bug and is
    treated as a hard verification failure by the checking harness.
    """
    return components(atom_graph(interval, leq)) == components(
        coatom_graph(interval, leq)
    )


def component_sizes(interval: Interval, leq: Optional[LeqFn] = None) -> tuple[int, ...]:
    """Block sizes of the common component partition, ascending.

    Raises :class:`ComponentMismatchError` if the two partitions disagree.
    """
    atom_part = components(atom_graph(interval, leq))
    coatom_part = components(coatom_graph(interval, leq))
    if atom_part != coatom_part:
        raise ComponentMismatchError(
            f"component partitions disagree on {interval!r}: "
            f"atom side {atom_part.blocks}, coatom side {coatom_part.blocks}"
        )
    return atom_part.block_sizes()


def to_dot(graph: LabeledGraph, label: str) -> str:
    """Render the graph as DOT: numbered vertices, undirected edges, and a
    graph label naming the side ("atom" or "coatom")."""
    lines = ["graph {", f'  label="{label}";']
    for i in range(1, graph.n + 1):
        lines.append(f"  {i};")
    for t in graph.sorted_edges():
        lines.append(f"  {t.a} -- {t.b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
