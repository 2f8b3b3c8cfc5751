"""Graph constructions: rook's grid, its function-aware restriction to the
support, per-terminal confusability graphs, and n-fold OR powers.

Vertices carry presentation labels; all adjacency work uses integer indices
with bitmask adjacency for speed.  Graphs are immutable after construction.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import CapExceededError, InstanceFormatError
from .model import ProblemInstance, marginals, support

__all__ = [
    "Graph",
    "ProbabilisticGraph",
    "ProductGraph",
    "rook_graph",
    "f_rook_graph",
    "f_rook_prob_graph",
    "confusability_graphs",
    "confusability_prob_graphs",
    "or_product",
    "product_distribution",
    "edge_list_text",
    "to_dot",
]

DEFAULT_MATERIALIZE_CAP = 10**6


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph; edges are index pairs (i, j) with i < j."""

    vertices: tuple[Hashable, ...]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        n = len(self.vertices)
        for i, j in self.edges:
            if not (0 <= i < j < n):
                raise ValueError(f"bad edge ({i}, {j}) on {n} vertices")

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency_bits(self) -> tuple[int, ...]:
        bits = [0] * self.n
        for i, j in self.edges:
            bits[i] |= 1 << j
            bits[j] |= 1 << i
        return tuple(bits)

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.adjacency_bits[i] >> j & 1)

    def neighbors(self, i: int) -> list[int]:
        return [j for j in range(self.n) if self.adjacent(i, j)]

    def degree(self, i: int) -> int:
        return self.adjacency_bits[i].bit_count()

    def index_of(self, label: Hashable) -> int:
        return self._index[label]

    @cached_property
    def _index(self) -> dict[Hashable, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = 1
        stack = [0]
        while stack:
            u = stack.pop()
            rest = self.adjacency_bits[u] & ~seen
            while rest:
                v = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                seen |= 1 << v
                stack.append(v)
        return seen == (1 << self.n) - 1


def graph_from_edges(vertices: Sequence[Hashable], pairs: Iterable[tuple[int, int]]) -> Graph:
    edges = frozenset((i, j) if i < j else (j, i) for i, j in pairs if i != j)
    return Graph(tuple(vertices), edges)


@dataclass(frozen=True)
class ProbabilisticGraph:
    """A graph together with an exact vertex distribution."""

    graph: Graph
    dist: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.dist) != self.graph.n:
            raise InstanceFormatError("distribution length must match vertex count")
        if any(p < 0 for p in self.dist):
            raise InstanceFormatError("negative vertex probability")
        if sum(self.dist, Fraction(0)) != 1:
            raise InstanceFormatError("vertex distribution must sum to exactly 1")


@dataclass(frozen=True)
class ProductGraph:
    """n-fold OR power of a base graph.

    Vertices are n-tuples of base vertex indices; two tuples are adjacent
    when at least one coordinate pair is a base edge.  Adjacency is answered
    in O(n) without materializing anything.
    """

    base: Graph
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("power must be a positive integer")

    @property
    def vertex_count(self) -> int:
        return self.base.n**self.n

    def adjacent(self, u: Sequence[int], v: Sequence[int]) -> bool:
        bits = self.base.adjacency_bits
        return any(bits[a] >> b & 1 for a, b in zip(u, v))

    def iter_vertices(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(range(self.base.n), repeat=self.n)

    def materialize(self, cap: int = DEFAULT_MATERIALIZE_CAP) -> Graph:
        """Explicit graph with tuple-of-labels vertices; capped by size."""
        if self.vertex_count > cap:
            raise CapExceededError(
                f"product has {self.vertex_count} vertices, cap is {cap}; "
                "use adjacency queries or raise the cap"
            )
        index_tuples = list(self.iter_vertices())
        labels = [tuple(self.base.vertices[i] for i in t) for t in index_tuples]
        edges = [
            (a, b)
            for a, b in itertools.combinations(range(len(index_tuples)), 2)
            if self.adjacent(index_tuples[a], index_tuples[b])
        ]
        return graph_from_edges(labels, edges)


def rook_graph(inst: ProblemInstance) -> Graph:
    """Grid graph on all of X x Y: cells sharing a row or a column are adjacent."""
    ny = inst.size_y
    cells = [(x, y) for x in inst.alphabet_x for y in inst.alphabet_y]
    pairs = []
    for a in range(len(cells)):
        ia, ja = divmod(a, ny)
        for b in range(a + 1, len(cells)):
            ib, jb = divmod(b, ny)
            if ia == ib or ja == jb:
                pairs.append((a, b))
    return graph_from_edges(cells, pairs)


def f_rook_graph(inst: ProblemInstance) -> Graph:
    """Rook adjacency restricted to the support, kept only where f differs.

    Vertex order is row-major over the support for reproducible output.
    """
    sup = support(inst).pairs
    labels = [(inst.alphabet_x[i], inst.alphabet_y[j]) for i, j in sup]
    pairs = []
    for a in range(len(sup)):
        ia, ja = sup[a]
        fa = inst.f(ia, ja)
        for b in range(a + 1, len(sup)):
            ib, jb = sup[b]
            if (ia == ib or ja == jb) and fa != inst.f(ib, jb):
                pairs.append((a, b))
    return graph_from_edges(labels, pairs)


def f_rook_prob_graph(inst: ProblemInstance) -> ProbabilisticGraph:
    """The support-restricted graph weighted by the joint pmf."""
    g = f_rook_graph(inst)
    dist = tuple(inst.pmf[i][j] for i, j in support(inst).pairs)
    return ProbabilisticGraph(g, dist)


def confusability_graphs(inst: ProblemInstance) -> tuple[Graph, Graph]:
    """Graphs on X and on Y joining symbols the other terminal can confuse.

    x ~ x' when some y makes both pairs supported with different f-values;
    symmetrically for y ~ y'.
    """
    sup = set(support(inst).pairs)
    gx_pairs = [
        (x1, x2)
        for x1 in range(inst.size_x)
        for x2 in range(x1 + 1, inst.size_x)
        if any(
            (x1, y) in sup and (x2, y) in sup and inst.f(x1, y) != inst.f(x2, y)
            for y in range(inst.size_y)
        )
    ]
    gy_pairs = [
        (y1, y2)
        for y1 in range(inst.size_y)
        for y2 in range(y1 + 1, inst.size_y)
        if any(
            (x, y1) in sup and (x, y2) in sup and inst.f(x, y1) != inst.f(x, y2)
            for x in range(inst.size_x)
        )
    ]
    gx = graph_from_edges(inst.alphabet_x, gx_pairs)
    gy = graph_from_edges(inst.alphabet_y, gy_pairs)
    return gx, gy


def confusability_prob_graphs(inst: ProblemInstance) -> tuple[ProbabilisticGraph, ProbabilisticGraph]:
    gx, gy = confusability_graphs(inst)
    px, py = marginals(inst)
    return ProbabilisticGraph(gx, px), ProbabilisticGraph(gy, py)


def or_product(g: Graph, n: int) -> ProductGraph:
    return ProductGraph(g, n)


def product_distribution(dist: Sequence[Fraction], n: int) -> tuple[Fraction, ...]:
    """i.i.d. n-fold product distribution in product (row-major) order."""
    out = [Fraction(1)]
    for _ in range(n):
        out = [p * q for p in out for q in dist]
    return tuple(out)


def _render_label(label: Hashable) -> str:
    if isinstance(label, tuple):
        return ",".join(_render_label(part) for part in label)
    return str(label)


def edge_list_text(g: Graph) -> str:
    """Vertex-list header followed by one `u -- v` line per edge."""
    lines = ["vertices: " + " ".join(_render_label(v) for v in g.vertices)]
    for i, j in sorted(g.edges):
        lines.append(f"{_render_label(g.vertices[i])} -- {_render_label(g.vertices[j])}")
    return "\n".join(lines) + "\n"


def to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    for v in g.vertices:
        lines.append(f'  "{_render_label(v)}";')
    for i, j in sorted(g.edges):
        lines.append(
            f'  "{_render_label(g.vertices[i])}" -- "{_render_label(g.vertices[j])}";'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
