"""Proper colorings, independent sets, exact minimum-entropy coloring, and
color covers for length-n relay schemes.

Minimum-entropy coloring is NP-hard in general; the exact search below is a
branch-and-bound over canonical color assignments (colors numbered by first
appearance in vertex order) and is intended for desk-scale graphs.  Pruning
combines three lower bounds on any completion of a partial coloring:

* all remaining mass merged into one class (concavity: the minimum over a
  simplex of a concave function sits at a vertex);
* a chord bound: each class mass can only grow to the mass of the vertices
  still compatible with it, and -x*log2(x) lies above its chords;
* a ceiling bound: if every final class mass is at most M, the entropy is at
  least -log2(M).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import CapExceededError, InstanceFormatError
from .graphs import (
    Graph,
    ProbabilisticGraph,
    ProductGraph,
    _render_label,
    f_rook_graph,
    or_product,
    product_distribution,
)
from .model import ProblemInstance, support

__all__ = [
    "Coloring",
    "ColorCover",
    "CoverViolation",
    "CoverCheck",
    "MinEntropyColoring",
    "is_coloring",
    "maximal_independent_sets",
    "independence_number",
    "chromatic_entropy",
    "chromatic_entropy_bound",
    "chromatic_entropy_product",
    "enumerate_proper_colorings",
    "verify_color_cover",
    "coloring_entropy",
    "coloring_to_text",
    "cover_to_text",
]

DEFAULT_EXACT_CAP = 16
DEFAULT_MIS_CAP = 24
DEFAULT_PAIRWISE_BUDGET = 10**4
ENTROPY_TOL = 1e-12


def _phi(x: float) -> float:
    return -x * math.log2(x) if x > 0.0 else 0.0


@dataclass(frozen=True)
class Coloring:
    """Vertex-indexed color assignment with contiguous ids 0..k-1."""

    assignment: tuple[int, ...]

    def __post_init__(self) -> None:
        used = set(self.assignment)
        if used and used != set(range(len(used))):
            raise InstanceFormatError("color ids must be contiguous from 0 and all used")

    @property
    def num_colors(self) -> int:
        return len(set(self.assignment))

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_colors)]
        for v, c in enumerate(self.assignment):
            out[c].append(v)
        return out

    def canonical(self) -> "Coloring":
        return Coloring(canonical_assignment(self.assignment))

    @property
    def is_canonical(self) -> bool:
        return self.assignment == canonical_assignment(self.assignment)


def canonical_assignment(assignment: Sequence[int]) -> tuple[int, ...]:
    """Renumber colors by first appearance in vertex order."""
    seen: dict[int, int] = {}
    out = []
    for c in assignment:
        if c not in seen:
            seen[c] = len(seen)
        out.append(seen[c])
    return tuple(out)


def coloring_entropy(dist: Sequence[Fraction], assignment: Sequence[int]) -> float:
    """Shannon entropy in bits of the color of a random vertex."""
    masses: dict[int, Fraction] = {}
    for v, c in enumerate(assignment):
        masses[c] = masses.get(c, Fraction(0)) + dist[v]
    return sum(_phi(float(m)) for m in masses.values())


def is_coloring(
    g: Graph | ProductGraph,
    coloring: Sequence[int] | Mapping[tuple[int, ...], int],
    pairwise_budget: int = DEFAULT_PAIRWISE_BUDGET,
) -> bool:
    """True iff no edge is monochromatic.

    For a product graph the map must be total on vertex tuples and the
    vertex count must fit the pairwise budget.
    """
    if isinstance(g, ProductGraph):
        if g.vertex_count > pairwise_budget:
            raise CapExceededError(
                f"{g.vertex_count} product vertices exceed pairwise budget {pairwise_budget}"
            )
        if not isinstance(coloring, Mapping):
            raise TypeError("product-graph coloring must map vertex tuples to colors")
        by_color: dict[int, list[tuple[int, ...]]] = {}
        for vt in g.iter_vertices():
            by_color.setdefault(coloring[vt], []).append(vt)
        return not any(
            g.adjacent(u, v)
            for group in by_color.values()
            for u, v in itertools.combinations(group, 2)
        )
    assign = coloring if not isinstance(coloring, Mapping) else [coloring[i] for i in range(g.n)]
    return all(assign[i] != assign[j] for i, j in g.edges)


def maximal_independent_sets(g: Graph, cap: int = DEFAULT_MIS_CAP) -> list[frozenset[int]]:
    """All inclusion-maximal independent sets, sorted for determinism.

    Bron-Kerbosch with pivoting on the complement graph.
    """
    if g.n > cap:
        raise CapExceededError(f"{g.n} vertices exceed independent-set cap {cap}")
    n = g.n
    full = (1 << n) - 1
    # complement adjacency: non-neighbors excluding self
    comp = [full & ~g.adjacency_bits[v] & ~(1 << v) for v in range(n)]
    out: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if p == 0 and x == 0:
            out.append(r)
            return
        pivot_pool = p | x
        pivot = (pivot_pool & -pivot_pool).bit_length() - 1
        best, best_deg = pivot, -1
        pool = pivot_pool
        while pool:
            u = (pool & -pool).bit_length() - 1
            pool &= pool - 1
            d = (comp[u] & p).bit_count()
            if d > best_deg:
                best, best_deg = u, d
        cand = p & ~comp[best]
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            bit = 1 << v
            expand(r | bit, p & comp[v], x & comp[v])
            p &= ~bit
            x |= bit
    if n:
        expand(0, full, 0)
    sets = [frozenset(_bits_to_list(mask)) for mask in out]
    sets.sort(key=lambda s: sorted(s))
    return sets


def _bits_to_list(mask: int) -> list[int]:
    out = []
    while mask:
        v = (mask & -mask).bit_length() - 1
        mask &= mask - 1
        out.append(v)
    return out


def independence_number(g: Graph) -> int:
    """Size of a maximum independent set (exact, branch and bound)."""
    adj = g.adjacency_bits
    best = 0

    def rec(cand: int, size: int) -> None:
        nonlocal best
        if size + cand.bit_count() <= best:
            return
        if cand == 0:
            best = max(best, size)
            return
        v = (cand & -cand).bit_length() - 1
        rec(cand & ~(1 << v) & ~adj[v], size + 1)
        rec(cand & ~(1 << v), size)

    rec((1 << g.n) - 1, 0)
    return best


@dataclass(frozen=True)
class MinEntropyColoring:
    value_bits: float
    coloring: Coloring
    exact: bool


def _greedy_order_ub(adj: Sequence[int], masses: Sequence[float], order: Iterable[int]) -> tuple[float, list[int]]:
    class_mask: list[int] = []
    class_mass: list[float] = []
    assign = [0] * len(adj)
    for v in order:
        best_c, best_m = -1, -1.0
        for ci in range(len(class_mask)):
            if not (adj[v] & class_mask[ci]) and class_mass[ci] > best_m:
                best_c, best_m = ci, class_mass[ci]
        if best_c < 0:
            best_c = len(class_mask)
            class_mask.append(0)
            class_mass.append(0.0)
        class_mask[best_c] |= 1 << v
        class_mass[best_c] += masses[v]
        assign[v] = best_c
    return sum(_phi(m) for m in class_mass), assign


def _peel_ub(adj: Sequence[int], masses: Sequence[float], n: int) -> tuple[float, list[int]]:
    """Repeatedly peel a greedy max-mass independent set into one class."""
    remaining = (1 << n) - 1
    assign = [0] * n
    total = 0.0
    color = 0
    while remaining:
        cand = remaining
        mass = 0.0
        while cand:
            best_v, best_w = -1, -1.0
            c = cand
            while c:
                v = (c & -c).bit_length() - 1
                c &= c - 1
                if masses[v] > best_w:
                    best_v, best_w = v, masses[v]
            assign[best_v] = color
            mass += masses[best_v]
            remaining &= ~(1 << best_v)
            cand &= ~(1 << best_v) & ~adj[best_v]
        total += _phi(mass)
        color += 1
    return total, assign


def chromatic_entropy_bound(pg: ProbabilisticGraph) -> MinEntropyColoring:
    """Heuristic upper bound on the minimum coloring entropy (not exact)."""
    g = pg.graph
    masses = [float(p) for p in pg.dist]
    adj = g.adjacency_bits
    candidates = [
        _greedy_order_ub(adj, masses, sorted(range(g.n), key=lambda v: -masses[v])),
        _greedy_order_ub(adj, masses, range(g.n)),
        _greedy_order_ub(adj, masses, sorted(range(g.n), key=lambda v: (-g.degree(v), v))),
        _peel_ub(adj, masses, g.n),
    ]
    value, assign = min(candidates, key=lambda t: t[0])
    return MinEntropyColoring(value, Coloring(canonical_assignment(assign)), exact=False)


def chromatic_entropy(
    pg: ProbabilisticGraph, max_vertices: int = DEFAULT_EXACT_CAP
) -> MinEntropyColoring:
    """Exact minimum entropy over all proper colorings, with a witness.

    The witness is the lexicographically smallest canonical optimal
    assignment; ties in value are resolved within an absolute 1e-12.
    """
    g = pg.graph
    n = g.n
    if n > max_vertices:
        raise CapExceededError(
            f"{n} vertices exceed exact-search cap {max_vertices}; "
            "raise the cap or use chromatic_entropy_bound"
        )
    masses = [float(p) for p in pg.dist]
    adj = g.adjacency_bits
    alpha = independence_number(g)

    suffix_mass = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix_mass[i] = suffix_mass[i + 1] + masses[i]
    top_alpha = [sum(sorted(masses[k:], reverse=True)[:alpha]) for k in range(n + 1)]
    suffix_bits = [0] * (n + 1)
    for k in range(n - 1, -1, -1):
        suffix_bits[k] = suffix_bits[k + 1] | (1 << k)

    best_value = chromatic_entropy_bound(pg).value_bits + 1e-9
    best_assign: list[int] | None = None
    assign = [0] * n
    class_mask: list[int] = []
    class_mass: list[float] = []
    class_compat: list[int] = []  # vertices not yet placed and compatible

    phi = _phi
    log2 = math.log2

    def rec(k: int, partial: float) -> None:
        nonlocal best_value, best_assign
        if k == n:
            if partial < best_value - ENTROPY_TOL:
                best_value = partial
                best_assign = assign[:]
            return
        remaining = suffix_mass[k]
        cap_new = top_alpha[k]
        min_slope = -log2(cap_new) if cap_new > 0 else 0.0
        into_one = partial + phi(remaining)
        mass_ceiling = cap_new
        for ci in range(len(class_mass)):
            m = class_mass[ci]
            grown = m
            c = class_compat[ci]
            while c:
                v = (c & -c).bit_length() - 1
                c &= c - 1
                grown += masses[v]
            if grown > m:
                slope = (phi(grown) - phi(m)) / (grown - m)
                if slope < min_slope:
                    min_slope = slope
            if grown > mass_ceiling:
                mass_ceiling = grown
            merged = partial - phi(m) + phi(m + remaining)
            if merged < into_one:
                into_one = merged
        bound = partial + remaining * min_slope
        if into_one > bound:
            bound = into_one
        if mass_ceiling > 0 and -log2(mass_ceiling) > bound:
            bound = -log2(mass_ceiling)
        if bound >= best_value - ENTROPY_TOL:
            return
        w = masses[k]
        bit = 1 << k
        nadj = adj[k]
        k_classes = len(class_mass)
        for ci in range(k_classes):
            if nadj & class_mask[ci]:
                continue
            old_m = class_mass[ci]
            old_c = class_compat[ci]
            class_mask[ci] |= bit
            class_mass[ci] = old_m + w
            class_compat[ci] = old_c & ~nadj & ~bit
            touched = [cj for cj in range(k_classes) if cj != ci and class_compat[cj] & bit]
            for cj in touched:
                class_compat[cj] &= ~bit
            assign[k] = ci
            rec(k + 1, partial - phi(old_m) + phi(old_m + w))
            for cj in touched:
                class_compat[cj] |= bit
            class_mask[ci] &= ~bit
            class_mass[ci] = old_m
            class_compat[ci] = old_c
        class_mask.append(bit)
        class_mass.append(w)
        class_compat.append(suffix_bits[k + 1] & ~nadj)
        touched = [cj for cj in range(k_classes) if class_compat[cj] & bit]
        for cj in touched:
            class_compat[cj] &= ~bit
        assign[k] = k_classes
        rec(k + 1, partial + phi(w))
        for cj in touched:
            class_compat[cj] |= bit
        class_mask.pop()
        class_mass.pop()
        class_compat.pop()

    if n:
        rec(0, 0.0)
    else:
        best_value, best_assign = 0.0, []
    assert best_assign is not None
    # recompute entropy from exact masses to undo accumulated float drift
    value = coloring_entropy(pg.dist, best_assign)
    return MinEntropyColoring(value, Coloring(tuple(best_assign)), exact=True)


@dataclass(frozen=True)
class ProductChromaticEntropy:
    value_bits_per_symbol: float
    coloring: Coloring
    graph: Graph
    n: int


def chromatic_entropy_product(
    pg: ProbabilisticGraph,
    n: int,
    max_vertices: int = DEFAULT_EXACT_CAP,
) -> ProductChromaticEntropy:
    """(1/n) x minimum coloring entropy of the n-fold OR power under the
    n-fold product distribution."""
    product = or_product(pg.graph, n)
    if product.vertex_count > max_vertices:
        raise CapExceededError(
            f"product has {product.vertex_count} vertices, exact cap is {max_vertices}"
        )
    graph = product.materialize(cap=max_vertices)
    dist = product_distribution(pg.dist, n)
    result = chromatic_entropy(ProbabilisticGraph(graph, dist), max_vertices=max_vertices)
    return ProductChromaticEntropy(result.value_bits / n, result.coloring, graph, n)


def enumerate_proper_colorings(g: Graph, budget: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every canonical proper coloring (partition into independent sets).

    Colorings come out in lexicographic order of the canonical assignment.
    Raises CapExceededError when more than `budget` colorings would be yielded.
    """
    n = g.n
    adj = g.adjacency_bits
    assign = [0] * n
    produced = 0

    def rec(k: int, class_masks: list[int]) -> Iterator[tuple[int, ...]]:
        nonlocal produced
        if k == n:
            produced += 1
            if budget is not None and produced > budget:
                raise CapExceededError(f"more than {budget} colorings")
            yield tuple(assign)
            return
        bit = 1 << k
        for ci in range(len(class_masks)):
            if adj[k] & class_masks[ci]:
                continue
            class_masks[ci] |= bit
            assign[k] = ci
            yield from rec(k + 1, class_masks)
            class_masks[ci] &= ~bit
        class_masks.append(bit)
        assign[k] = len(class_masks) - 1
        yield from rec(k + 1, class_masks)
        class_masks.pop()

    if n == 0:
        yield ()
        return
    yield from rec(0, [])


def coloring_to_text(g: Graph, coloring: Coloring) -> str:
    """One `vertex<TAB>color` line per vertex."""
    lines = [
        f"{_render_label(v)}\t{coloring.assignment[i]}"
        for i, v in enumerate(g.vertices)
    ]
    return "\n".join(lines) + "\n"


def cover_to_text(cover: "ColorCover") -> str:
    """Terminal and relay color tables plus the merge table."""
    lines = []
    for name, table in (("c_a", cover.c_a), ("c_b", cover.c_b), ("c_c", cover.c_c)):
        lines.append(f"[{name}]")
        for key in sorted(table):
            lines.append(",".join(map(str, key)) + f"\t{table[key]}")
    lines.append("[theta]")
    for (a, b), c in sorted(cover.theta.items()):
        lines.append(f"{a},{b}\t{c}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CoverViolation:
    kind: str  # "missing" | "product_edge" | "relay_edge" | "refinement"
    detail: str
    tuples: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class CoverCheck:
    ok: bool
    violation: CoverViolation | None = None


@dataclass(frozen=True)
class ColorCover:
    """Terminal colorings (on X^n and Y^n), a relay coloring on supported
    tuples, and the merge map theta witnessing that the pair coloring
    refines the relay coloring."""

    n: int
    c_a: Mapping[tuple[int, ...], int]
    c_b: Mapping[tuple[int, ...], int]
    c_c: Mapping[tuple[int, ...], int]  # keyed by tuples of support-cell ids
    theta: Mapping[tuple[int, int], int]


def support_tuples(inst: ProblemInstance, n: int, budget: int = DEFAULT_PAIRWISE_BUDGET):
    """All n-tuples of support cells, as (cells, x_tuple, y_tuple) triples."""
    pairs = support(inst).pairs
    if len(pairs) ** n > budget:
        raise CapExceededError(
            f"{len(pairs)**n} support tuples exceed budget {budget}"
        )
    out = []
    for cells in itertools.product(range(len(pairs)), repeat=n):
        xt = tuple(pairs[c][0] for c in cells)
        yt = tuple(pairs[c][1] for c in cells)
        out.append((cells, xt, yt))
    return out


def verify_color_cover(
    inst: ProblemInstance,
    n: int,
    cover: ColorCover,
    budget: int = DEFAULT_PAIRWISE_BUDGET,
) -> CoverCheck:
    """Exhaustively check the three cover conditions over supported tuples.

    On failure reports a violating edge (as a pair of support-cell tuples) or
    a refinement mismatch.
    """
    if cover.n != n:
        return CoverCheck(False, CoverViolation("missing", f"cover built for n={cover.n}", ()))
    base = f_rook_graph(inst)
    product = or_product(base, n)
    tuples = support_tuples(inst, n, budget)

    for cells, xt, yt in tuples:
        if xt not in cover.c_a or yt not in cover.c_b:
            return CoverCheck(False, CoverViolation("missing", "terminal color missing", (cells,)))
        if cells not in cover.c_c:
            return CoverCheck(False, CoverViolation("missing", "relay color missing", (cells,)))
        key = (cover.c_a[xt], cover.c_b[yt])
        if key not in cover.theta:
            return CoverCheck(False, CoverViolation("missing", f"theta missing for {key}", (cells,)))
        if cover.theta[key] != cover.c_c[cells]:
            return CoverCheck(
                False,
                CoverViolation("refinement", "theta(pair colors) != relay color", (cells,)),
            )

    def first_monochromatic_edge(color_of) -> tuple | None:
        by_color: dict = {}
        for cells, xt, yt in tuples:
            by_color.setdefault(color_of(cells, xt, yt), []).append(cells)
        for group in by_color.values():
            for u, v in itertools.combinations(group, 2):
                if product.adjacent(u, v):
                    return u, v
        return None

    bad = first_monochromatic_edge(lambda cells, xt, yt: (cover.c_a[xt], cover.c_b[yt]))
    if bad:
        return CoverCheck(
            False, CoverViolation("product_edge", "pair coloring hits an edge", bad)
        )
    bad = first_monochromatic_edge(lambda cells, xt, yt: cover.c_c[cells])
    if bad:
        return CoverCheck(
            False, CoverViolation("relay_edge", "relay coloring hits an edge", bad)
        )
    return CoverCheck(True, None)
