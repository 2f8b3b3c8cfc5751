"""Shannon entropy, the graph-entropy solver, and an exact LP oracle.

Graph entropy of a probabilistic graph is the minimum of I(W;X) over random
independent sets W containing X.  Restricting W's alphabet to the maximal
independent sets is lossless: replacing any independent set by a maximal
superset is a deterministic post-processing of W, which cannot increase
I(W;X) and keeps the membership constraint.

The minimization is convex (the feasible set is a product of simplices) and
solved by alternating updates: q(w) <- sum_x p(x) p(w|x), then
p(w|x) proportional to q(w) over the sets containing x.  The fractional
chromatic LP is solved exactly over the rationals and serves as an
independent cross-check: on vertex-transitive graphs under the uniform
distribution the graph entropy equals log2 of the fractional chromatic
number.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .coloring import DEFAULT_MIS_CAP, DEFAULT_PAIRWISE_BUDGET, maximal_independent_sets, support_tuples
from .errors import CapExceededError, ZefcError
from .graphs import Graph, ProbabilisticGraph
from .model import ProblemInstance

__all__ = [
    "entropy",
    "binary_entropy",
    "ConditionalDesign",
    "GraphEntropyResult",
    "graph_entropy",
    "fractional_chromatic_lp",
    "conditional_entropy_of_f",
]

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10_000


def entropy(dist: Sequence[Fraction | float]) -> float:
    """Shannon entropy in bits, with 0*log(0) = 0."""
    total = 0.0
    for p in dist:
        x = float(p)
        if x > 0.0:
            total -= x * math.log2(x)
    return total


def binary_entropy(p: float | Fraction) -> float:
    return entropy([p, 1 - p])


@dataclass(frozen=True)
class ConditionalDesign:
    """Conditional distribution p(w|x) over maximal independent sets.

    Rows are indexed by vertices, columns by `sets`; p(w|x) > 0 only when
    the vertex belongs to the set.
    """

    sets: tuple[frozenset[int], ...]
    weights: np.ndarray

    def __post_init__(self) -> None:
        n, m = self.weights.shape
        if m != len(self.sets):
            raise ZefcError("weights width must match number of sets")
        membership = np.zeros((n, m), dtype=bool)
        for j, s in enumerate(self.sets):
            for v in s:
                membership[v, j] = True
        if np.any((self.weights > 0) & ~membership):
            raise ZefcError("p(w|x) > 0 for a set not containing x")
        rows = self.weights.sum(axis=1)
        if np.any(np.abs(rows - 1.0) > 1e-9):
            raise ZefcError("conditional rows must sum to 1 within 1e-9")
        if not membership.any(axis=1).all():
            raise ZefcError("every vertex must belong to at least one set")


@dataclass(frozen=True)
class GraphEntropyResult:
    value_bits: float
    design: ConditionalDesign
    converged: bool
    iterations: int
    trace: tuple[float, ...] = field(default=())


def _objective_bits(px: np.ndarray, p_wx: np.ndarray) -> float:
    """I(W;X) in bits for the given conditional design.

    Rows with zero source probability contribute nothing; masking them out
    also avoids overflow on their stale conditionals when some q(w) decays
    toward the boundary.
    """
    q = px @ p_wx
    select = (p_wx > 0) & (px > 0)[:, None]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        raw = p_wx * np.log2(
            np.where(select, p_wx, 1.0) / np.where(q > 0, q, 1.0)[None, :]
        )
    terms = np.where(select, raw, 0.0)
    # mutual information is nonnegative; shave float dust below zero
    return max(float(px @ terms.sum(axis=1)), 0.0)


def _alternating_run(
    px: np.ndarray,
    membership: np.ndarray,
    start: np.ndarray,
    tol: float,
    max_iter: int,
    record_trace: bool,
) -> tuple[float, np.ndarray, bool, int, list[float]]:
    p_wx = start
    prev = _objective_bits(px, p_wx)
    trace = [prev] if record_trace else []
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        q = px @ p_wx
        p_new = membership * q[None, :]
        norms = p_new.sum(axis=1, keepdims=True)
        # rows with all-zero q on their sets keep their previous values
        stuck = norms[:, 0] <= 0.0
        if np.any(stuck):
            p_new[stuck] = p_wx[stuck]
            norms = p_new.sum(axis=1, keepdims=True)
        p_wx = p_new / norms
        value = _objective_bits(px, p_wx)
        if record_trace:
            trace.append(value)
        if prev - value <= tol * max(1.0, abs(prev)):
            converged = True
            prev = min(prev, value)
            break
        prev = value
    return prev, p_wx, converged, iterations, trace


def graph_entropy(
    pg: ProbabilisticGraph,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    mis_cap: int = DEFAULT_MIS_CAP,
    record_trace: bool = False,
) -> GraphEntropyResult:
    """Minimize I(W;X) over independent sets W containing X.

    Returns the achieving design; `converged` is False when the iteration
    budget ran out, in which case the value is an upper bound only.
    """
    g = pg.graph
    sets = maximal_independent_sets(g, cap=mis_cap)
    if g.n == 0:
        raise ZefcError("empty graph")
    px = np.array([float(p) for p in pg.dist])
    membership = np.zeros((g.n, len(sets)))
    for j, s in enumerate(sets):
        for v in s:
            membership[v, j] = 1.0
    uniform = membership / membership.sum(axis=1, keepdims=True)

    value, p_wx, converged, iterations, trace = _alternating_run(
        px, membership, uniform, tol, max_iter, record_trace
    )
    # if the iteration parked on the boundary of the feasible set, retry once
    # from a deterministically perturbed start and keep the better outcome
    q = px @ p_wx
    if np.any(q < 1e-15):
        rng = np.random.default_rng(20240501)
        perturbed = uniform * (1.0 + 0.01 * rng.random(uniform.shape))
        perturbed *= membership
        perturbed /= perturbed.sum(axis=1, keepdims=True)
        value2, p2, conv2, it2, trace2 = _alternating_run(
            px, membership, perturbed, tol, max_iter, record_trace
        )
        if value2 < value - 1e-13:
            value, p_wx, converged, iterations, trace = value2, p2, conv2, it2, trace2
    design = ConditionalDesign(tuple(sets), p_wx)
    return GraphEntropyResult(value, design, converged, iterations, tuple(trace))


def fractional_chromatic_lp(g: Graph, mis_cap: int = DEFAULT_MIS_CAP) -> Fraction:
    """Exact optimum of min sum(t_s) s.t. every vertex covered by total >= 1.

    Solved as the equivalent packing dual max sum(y_v) s.t. for every maximal
    independent set, sum of y over its vertices <= 1, via a dense rational
    simplex with Bland's rule.  Strong duality makes the two optima equal.
    """
    if g.n == 0:
        return Fraction(0)
    sets = maximal_independent_sets(g, cap=mis_cap)
    if g.edge_count == 0:
        return Fraction(1)
    return _simplex_max_ones(rows=[sorted(s) for s in sets], num_vars=g.n)


def _simplex_max_ones(rows: list[list[int]], num_vars: int) -> Fraction:
    """Maximize 1.y subject to (0/1 rows).y <= 1, y >= 0, exactly."""
    m, n = len(rows), num_vars
    one = Fraction(1)
    zero = Fraction(0)
    # tableau: m rows x (n + m + 1); basis starts as slacks
    tab = []
    for r, row in enumerate(rows):
        line = [zero] * (n + m + 1)
        for v in row:
            line[v] = one
        line[n + r] = one
        line[-1] = one
        tab.append(line)
    cost = [-one] * n + [zero] * m + [zero]  # minimize -sum(y)
    basis = [n + r for r in range(m)]

    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        ratios = [
            (tab[r][-1] / tab[r][enter], r) for r in range(m) if tab[r][enter] > 0
        ]
        if not ratios:
            raise ZefcError("unbounded covering LP; graph data is inconsistent")
        best = min(ratios, key=lambda t: (t[0], basis[t[1]]))
        leave = best[1]
        pivot = tab[leave][enter]
        tab[leave] = [v / pivot for v in tab[leave]]
        for r in range(m):
            if r != leave and tab[r][enter] != 0:
                factor = tab[r][enter]
                tab[r] = [a - factor * b for a, b in zip(tab[r], tab[leave])]
        if cost[enter] != 0:
            factor = cost[enter]
            cost = [a - factor * b for a, b in zip(cost, tab[leave])]
        basis[leave] = enter

    # the cost row tracks z - z0 for the minimization of -sum(y), so its
    # right-hand entry ends at the packing optimum itself
    return cost[-1]


def conditional_entropy_of_f(
    inst: ProblemInstance,
    n: int,
    enc_a: Mapping[tuple[int, ...], int],
    enc_b: Mapping[tuple[int, ...], int],
    budget: int = DEFAULT_PAIRWISE_BUDGET,
) -> float:
    """H(f over a block | both terminal messages), in bits.

    Probability masses are exact rationals from the n-fold product pmf over
    supported tuples; only the final entropy is floating point.
    """
    groups: dict[tuple[int, int], dict[tuple[str, ...], Fraction]] = {}
    for cells, xt, yt in support_tuples(inst, n, budget):
        mass = Fraction(1)
        for i, j in zip(xt, yt):
            mass *= inst.pmf[i][j]
        fv = tuple(inst.f(i, j) for i, j in zip(xt, yt))
        bucket = groups.setdefault((enc_a[xt], enc_b[yt]), {})
        bucket[fv] = bucket.get(fv, Fraction(0)) + mass
    total = 0.0
    for by_f in groups.values():
        weight = sum(by_f.values(), Fraction(0))
        if weight == 0:
            continue
        total += float(weight) * entropy([p / weight for p in by_f.values()])
    return total
