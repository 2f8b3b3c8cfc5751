"""Rate-region corners, membership queries, and finite-n frontier enumeration.

The two inner corners and the outer corner come from graph entropies of the
support graph and the two confusability graphs.  Both inner regions are
upward-closed orthants generated by a single corner, so membership in the
convex hull reduces to a one-dimensional feasibility test over the
time-sharing coefficient.

The finite-n frontier enumerates canonical proper colorings on each terminal
side, pairs them, and for each pair finds the cheapest relay coarsening.
Merging color classes of the pair coloring so that the merged classes stay
independent is exactly a proper coloring of the quotient graph on pair-color
classes, so the cheapest coarsening is the quotient's minimum-entropy
coloring.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from .coloring import (
    chromatic_entropy,
    coloring_entropy,
    enumerate_proper_colorings,
    support_tuples,
)
from .entropy import entropy, graph_entropy, DEFAULT_MAX_ITER, DEFAULT_TOL
from .errors import CapExceededError
from .graphs import (
    ProbabilisticGraph,
    confusability_graphs,
    confusability_prob_graphs,
    f_rook_graph,
    f_rook_prob_graph,
    graph_from_edges,
    or_product,
    product_distribution,
)
from .model import ProblemInstance, marginals

__all__ = [
    "RateTriple",
    "RateRegionReport",
    "inner_bound_1",
    "inner_bound_2",
    "outer_bound",
    "membership",
    "chromatic_region_frontier",
    "rate_region_report",
    "pareto_minimal",
]

TIGHT_TOL = 1e-9
Verdict = Literal["inside_inner", "between_bounds", "outside_outer"]

DEFAULT_FRONTIER_ALPHABET_CAP = 5
DEFAULT_FRONTIER_N_CAP = 2
DEFAULT_SIDE_BUDGET = 2_000
DEFAULT_PAIR_BUDGET = 200_000
DEFAULT_QUOTIENT_CAP = 16


@dataclass(frozen=True)
class RateTriple:
    r_a: float
    r_b: float
    r_c: float

    def __post_init__(self) -> None:
        for v in (self.r_a, self.r_b, self.r_c):
            if not (v >= 0.0 and v == v and v != float("inf")):
                raise ValueError(f"rates must be finite and nonnegative, got {v}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.r_a, self.r_b, self.r_c)

    def dominates(self, other: "RateTriple", tol: float = 0.0) -> bool:
        """Component-wise <= within tol (this point is at least as good)."""
        return all(a <= b + tol for a, b in zip(self.as_tuple(), other.as_tuple()))


@dataclass(frozen=True)
class RateRegionReport:
    corner_i1: RateTriple
    corner_i2: RateTriple
    corner_o: RateTriple
    tight: bool
    frontiers: dict[int, tuple[RateTriple, ...]]


def inner_bound_1(
    inst: ProblemInstance, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> RateTriple:
    """Corner (H(X), H(Y), graph entropy of the support graph)."""
    px, py = marginals(inst)
    joint = graph_entropy(f_rook_prob_graph(inst), tol=tol, max_iter=max_iter)
    return RateTriple(entropy(px), entropy(py), joint.value_bits)


def inner_bound_2(
    inst: ProblemInstance, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> RateTriple:
    """Corner from the two confusability-graph entropies; relay relays both."""
    pgx, pgy = confusability_prob_graphs(inst)
    hx = graph_entropy(pgx, tol=tol, max_iter=max_iter).value_bits
    hy = graph_entropy(pgy, tol=tol, max_iter=max_iter).value_bits
    return RateTriple(hx, hy, hx + hy)


def outer_bound(
    inst: ProblemInstance, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER
) -> RateTriple:
    pgx, pgy = confusability_prob_graphs(inst)
    hx = graph_entropy(pgx, tol=tol, max_iter=max_iter).value_bits
    hy = graph_entropy(pgy, tol=tol, max_iter=max_iter).value_bits
    joint = graph_entropy(f_rook_prob_graph(inst), tol=tol, max_iter=max_iter)
    return RateTriple(hx, hy, joint.value_bits)


def membership(
    inst: ProblemInstance,
    point: RateTriple,
    tol: float = TIGHT_TOL,
    corners: tuple[RateTriple, RateTriple, RateTriple] | None = None,
) -> Verdict:
    """Classify a rate triple against the inner hull and the outer corner.

    Inside the inner region iff some time-sharing mix of the two inner
    corners sits below the point on every axis; the feasible mixing
    coefficients form an interval per axis, intersected exactly.
    """
    if corners is None:
        c1, c2, co = inner_bound_1(inst), inner_bound_2(inst), outer_bound(inst)
    else:
        c1, c2, co = corners
    if any(r < o - tol for r, o in zip(point.as_tuple(), co.as_tuple())):
        return "outside_outer"
    lo, hi = 0.0, 1.0
    for r, a, b in zip(point.as_tuple(), c1.as_tuple(), c2.as_tuple()):
        # need b + lam*(a-b) <= r + tol
        diff = a - b
        bound = r + tol - b
        if abs(diff) <= 1e-15:
            if bound < 0:
                return "between_bounds"
        elif diff > 0:
            hi = min(hi, bound / diff)
        else:
            lo = max(lo, bound / diff)
    if lo <= hi:
        return "inside_inner"
    return "between_bounds"


def pareto_minimal(points: Sequence[RateTriple], tol: float = 1e-12) -> list[RateTriple]:
    """Non-dominated triples, sorted, with near-duplicates merged."""
    unique: list[RateTriple] = []
    for p in sorted(points, key=RateTriple.as_tuple):
        if not any(
            all(abs(a - b) <= tol for a, b in zip(p.as_tuple(), q.as_tuple()))
            for q in unique
        ):
            unique.append(p)
    out = [
        p
        for p in unique
        if not any(
            q is not p and q.dominates(p, tol) and not p.dominates(q, tol)
            for q in unique
        )
    ]
    return out


def chromatic_region_frontier(
    inst: ProblemInstance,
    n: int,
    tol: float = DEFAULT_TOL,
    alphabet_cap: int = DEFAULT_FRONTIER_ALPHABET_CAP,
    n_cap: int = DEFAULT_FRONTIER_N_CAP,
    side_budget: int = DEFAULT_SIDE_BUDGET,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    quotient_cap: int = DEFAULT_QUOTIENT_CAP,
) -> list[RateTriple]:
    """Pareto-minimal per-symbol rate triples over all length-n color covers."""
    if inst.size_x > alphabet_cap or inst.size_y > alphabet_cap:
        raise CapExceededError(
            f"alphabets up to {alphabet_cap} supported for frontier enumeration"
        )
    if n > n_cap:
        raise CapExceededError(f"frontier enumeration capped at n={n_cap}")

    gx, gy = confusability_graphs(inst)
    px, py = marginals(inst)
    gx_n = or_product(gx, n).materialize()
    gy_n = or_product(gy, n).materialize()
    px_n = product_distribution(px, n)
    py_n = product_distribution(py, n)

    side_a = list(enumerate_proper_colorings(gx_n, budget=side_budget))
    side_b = list(enumerate_proper_colorings(gy_n, budget=side_budget))
    if len(side_a) * len(side_b) > pair_budget:
        raise CapExceededError(
            f"{len(side_a)}x{len(side_b)} side colorings exceed pair budget {pair_budget}"
        )

    base = f_rook_graph(inst)
    product = or_product(base, n)
    tuples = support_tuples(inst, n)
    # index of each x-tuple / y-tuple in the materialized side graphs
    x_index = {t: i for i, t in enumerate(itertools.product(range(inst.size_x), repeat=n))}
    y_index = {t: i for i, t in enumerate(itertools.product(range(inst.size_y), repeat=n))}
    masses = []
    for cells, xt, yt in tuples:
        m = Fraction(1)
        for i, j in zip(xt, yt):
            m *= inst.pmf[i][j]
        masses.append(m)

    entropies_a = [coloring_entropy(px_n, c) for c in side_a]
    entropies_b = [coloring_entropy(py_n, c) for c in side_b]

    points: list[RateTriple] = []
    for (ca, ha), (cb, hb) in itertools.product(
        zip(side_a, entropies_a), zip(side_b, entropies_b)
    ):
        # quotient of the pair coloring over supported tuples
        class_of: dict[tuple[int, int], int] = {}
        tuple_class = []
        for cells, xt, yt in tuples:
            key = (ca[x_index[xt]], cb[y_index[yt]])
            if key not in class_of:
                class_of[key] = len(class_of)
            tuple_class.append(class_of[key])
        k = len(class_of)
        if k > quotient_cap:
            raise CapExceededError(
                f"{k} pair-color classes exceed quotient cap {quotient_cap}"
            )
        qedges = set()
        proper = True
        for a, b in itertools.combinations(range(len(tuples)), 2):
            if product.adjacent(tuples[a][0], tuples[b][0]):
                qa, qb = tuple_class[a], tuple_class[b]
                if qa == qb:
                    proper = False
                    break
                qedges.add((qa, qb) if qa < qb else (qb, qa))
        if not proper:
            # the pair map fails to color the support graph power: not a cover
            continue
        class_mass = [Fraction(0)] * k
        for idx, qc in enumerate(tuple_class):
            class_mass[qc] += masses[idx]
        quotient = ProbabilisticGraph(
            graph_from_edges(list(range(k)), qedges), tuple(class_mass)
        )
        hc = chromatic_entropy(quotient, max_vertices=quotient_cap).value_bits
        points.append(RateTriple(ha / n, hb / n, hc / n))

    return pareto_minimal(points)


def rate_region_report(
    inst: ProblemInstance,
    frontier_ns: Sequence[int] = (),
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    **frontier_kwargs,
) -> RateRegionReport:
    c1 = inner_bound_1(inst, tol=tol, max_iter=max_iter)
    c2 = inner_bound_2(inst, tol=tol, max_iter=max_iter)
    co = outer_bound(inst, tol=tol, max_iter=max_iter)
    tight = all(
        abs(a - b) <= TIGHT_TOL for a, b in zip(c1.as_tuple(), co.as_tuple())
    )
    frontiers = {
        n: tuple(chromatic_region_frontier(inst, n, tol=tol, **frontier_kwargs))
        for n in frontier_ns
    }
    return RateRegionReport(c1, c2, co, tight, frontiers)
