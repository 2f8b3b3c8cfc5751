"""Shared fixtures and independent brute-force oracles.

The oracles deliberately avoid the package's search/solver code paths:
chromatic entropy by full partition enumeration, decodability by direct
decoder-table construction, independent sets via networkx on the complement.
"""
from __future__ import annotations

import itertools
import json
import math
import random
from fractions import Fraction

import pytest

from zefc import load_instance
from zefc.model import ProblemInstance, support


def make_instance(alphabet_x, alphabet_y, pmf, f) -> ProblemInstance:
    return load_instance(
        json.dumps(
            {"alphabet_x": list(alphabet_x), "alphabet_y": list(alphabet_y), "pmf": pmf, "f": f}
        )
    )


@pytest.fixture(scope="session")
def equality_instance() -> ProblemInstance:
    """5x5 cyclic-banded support, f = 1 exactly on the diagonal."""
    labels = [str(i) for i in range(5)]
    pmf = [["0"] * 5 for _ in range(5)]
    f = [["0"] * 5 for _ in range(5)]
    for x in range(5):
        for y in range(5):
            if y == x or y == (x + 1) % 5:
                pmf[x][y] = "1/10"
            f[x][y] = "1" if x == y else "0"
    return make_instance(labels, labels, pmf, f)


@pytest.fixture(scope="session")
def min_instance() -> ProblemInstance:
    """Uniform full-support 3x3, f = min(x, y)."""
    labels = ["0", "1", "2"]
    pmf = [["1/9"] * 3 for _ in range(3)]
    f = [[str(min(x, y)) for y in range(3)] for x in range(3)]
    return make_instance(labels, labels, pmf, f)


@pytest.fixture(scope="session")
def relay_blind_instance() -> ProblemInstance:
    """Uniform off-diagonal 3x3 support, f = 1 iff x > y."""
    labels = ["1", "2", "3"]
    pmf = [["1/6" if x != y else "0" for y in range(3)] for x in range(3)]
    f = [["1" if x > y else "0" for y in range(3)] for x in range(3)]
    return make_instance(labels, labels, pmf, f)


@pytest.fixture(scope="session")
def xor_instance() -> ProblemInstance:
    labels = ["0", "1"]
    pmf = [["1/4", "1/4"], ["1/4", "1/4"]]
    f = [["0", "1"], ["1", "0"]]
    return make_instance(labels, labels, pmf, f)


@pytest.fixture(scope="session")
def constant_instance() -> ProblemInstance:
    labels = ["a", "b", "c"]
    pmf = [["1/9"] * 3 for _ in range(3)]
    f = [["z"] * 3 for _ in range(3)]
    return make_instance(labels, labels, pmf, f)


def random_instance(
    rng: random.Random,
    max_size: int = 3,
    num_values: int = 3,
    full_support: bool = False,
) -> ProblemInstance:
    nx = rng.randint(1, max_size)
    ny = rng.randint(1, max_size)
    weights = [[rng.randint(1, 6) if (full_support or rng.random() < 0.8) else 0 for _ in range(ny)] for _ in range(nx)]
    total = sum(map(sum, weights))
    if total == 0:
        weights[0][0] = 1
        total = 1
    pmf = [[f"{w}/{total}" for w in row] for row in weights]
    f = [[str(rng.randrange(num_values)) for _ in range(ny)] for _ in range(nx)]
    return make_instance(
        [f"x{i}" for i in range(nx)], [f"y{j}" for j in range(ny)], pmf, f
    )


# ---------------------------------------------------------------- oracles


def iter_partitions(items: list):
    """All set partitions of `items` (exponential; keep inputs small)."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in iter_partitions(rest):
        for i in range(len(smaller)):
            yield smaller[:i] + [[first] + smaller[i]] + smaller[i + 1 :]
        yield [[first]] + smaller


def brute_min_entropy_partition(n, edges, dist) -> float:
    """Minimum color entropy by enumerating every partition into independent sets."""
    edge_set = {frozenset(e) for e in edges}
    best = None
    for part in iter_partitions(list(range(n))):
        ok = all(
            not any(frozenset((u, v)) in edge_set for u, v in itertools.combinations(block, 2))
            for block in part
        )
        if not ok:
            continue
        h = 0.0
        for block in part:
            m = float(sum((dist[v] for v in block), Fraction(0)))
            if m > 0:
                h -= m * math.log2(m)
        if best is None or h < best:
            best = h
    assert best is not None
    return best


def oracle_decodable(inst: ProblemInstance, relay_color_of) -> bool:
    """Zero-error decodability at both terminals by decoder-table construction.

    `relay_color_of(i, j)` gives the relay broadcast color of support cell
    (i, j); each terminal must be able to fill a consistent decoding table.
    """
    psi_a: dict = {}
    psi_b: dict = {}
    for i, j in support(inst).pairs:
        m = relay_color_of(i, j)
        fv = inst.f(i, j)
        if psi_a.setdefault((i, m), fv) != fv:
            return False
        if psi_b.setdefault((j, m), fv) != fv:
            return False
    return True


def canonical_maps(num_items: int, max_colors: int):
    """All canonical (first-appearance) maps of 0..num_items-1 onto <= max_colors colors."""
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], used: int) -> None:
        if len(prefix) == num_items:
            out.append(tuple(prefix))
            return
        for c in range(min(used + 1, max_colors)):
            prefix.append(c)
            rec(prefix, max(used, c + 1))
            prefix.pop()

    rec([], 0)
    return out
