import itertools
import math
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zefc import (
    CapExceededError,
    chromatic_entropy,
    chromatic_entropy_bound,
    chromatic_entropy_product,
    confusability_graphs,
    enumerate_proper_colorings,
    f_rook_graph,
    f_rook_prob_graph,
    independence_number,
    is_coloring,
    maximal_independent_sets,
    verify_color_cover,
)
from zefc.coloring import (
    ColorCover,
    Coloring,
    canonical_assignment,
    coloring_entropy,
    coloring_to_text,
    cover_to_text,
    support_tuples,
)
from zefc.graphs import ProbabilisticGraph, graph_from_edges, or_product
from zefc.model import support

from conftest import brute_min_entropy_partition, make_instance, random_instance

LOG2_5 = math.log2(5)
H_CHI_C5 = 0.8 * math.log2(2.5) + 0.2 * LOG2_5  # 1.5219280948873624...


def cycle(n):
    return graph_from_edges([str(i) for i in range(n)], [(i, (i + 1) % n) for i in range(n)])


def uniform_pg(g):
    return ProbabilisticGraph(g, tuple([Fraction(1, g.n)] * g.n))


def random_graph(rng, n, p=0.4):
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return graph_from_edges([str(i) for i in range(n)], edges)


def random_dist(rng, n):
    weights = [rng.randint(0, 5) for _ in range(n)]
    if sum(weights) == 0:
        weights[0] = 1
    total = sum(weights)
    return tuple(Fraction(w, total) for w in weights)


# ------------------------------------------------------------- is_coloring


def test_alternating_two_coloring_of_even_cycle():
    g = cycle(10)
    assert is_coloring(g, [i % 2 for i in range(10)])


def test_no_two_coloring_of_odd_cycle():
    g = cycle(5)
    for assignment in itertools.product((0, 1), repeat=5):
        assert not is_coloring(g, list(assignment))


def test_everything_colors_edgeless():
    g = graph_from_edges(["a", "b", "c"], [])
    assert is_coloring(g, [0, 0, 0])


def test_is_coloring_on_product():
    g = cycle(5)
    prod = or_product(g, 2)
    proper = {t: 5 * t[0] + t[1] for t in prod.iter_vertices()}  # all distinct
    assert is_coloring(prod, proper)
    assert not is_coloring(prod, {t: 0 for t in prod.iter_vertices()})


# ------------------------------------------------- maximal independent sets


def test_mis_pentagon():
    sets = maximal_independent_sets(cycle(5))
    assert len(sets) == 5
    assert all(len(s) == 2 for s in sets)


def test_mis_triangle():
    sets = maximal_independent_sets(graph_from_edges("abc", [(0, 1), (0, 2), (1, 2)]))
    assert sets == [frozenset({0}), frozenset({1}), frozenset({2})]


def test_mis_edgeless():
    assert maximal_independent_sets(graph_from_edges("abc", [])) == [frozenset({0, 1, 2})]


def test_mis_cap():
    g = graph_from_edges([str(i) for i in range(30)], [])
    with pytest.raises(CapExceededError):
        maximal_independent_sets(g, cap=24)


@settings(deadline=None, max_examples=40)
@given(seed=st.integers(0, 10**6))
def test_mis_matches_networkx(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(1, 9))
    ours = {tuple(sorted(s)) for s in maximal_independent_sets(g)}
    comp = nx.Graph()
    comp.add_nodes_from(range(g.n))
    comp.add_edges_from(
        (i, j)
        for i in range(g.n)
        for j in range(i + 1, g.n)
        if not g.adjacent(i, j)
    )
    theirs = {tuple(sorted(c)) for c in nx.find_cliques(comp)}
    assert ours == theirs


@settings(deadline=None, max_examples=40)
@given(seed=st.integers(0, 10**6))
def test_independence_number_matches_mis(seed):
    g = random_graph(random.Random(seed), random.Random(seed + 1).randint(1, 9))
    sets = maximal_independent_sets(g)
    assert independence_number(g) == max(len(s) for s in sets)


# -------------------------------------------------------- chromatic entropy


def test_chromatic_entropy_c10(equality_instance):
    result = chromatic_entropy(f_rook_prob_graph(equality_instance))
    assert result.value_bits == 1.0
    assert sorted(len(c) for c in result.coloring.classes()) == [5, 5]
    # row-major support order puts (4,0) before (4,4), so the alternating
    # assignment around the cycle ends ...,1,0 rather than ...,0,1
    assert result.coloring.assignment == (0, 1, 0, 1, 0, 1, 0, 1, 1, 0)
    assert is_coloring(f_rook_graph(equality_instance), list(result.coloring.assignment))


def test_chromatic_entropy_c5():
    result = chromatic_entropy(uniform_pg(cycle(5)))
    assert abs(result.value_bits - H_CHI_C5) < 1e-12
    assert sorted(len(c) for c in result.coloring.classes()) == [1, 2, 2]


def test_chromatic_entropy_edgeless():
    g = graph_from_edges("abcd", [])
    result = chromatic_entropy(ProbabilisticGraph(g, random_dist(random.Random(3), 4)))
    assert result.value_bits == 0.0
    assert result.coloring.num_colors == 1


def test_chromatic_entropy_cap():
    g = graph_from_edges([str(i) for i in range(20)], [])
    with pytest.raises(CapExceededError):
        chromatic_entropy(uniform_pg(g), max_vertices=16)


@settings(deadline=None, max_examples=40)
@given(seed=st.integers(0, 10**6))
def test_chromatic_entropy_matches_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 8)
    g = random_graph(rng, n)
    dist = random_dist(rng, n)
    pg = ProbabilisticGraph(g, dist)
    exact = chromatic_entropy(pg)
    brute = brute_min_entropy_partition(n, [tuple(e) for e in g.edges], dist)
    assert abs(exact.value_bits - brute) < 1e-9
    assert is_coloring(g, list(exact.coloring.assignment))
    assert abs(coloring_entropy(dist, exact.coloring.assignment) - exact.value_bits) < 1e-12


@settings(deadline=None, max_examples=40)
@given(seed=st.integers(0, 10**6))
def test_chromatic_entropy_at_most_source_entropy(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 8)
    g = random_graph(rng, n)
    dist = random_dist(rng, n)
    h_source = -sum(float(p) * math.log2(float(p)) for p in dist if p > 0)
    result = chromatic_entropy(ProbabilisticGraph(g, dist))
    assert result.value_bits <= h_source + 1e-12


def test_chromatic_entropy_complete_equals_source_entropy():
    g = graph_from_edges("abcd", [(i, j) for i in range(4) for j in range(i + 1, 4)])
    dist = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8))
    result = chromatic_entropy(ProbabilisticGraph(g, dist))
    assert abs(result.value_bits - 1.75) < 1e-12
    assert result.coloring.num_colors == 4


def test_chromatic_entropy_isomorphism_invariant():
    rng = random.Random(11)
    g = random_graph(rng, 7)
    dist = random_dist(rng, 7)
    perm = list(range(7))
    rng.shuffle(perm)
    inv = {p: i for i, p in enumerate(perm)}
    g2 = graph_from_edges(
        [str(i) for i in range(7)], [(inv[i], inv[j]) for i, j in g.edges]
    )
    dist2 = tuple(dist[perm[i]] for i in range(7))
    a = chromatic_entropy(ProbabilisticGraph(g, dist))
    b = chromatic_entropy(ProbabilisticGraph(g2, dist2))
    assert abs(a.value_bits - b.value_bits) < 1e-12


def test_heuristic_bound_upper_bounds_exact():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(1, 8)
        g = random_graph(rng, n)
        dist = random_dist(rng, n)
        pg = ProbabilisticGraph(g, dist)
        ub = chromatic_entropy_bound(pg)
        exact = chromatic_entropy(pg)
        assert not ub.exact
        assert ub.value_bits >= exact.value_bits - 1e-12
        assert is_coloring(g, list(ub.coloring.assignment))


# ------------------------------------------------- products and subadditivity


def test_product_n1_reduces_to_plain(equality_instance):
    pg = f_rook_prob_graph(equality_instance)
    plain = chromatic_entropy(pg)
    prod = chromatic_entropy_product(pg, 1)
    assert prod.value_bits_per_symbol == plain.value_bits


def test_product_of_complete_base_forces_identity():
    g = graph_from_edges("ab", [(0, 1)])
    p = Fraction(3, 10)
    pg = ProbabilisticGraph(g, (p, 1 - p))
    result = chromatic_entropy_product(pg, 2)
    h = -(float(p) * math.log2(float(p)) + float(1 - p) * math.log2(float(1 - p)))
    assert abs(result.value_bits_per_symbol - h) < 1e-12


@settings(deadline=None, max_examples=15)
@given(seed=st.integers(0, 10**6))
def test_product_subadditive_and_canonical(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    g = random_graph(rng, n)
    dist = random_dist(rng, n)
    pg = ProbabilisticGraph(g, dist)
    single = chromatic_entropy(pg).value_bits
    squared = chromatic_entropy_product(pg, 2, max_vertices=16).value_bits_per_symbol
    assert squared <= single + 1e-12


# ------------------------------------------------------------ enumeration


def test_enumerate_colorings_pentagon_count():
    colorings = list(enumerate_proper_colorings(cycle(5)))
    assert len(colorings) == 11
    assert all(is_coloring(cycle(5), list(c)) for c in colorings)
    assert all(c == canonical_assignment(c) for c in colorings)


def test_enumerate_budget():
    g = graph_from_edges([str(i) for i in range(9)], [])
    with pytest.raises(CapExceededError):
        list(enumerate_proper_colorings(g, budget=100))


# ------------------------------------------------------------ color covers


def identity_cover(inst):
    pairs = support(inst).pairs
    c_a = {(i,): i for i in range(inst.size_x)}
    c_b = {(j,): j for j in range(inst.size_y)}
    base = f_rook_graph(inst)
    witness = chromatic_entropy(f_rook_prob_graph(inst)).coloring.assignment
    c_c = {(k,): witness[k] for k in range(base.n)}
    theta = {}
    for k, (i, j) in enumerate(pairs):
        theta[(i, j)] = witness[k]
    return ColorCover(1, c_a, c_b, c_c, theta)


def test_identity_cover_on_equality(equality_instance):
    cover = identity_cover(equality_instance)
    check = verify_color_cover(equality_instance, 1, cover)
    assert check.ok, check.violation


def test_constant_relay_coloring_rejected(equality_instance):
    cover = identity_cover(equality_instance)
    bad = ColorCover(
        1,
        cover.c_a,
        cover.c_b,
        {k: 0 for k in cover.c_c},
        {k: 0 for k in cover.theta},
    )
    check = verify_color_cover(equality_instance, 1, bad)
    assert not check.ok
    assert check.violation.kind == "relay_edge"
    u, v = check.violation.tuples
    base = f_rook_graph(equality_instance)
    assert base.adjacent(u[0], v[0])


def paper_tables_cover(inst):
    """Terminal maps flagging symbol '1'; relay flags agreement."""
    c_a = {(i,): 1 if inst.alphabet_x[i] == "1" else 0 for i in range(3)}
    c_b = {(j,): 1 if inst.alphabet_y[j] == "1" else 0 for j in range(3)}
    theta = {(a, b): 1 if a == b else 0 for a in (0, 1) for b in (0, 1)}
    pairs = support(inst).pairs
    c_c = {(k,): theta[(c_a[(pairs[k][0],)], c_b[(pairs[k][1],)])] for k in range(len(pairs))}
    return ColorCover(1, c_a, c_b, c_c, theta)


def test_paper_tables_are_a_cover(relay_blind_instance):
    cover = paper_tables_cover(relay_blind_instance)
    assert verify_color_cover(relay_blind_instance, 1, cover).ok


def test_refinement_violation_detected(relay_blind_instance):
    cover = paper_tables_cover(relay_blind_instance)
    broken_c_c = dict(cover.c_c)
    some_key = next(iter(broken_c_c))
    broken_c_c[some_key] ^= 1
    check = verify_color_cover(
        relay_blind_instance, 1, ColorCover(1, cover.c_a, cover.c_b, broken_c_c, cover.theta)
    )
    assert not check.ok and check.violation.kind == "refinement"


@settings(deadline=None, max_examples=30)
@given(seed=st.integers(0, 10**6))
def test_pair_coloring_iff_side_colorings(seed):
    """The pair map colors the support graph exactly when each terminal map
    colors its confusability graph; exhaustive over canonical small maps."""
    rng = random.Random(seed)
    inst = random_instance(rng, max_size=3, num_values=2)
    base = f_rook_graph(inst)
    gx, gy = confusability_graphs(inst)
    pairs = support(inst).pairs
    from conftest import canonical_maps

    for ca in canonical_maps(inst.size_x, 3):
        for cb in canonical_maps(inst.size_y, 3):
            pair_proper = all(
                (ca[pairs[i][0]], cb[pairs[i][1]]) != (ca[pairs[j][0]], cb[pairs[j][1]])
                for i, j in base.edges
            )
            side_proper = is_coloring(gx, list(ca)) and is_coloring(gy, list(cb))
            assert pair_proper == side_proper


def test_pair_coloring_iff_side_colorings_n2(relay_blind_instance):
    """Same equivalence on length-2 blocks, exhaustively for small maps."""
    inst = relay_blind_instance
    base = f_rook_graph(inst)
    prod = or_product(base, 2)
    gx, gy = confusability_graphs(inst)
    gx2 = or_product(gx, 2).materialize()
    gy2 = or_product(gy, 2).materialize()
    tuples = support_tuples(inst, 2)
    x_tuples = list(itertools.product(range(3), repeat=2))
    from conftest import canonical_maps

    rng = random.Random(7)
    maps = canonical_maps(9, 2)
    sampled = rng.sample(maps, 40)
    for ca_flat in sampled:
        for cb_flat in rng.sample(maps, 8):
            ca = {t: ca_flat[i] for i, t in enumerate(x_tuples)}
            cb = {t: cb_flat[i] for i, t in enumerate(x_tuples)}
            pair_proper = True
            for a, b in itertools.combinations(range(len(tuples)), 2):
                if prod.adjacent(tuples[a][0], tuples[b][0]):
                    ka = (ca[tuples[a][1]], cb[tuples[a][2]])
                    kb = (ca[tuples[b][1]], cb[tuples[b][2]])
                    if ka == kb:
                        pair_proper = False
                        break
            side_proper = is_coloring(gx2, list(ca_flat)) and is_coloring(
                gy2, list(cb_flat)
            )
            assert pair_proper == side_proper


def test_cover_export_text(relay_blind_instance):
    cover = paper_tables_cover(relay_blind_instance)
    text = cover_to_text(cover)
    assert "[theta]" in text and "[c_a]" in text
    g = f_rook_graph(relay_blind_instance)
    witness = chromatic_entropy(f_rook_prob_graph(relay_blind_instance)).coloring
    txt = coloring_to_text(g, witness)
    assert len(txt.splitlines()) == g.n
    assert "\t" in txt.splitlines()[0]
