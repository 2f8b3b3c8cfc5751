import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zefc import InstanceFormatError, load_instance, marginals, store_instance, support
from zefc.model import instance_from_mapping

from conftest import make_instance, random_instance


def test_equality_instance_loads(equality_instance):
    assert len(support(equality_instance)) == 10
    assert equality_instance.size_x == equality_instance.size_y == 5


def test_degenerate_instance():
    inst = make_instance(["a"], ["b"], [["1"]], [["v"]])
    assert len(support(inst)) == 1


def test_relay_blind_instance_support(relay_blind_instance):
    assert len(support(relay_blind_instance)) == 6
    assert all(i != j for i, j in support(relay_blind_instance).pairs)


def test_support_pairs_equality(equality_instance):
    expected = {(x, x) for x in range(5)} | {(x, (x + 1) % 5) for x in range(5)}
    assert set(support(equality_instance).pairs) == expected
    # row-major order
    assert list(support(equality_instance).pairs) == sorted(support(equality_instance).pairs)


def test_support_full_grid(min_instance):
    assert len(support(min_instance)) == 9


def test_support_skips_zero_row():
    inst = make_instance(
        ["a", "b"], ["c", "d"], [["0", "0"], ["1/2", "1/2"]], [["u", "u"], ["u", "u"]]
    )
    assert all(i != 0 for i, _ in support(inst).pairs)


def test_marginals_equality(equality_instance):
    px, py = marginals(equality_instance)
    assert px == tuple([Fraction(1, 5)] * 5)
    assert py == tuple([Fraction(1, 5)] * 5)


def test_marginals_degenerate():
    inst = make_instance(["a"], ["b"], [["1"]], [["v"]])
    assert marginals(inst) == ((Fraction(1),), (Fraction(1),))


def test_marginals_relay_blind(relay_blind_instance):
    px, py = marginals(relay_blind_instance)
    assert px == tuple([Fraction(1, 3)] * 3)
    assert py == tuple([Fraction(1, 3)] * 3)


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d.__setitem__("pmf", [["1/2", "1/3"]]), "sums"),
        (lambda d: d.__setitem__("pmf", [["3/2", "-1/2"]]), "negative"),
        (lambda d: d.__setitem__("alphabet_y", ["y", "y"]), "duplicate"),
        (lambda d: d.__setitem__("f", [["v"]]), "matrix"),
        (lambda d: d.__setitem__("pmf", [["1/0", "0"]]), "probability"),
    ],
)
def test_invalid_documents(mutate, message):
    doc = {
        "alphabet_x": ["x"],
        "alphabet_y": ["y", "z"],
        "pmf": [["1/2", "1/2"]],
        "f": [["a", "b"]],
    }
    mutate(doc)
    with pytest.raises(InstanceFormatError, match=message):
        instance_from_mapping(doc)


def test_malformed_json():
    with pytest.raises(InstanceFormatError, match="JSON"):
        load_instance("{not json")


def test_decimal_probabilities_are_exact():
    inst = make_instance(["a"], ["b", "c"], [[0.1, "0.9"]], [["u", "v"]])
    assert inst.pmf[0][0] == Fraction(1, 10)
    assert inst.pmf[0][1] == Fraction(9, 10)


def test_null_f_label_is_distinct():
    inst = make_instance(["a"], ["b", "c"], [["1/2", "1/2"]], [[None, "null_"]])
    assert inst.f(0, 0) == "null"
    assert inst.f(0, 0) != inst.f(0, 1)


def test_round_trip_fixtures(equality_instance, relay_blind_instance, min_instance):
    for inst in (equality_instance, relay_blind_instance, min_instance):
        assert load_instance(store_instance(inst)) == inst


@settings(deadline=None, max_examples=60)
@given(seed=st.integers(0, 10**6))
def test_round_trip_random(seed):
    inst = random_instance(random.Random(seed))
    assert load_instance(store_instance(inst)) == inst


@settings(deadline=None, max_examples=60)
@given(seed=st.integers(0, 10**6))
def test_support_is_exactly_nonzero_cells(seed):
    inst = random_instance(random.Random(seed))
    pairs = set(support(inst).pairs)
    for i in range(inst.size_x):
        for j in range(inst.size_y):
            assert ((i, j) in pairs) == (inst.pmf[i][j] > 0)


@settings(deadline=None, max_examples=40)
@given(seed=st.integers(0, 10**6))
def test_marginals_permutation_equivariant(seed):
    rng = random.Random(seed)
    inst = random_instance(rng)
    perm = list(range(inst.size_x))
    rng.shuffle(perm)
    shuffled = make_instance(
        [inst.alphabet_x[p] for p in perm],
        inst.alphabet_y,
        [[str(inst.pmf[p][j]) for j in range(inst.size_y)] for p in perm],
        [[inst.f(p, j) for j in range(inst.size_y)] for p in perm],
    )
    px, py = marginals(inst)
    qx, qy = marginals(shuffled)
    assert qx == tuple(px[p] for p in perm)
    assert qy == py


@settings(deadline=None, max_examples=40)
@given(seed=st.integers(0, 10**6))
def test_marginals_sum_to_one(seed):
    inst = random_instance(random.Random(seed))
    px, py = marginals(inst)
    assert sum(px) == 1 and sum(py) == 1


def test_off_support_f_does_not_change_support(equality_instance):
    doc = json.loads(store_instance(equality_instance))
    doc["f"][0][2] = "weird"  # (0,2) has zero probability
    changed = instance_from_mapping(doc)
    assert support(changed).pairs == support(equality_instance).pairs
