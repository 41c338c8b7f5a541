from __future__ import annotations

import json
from fractions import Fraction as F

import pytest

from sumshuffle.errors import MalformedStructure, ValidationError
from sumshuffle.finstruct import FinStructure, enumerate_structures, validate
from sumshuffle.presentation import parse, sigma_power
from sumshuffle.ultra import (
    UltraError,
    UltraSpace,
    all_spaces,
    from_json,
    is_valid_space,
    level_paths,
    to_json,
    to_structure,
    to_ultrametric,
    violations,
)

S2 = (F(1), F(2))


def test_level_paths():
    assert level_paths(2) == [(1, 1), (1,), ()]


def test_to_structure_examples():
    one = to_structure(UltraSpace.from_pairs(1, (F(1),), {}))
    assert one.n == 1 and validate(one) == []
    two = to_structure(UltraSpace.from_pairs(2, (F(1),), {(0, 1): 1}))
    assert two.relations[(1,)] == ((0,), (1,)) and two.relations[()] == ((0, 1),)
    three = to_structure(UltraSpace.from_pairs(3, S2, {(0, 1): 1, (0, 2): 2, (1, 2): 2}))
    assert three.relations[(1,)] == ((0, 1), (2,))


def test_to_ultrametric_examples():
    T = sigma_power(2)
    split = FinStructure(T, 2, {(): ((0, 1),), (1,): ((0,), (1,)), (1, 1): ((0,), (1,))})
    same = FinStructure(T, 2, {(): ((0, 1),), (1,): ((0, 1),), (1, 1): ((0,), (1,))})
    assert to_ultrametric(split, S2).d[0] == (0, 2)
    assert to_ultrametric(same, S2).d[0] == (0, 1)


def test_invalid_spaces():
    assert violations(UltraSpace.from_pairs(3, S2, {(0, 1): 2, (0, 2): 1, (1, 2): 2}))
    assert violations(UltraSpace.from_pairs(2, S2, {(0, 1): 3}))
    assert violations(UltraSpace.from_pairs(2, (F(2), F(1)), {(0, 1): 1}))
    with pytest.raises(UltraError):
        to_structure(UltraSpace.from_pairs(2, S2, {(0, 1): 0}))


def test_size_mismatch_and_invalid_structure():
    with pytest.raises(UltraError):
        to_ultrametric(enumerate_structures(parse("sigma(1)"), 2)[0], S2)
    bad = FinStructure(sigma_power(2), 2, {(): ((0, 1),), (1,): ((0,), (1,)), (1, 1): ((0, 1),)})
    with pytest.raises(ValidationError):
        to_ultrametric(bad, S2)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_round_trips(m):
    S = tuple(F(i + 1) for i in range(m))
    for n in range(5):
        for u in all_spaces(n, S):
            A = to_structure(u)
            assert validate(A) == []
            assert to_ultrametric(A, S) == u
        for A in enumerate_structures(sigma_power(m), n):
            u = to_ultrametric(A, S)
            assert is_valid_space(u)
            assert to_structure(u) == A


def test_space_counts_independent():
    # convex ultrametrics with two distances on n ordered points, by hand:
    # each consecutive gap is 1 or 2, and the rest is forced
    for n in range(6):
        assert len(all_spaces(n, S2)) == (2 ** (n - 1) if n else 1)


def test_json_round_trip():
    u = UltraSpace.from_pairs(3, (F(1, 2), F(3)), {(0, 1): F(1, 2), (0, 2): 3, (1, 2): 3})
    doc = json.loads(json.dumps(to_json(u)))
    assert doc["d"] == [["1/2", "3"], ["3"]]
    assert from_json(doc) == u
    doc["d"].append([])
    assert from_json(doc) == u


def test_json_malformed():
    with pytest.raises(MalformedStructure):
        from_json({"S": ["1"], "points": 3, "d": [["1"]]})
    with pytest.raises(MalformedStructure):
        from_json({"points": 1})
