import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mohb.core import ContractError, SeededRng, dominates, round_half_away, zscore_normalize


def vectors(m):
    return st.lists(st.floats(-100, 100, allow_nan=False), min_size=m, max_size=m)


def grid_vectors(m):
    # well-separated values so transforms cannot merge distinct entries by rounding
    return st.lists(st.integers(-20, 20).map(float), min_size=m, max_size=m)


@pytest.mark.parametrize(
    "a, b, expected",
    [((1, 1), (2, 2), True), ((1, 1), (1, 1), False), ((1, 3), (3, 1), False), ((1, 2), (1, 3), True)],
)
def test_dominates_examples(a, b, expected):
    assert dominates(a, b) is expected


def test_dominates_length_mismatch():
    with pytest.raises(ContractError):
        dominates((1, 2), (1, 2, 3))


@given(st.integers(1, 4).flatmap(lambda m: st.tuples(vectors(m), vectors(m), vectors(m))))
def test_dominance_is_a_strict_partial_order(abc):
    a, b, c = abc
    assert not dominates(a, a)
    assert not (dominates(a, b) and dominates(b, a))
    if dominates(a, b) and dominates(b, c):
        assert dominates(a, c)


@given(st.integers(1, 4).flatmap(lambda m: st.lists(grid_vectors(m), min_size=2, max_size=8)))
def test_dominance_survives_zscore(points):
    z = zscore_normalize(points)
    arr = np.asarray(points)
    keep = arr.std(axis=0) > 0
    if not keep.all():
        return
    for i in range(len(points)):
        for j in range(len(points)):
            assert dominates(points[i], points[j]) == dominates(z[i], z[j])


@given(st.lists(grid_vectors(2), min_size=1, max_size=6), st.tuples(st.floats(0.1, 10), st.floats(0.1, 10)))
def test_dominance_survives_monotone_transform(points, scale):
    mapped = [(math.exp(p[0] / 5) * scale[0], p[1] ** 3 * scale[1]) for p in points]
    for i in range(len(points)):
        for j in range(len(points)):
            assert dominates(points[i], points[j]) == dominates(mapped[i], mapped[j])


def test_zscore_examples():
    np.testing.assert_allclose(zscore_normalize([(0,), (2,)]), [[-1], [1]])
    np.testing.assert_array_equal(zscore_normalize([(5,), (5,)]), [[0], [0]])
    z = zscore_normalize([(1, 10), (3, 10), (5, 10)])
    s = math.sqrt(8 / 3)
    np.testing.assert_allclose(z[:, 0], [-2 / s, 0, 2 / s])
    np.testing.assert_allclose(z[:, 0], [-1.2247, 0, 1.2247], atol=1e-4)
    np.testing.assert_array_equal(z[:, 1], 0)


def test_zscore_empty():
    with pytest.raises(ContractError):
        zscore_normalize([])


@given(st.lists(vectors(3), min_size=2, max_size=20))
def test_zscore_idempotent(points):
    z = zscore_normalize(points)
    np.testing.assert_allclose(zscore_normalize(z), z, atol=1e-9)


def test_rng_reproducible_and_keyed():
    a, b = SeededRng(3), SeededRng(3)
    np.testing.assert_array_equal(a.normal(size=5), b.normal(size=5))
    # children depend on the key path only, not on parent draws
    fresh = SeededRng(3).child("bracket", 2, "sample").random(4)
    np.testing.assert_array_equal(a.child("bracket", 2, "sample").random(4), fresh)
    assert not np.array_equal(SeededRng(3).child("x").random(4), SeededRng(3).child("y").random(4))
    assert not np.array_equal(SeededRng(3).random(4), SeededRng(4).random(4))


def test_rng_rejects_negative_seed():
    with pytest.raises(ContractError):
        SeededRng(-1)


@pytest.mark.parametrize("x, expected", [(92.857, 93), (0.5, 1), (1.5, 2), (2.5, 3), (-0.5, -1), (5959.3, 5959)])
def test_round_half_away(x, expected):
    assert round_half_away(x) == expected
