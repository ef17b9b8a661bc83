import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mohb.core import ContractError, SeededRng, dominates
from mohb.scalarize import (
    ScalarizationWeights,
    draw_weights,
    scalarize_hypervolume,
    scalarize_linear,
    scalarize_parego,
    top_k_scalarized,
)

W = ScalarizationWeights


def test_spot_values():
    assert scalarize_linear((1, 2), W((0.3, 0.7))) == pytest.approx(1.7, abs=1e-12)
    assert scalarize_linear((0, 0), W((0.2, 0.8))) == 0
    assert scalarize_linear((1, 1), W((0.5, 0.5))) == pytest.approx(1.0, abs=1e-12)
    assert scalarize_parego((1, 2), W((0.5, 0.5), 0.05)) == pytest.approx(1.075, abs=1e-12)
    assert scalarize_parego((0, 0), W((0.5, 0.5))) == 0
    assert scalarize_parego((2, 2), W((0.5, 0.5), 0.05)) == pytest.approx(1.1, abs=1e-12)
    assert scalarize_hypervolume((2, 3), W((1, 1))) == pytest.approx(4, abs=1e-12)
    assert scalarize_hypervolume((0, 5), W((0.6, 0.8))) == 0
    r = 1 / math.sqrt(2)
    assert scalarize_hypervolume((4, 4), W((r, r))) == pytest.approx(32, abs=1e-12)


def test_length_mismatch():
    for fn in (scalarize_linear, scalarize_parego, scalarize_hypervolume):
        with pytest.raises(ContractError):
            fn((1, 2, 3), W((0.5, 0.5)))


def test_zero_weight_is_floored():
    # 1e-12 floor keeps the ratio finite; the other coordinate decides
    assert scalarize_hypervolume((1, 2), W((0.0, 1.0))) == pytest.approx(4.0)


@pytest.mark.parametrize("mode", ["simplex", "sphere"])
def test_draw_weights_m1(mode):
    assert draw_weights(SeededRng(0), 1, mode).lam == (1.0,)


def test_draw_weights_invalid():
    with pytest.raises(ContractError):
        draw_weights(SeededRng(0), 0)
    with pytest.raises(ContractError):
        draw_weights(SeededRng(0), 2, "cube")


def test_simplex_and_sphere_draws():
    rng = SeededRng(1)
    draws = np.array([draw_weights(rng.child(i), 3, "simplex").lam for i in range(10_000)])
    np.testing.assert_allclose(draws.sum(axis=1), 1, atol=1e-9)
    assert np.all(draws >= 0)
    # Dirichlet(1,1,1) marginal: mean 1/3, sd sqrt(2/36); 3 standard errors over 1e4 draws
    se = math.sqrt(2 / 36) / math.sqrt(len(draws))
    assert np.all(np.abs(draws.mean(axis=0) - 1 / 3) < 3 * se)
    assert np.all(np.abs(draws.mean(axis=0) - 1 / 3) < 0.02)
    sph = np.array([draw_weights(rng.child("s", i), 3, "sphere").lam for i in range(1000)])
    np.testing.assert_allclose(np.linalg.norm(sph, axis=1), 1, atol=1e-9)
    assert np.all(sph >= 0)


@pytest.mark.parametrize("method", ["linear", "parego", "hv"])
def test_top_k_picks_per_coordinate_minimum(method):
    for seed in range(20):
        assert top_k_scalarized([(0, 0), (10, 10)], 1, method, SeededRng(seed)) == [0]


def test_top_k_forced_weights():
    assert top_k_scalarized([(1, 3), (3, 1)], 1, "linear", weights=W((1.0, 0.0))) == [0]
    assert top_k_scalarized([(1, 3), (3, 1)], 2, "linear", weights=W((0.0, 1.0))) == [1, 0]


def test_fresh_weights_per_call():
    rng = SeededRng(5)
    pts = [(0, 1), (1, 0), (0.5, 0.5)]
    picks = {tuple(top_k_scalarized(pts, 1, "linear", rng.child(i))) for i in range(50)}
    assert len(picks) > 1


@pytest.mark.parametrize("method", ["linear", "parego", "hv"])
@given(st.lists(st.integers(-50, 50).map(float), min_size=1, max_size=15), st.integers(0, 99))
def test_m1_ranks_ascending(method, values, seed):
    pts = [(v,) for v in values]
    expected = sorted(range(len(values)), key=lambda i: (values[i], i))
    assert top_k_scalarized(pts, len(pts), method, SeededRng(seed)) == expected


@pytest.mark.parametrize("method", ["linear", "parego"])
@settings(max_examples=100)
@given(
    st.lists(st.lists(st.integers(0, 9).map(float), min_size=3, max_size=3), min_size=2, max_size=12),
    st.lists(st.floats(0.05, 1.0), min_size=3, max_size=3),
)
def test_dominated_never_outranks_dominator(method, points, raw):
    lam = tuple(np.asarray(raw) / sum(raw))
    order = top_k_scalarized(points, len(points), method, weights=W(lam))
    pos = {idx: k for k, idx in enumerate(order)}
    for i in range(len(points)):
        for j in range(len(points)):
            if dominates(points[i], points[j]):
                assert pos[i] < pos[j]


def test_k_bounds():
    with pytest.raises(ContractError):
        top_k_scalarized([(1, 2)], 2, "linear", SeededRng(0))
    assert top_k_scalarized([(1, 2)], 0, "linear", SeededRng(0)) == []
    with pytest.raises(ContractError):
        top_k_scalarized([(1, 2)], 1, "chebyshev", SeededRng(0))
