from statistics import NormalDist

import numpy as np
import pytest
from scipy.stats import kstest

from mohb.benchio import ConfigRow, TransferCorpus
from mohb.core import ContractError, SeededRng
from mohb.pareto import top_k_nd
from mohb.transfer import (
    SurrogateFront,
    fit_normalizer,
    fit_surrogate,
    normalize_corpus,
    propose_configs,
    sample_front,
)

PHI_INV = NormalDist().inv_cdf


def corpus_from(y, tasks=None):
    y = np.asarray(y, dtype=float)
    n, t, m = y.shape
    return TransferCorpus(
        tuple(ConfigRow.make({"x0": i}) for i in range(n)),
        tuple(tasks or [f"t{j}" for j in range(t)]),
        tuple(f"o{k}" for k in range(m)),
        y,
    )


def oracle_z(values):
    """Average-rank plotting position, then the standard normal quantile."""
    n = len(values)
    out = []
    for v in values:
        less = sum(1 for w in values if w < v)
        equal = sum(1 for w in values if w == v)
        out.append(PHI_INV((less + (equal + 1) / 2) / (n + 1)))
    return out


def test_normalizer_example():
    corpus = corpus_from([[[3.0]], [[1.0]], [[2.0]]])
    norm = fit_normalizer(corpus)
    np.testing.assert_allclose(norm.cdf(0, 0, [3, 1, 2]), [0.75, 0.25, 0.5])
    psi = norm.psi(0, 0, [3, 1, 2])
    np.testing.assert_allclose(psi, [PHI_INV(0.75), PHI_INV(0.25), 0.0], atol=1e-12)
    np.testing.assert_allclose(psi, [0.6745, -0.6745, 0], atol=1e-4)


def test_normalizer_ties_and_monotone():
    norm = fit_normalizer(corpus_from([[[4.0]], [[4.0]]]))
    np.testing.assert_allclose(norm.psi(0, 0, [4.0, 4.0]), [0.0, 0.0], atol=1e-12)
    rng = np.random.default_rng(0)
    norm = fit_normalizer(corpus_from(rng.random((30, 2, 2))))
    ys = np.sort(rng.random(200) * 1.4 - 0.2)
    assert np.all(np.diff(norm.psi(1, 0, ys)) >= 0)
    assert np.all(np.isfinite(norm.psi(1, 0, [-1e9, 1e9])))


def test_surrogate_matches_loop_oracle():
    rng = np.random.default_rng(1)
    y = rng.random((8, 3, 2))
    y[2, 1, 0] = y[5, 1, 0]  # a tie
    sur = fit_surrogate(corpus_from(y))
    for k in range(2):
        z = np.array([oracle_z(list(y[:, j, k])) for j in range(3)]).T  # (n, T)
        np.testing.assert_allclose(sur.mean[:, k], z.mean(axis=1), atol=1e-12)
        np.testing.assert_allclose(sur.var[:, k], ((z - z.mean(axis=1, keepdims=True)) ** 2).mean(axis=1), atol=1e-12)
    np.testing.assert_allclose(normalize_corpus(corpus_from(y)), np.stack(
        [np.array([oracle_z(list(y[:, j, k])) for k in range(2)]).T for j in range(3)], axis=1), atol=1e-12)


def test_surrogate_population_variance():
    # two tasks where config 0 sits at z = 0 and z = PHI_INV(0.75)
    y = [[[2.0], [3.0]], [[1.0], [1.0]], [[3.0], [2.0]]]
    sur = fit_surrogate(corpus_from(y))
    a, b = 0.0, PHI_INV(0.75)
    assert sur.mean[0, 0] == pytest.approx((a + b) / 2)
    assert sur.var[0, 0] == pytest.approx(((a - b) / 2) ** 2)


def test_surrogate_degenerate_variance():
    rng = np.random.default_rng(2)
    one = fit_surrogate(corpus_from(rng.random((10, 1, 2))))
    assert np.all(one.var == 0)
    col = rng.random((10, 1, 2))
    same = fit_surrogate(corpus_from(np.concatenate([col, col, col], axis=1)))
    assert np.allclose(same.var, 0)
    np.testing.assert_allclose(same.mean, fit_surrogate(corpus_from(col)).mean)


def test_monotone_transform_leaves_surrogate_unchanged():
    rng = np.random.default_rng(3)
    y = rng.random((40, 3, 2)) + 0.1
    warped = y.copy()
    warped[:, 1, 0] = np.exp(5 * warped[:, 1, 0])
    warped[:, 2, 1] = np.log(warped[:, 2, 1]) * 3 + 7
    a, b = fit_surrogate(corpus_from(y)), fit_surrogate(corpus_from(warped))
    np.testing.assert_array_equal(a.mean, b.mean)
    np.testing.assert_array_equal(a.var, b.var)


def test_psi_columns_look_standard_normal():
    rng = np.random.default_rng(4)
    z = normalize_corpus(corpus_from(rng.lognormal(size=(100, 2, 1))))
    for j in range(2):
        assert kstest(z[:, j, 0], "norm").pvalue > 0.01


def test_sample_front():
    sur = SurrogateFront(np.array([[0.5, -1.0], [0.0, 2.0]]), np.zeros((2, 2)))
    np.testing.assert_array_equal(sample_front(sur, SeededRng(0), sigma_floor=0.0), sur.mean)
    a = sample_front(sur, SeededRng(9))
    np.testing.assert_array_equal(a, sample_front(sur, SeededRng(9)))
    assert not np.array_equal(a, sur.mean)


def test_sample_front_moments():
    sur = SurrogateFront(np.full((10_000, 1), 0.5), np.full((10_000, 1), 0.25))
    draws = sample_front(sur, SeededRng(1))[:, 0]
    assert abs(draws.mean() - 0.5) < 0.015
    assert abs(draws.var() - 0.25) < 0.01


def test_propose_dominant_config():
    floor = 0.01
    mean = np.zeros((20, 2))
    mean[0] = -10 * floor
    sur = SurrogateFront(mean, np.zeros((20, 2)))
    hits = sum(propose_configs(sur, 1, SeededRng(s), floor) == [0] for s in range(100))
    assert hits >= 99


def test_propose_exchangeable_configs():
    sur = SurrogateFront(np.zeros((2, 2)), np.ones((2, 2)))
    picks = [propose_configs(sur, 1, SeededRng(s))[0] for s in range(2000)]
    assert abs(np.mean(picks) - 0.5) < 0.05


def test_propose_deterministic_without_variance():
    rng = np.random.default_rng(5)
    sur = SurrogateFront(rng.normal(size=(15, 3)), np.zeros((15, 3)))
    expected = top_k_nd(sur.mean, 6)
    for s in range(5):
        assert propose_configs(sur, 6, SeededRng(s), sigma_floor=0.0) == expected
    assert sorted(propose_configs(sur, 15, SeededRng(0))) == list(range(15))
    with pytest.raises(ContractError):
        propose_configs(sur, 16, SeededRng(0))


def test_corpus_invariants():
    with pytest.raises(ContractError):
        corpus_from(np.ones((1, 2, 1)))
