import numpy as np
import pytest
import scipy.linalg as sl

from spectral_mdp.eigensolver import tridiag_eig, tridiag_eig_batch
from spectral_mdp.errors import ConvergenceError


def test_one_by_one():
    vals, w = tridiag_eig([3.5], [])
    assert vals.tolist() == [3.5] and w.tolist() == [1.0]


def test_two_by_two_analytic():
    vals, w = tridiag_eig([0.0, 0.0], [1.0])
    np.testing.assert_allclose(vals, [-1.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(w, [0.5, 0.5], atol=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_matches_lapack(seed):
    rng = np.random.default_rng(seed)
    for _ in range(40):
        n = int(rng.integers(2, 80))
        d = rng.normal(size=n) * rng.uniform(0.1, 10)
        e = rng.uniform(1e-3, 3, size=n - 1)
        vals, w = tridiag_eig(d, e)
        ref_vals, ref_vecs = sl.eigh_tridiagonal(d, e)
        scale = max(1.0, np.abs(ref_vals).max())
        np.testing.assert_allclose(vals, ref_vals, atol=1e-13 * scale)
        np.testing.assert_allclose(w, ref_vecs[0] ** 2, atol=1e-12)
        assert abs(w.sum() - 1) < 1e-13


def test_clustered_and_graded():
    n = 40
    d = np.zeros(n)
    e = np.full(n - 1, 1e-6)
    vals, w = tridiag_eig(d, e)
    ref = sl.eigh_tridiagonal(d, e, eigvals_only=True)
    np.testing.assert_allclose(vals, ref, atol=1e-18)
    d = 10.0 ** np.arange(-8, 8, 16 / n)[:n]
    e = np.sqrt(d[:-1] * d[1:]) * 0.3
    vals, w = tridiag_eig(d, e)
    np.testing.assert_allclose(vals, sl.eigh_tridiagonal(d, e, eigvals_only=True), rtol=1e-10)


def test_batch_matches_single():
    rng = np.random.default_rng(3)
    d = rng.normal(size=(25, 12))
    e = rng.uniform(0.1, 1, size=(25, 11))
    bv, bw = tridiag_eig_batch(d, e)
    for r in range(25):
        v, w = tridiag_eig(d[r], e[r])
        assert np.array_equal(v, bv[r]) and np.array_equal(w, bw[r])


def test_iteration_cap_reports():
    rng = np.random.default_rng(0)
    d = rng.normal(size=30)
    e = rng.uniform(0.5, 1, size=29)
    with pytest.raises(ConvergenceError, match="iterations"):
        tridiag_eig(d, e, max_iter=0)


def test_bad_shapes():
    with pytest.raises(ValueError):
        tridiag_eig([], [])
    with pytest.raises(ValueError):
        tridiag_eig([1.0, 2.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        tridiag_eig([np.nan, 1.0], [1.0])
