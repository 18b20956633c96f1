import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from whh.eigen import EigenSolverError, householder_tridiagonalize, symmetric_eigh, tridiagonal_ql


def _random_symmetric(rng, n):
    a = rng.standard_normal((n, n))
    return 0.5 * (a + a.T)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16])
def test_matches_lapack(np_rng, n):
    a = _random_symmetric(np_rng, n)
    w, v = symmetric_eigh(a)
    np.testing.assert_allclose(w, scipy.linalg.eigvalsh(a), atol=1e-12)
    np.testing.assert_allclose(v.T @ v, np.eye(n), atol=1e-12)
    np.testing.assert_allclose(a @ v, v * w, atol=1e-12)


def test_eigenvalues_ascending(np_rng):
    w, _ = symmetric_eigh(_random_symmetric(np_rng, 10))
    assert np.all(np.diff(w) >= 0)


def test_householder_reconstructs(np_rng):
    a = _random_symmetric(np_rng, 7)
    d, e, q = householder_tridiagonalize(a)
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    np.testing.assert_allclose(q @ t @ q.T, a, atol=1e-12)


def test_graded_tridiagonal_keeps_small_eigenvalues():
    # eigenvalues spanning 16 decades: the small end must keep relative accuracy
    d = np.logspace(-8, 8, 12)
    e = np.sqrt(d[:-1] * d[1:]) * 1e-3
    w, z = tridiagonal_ql(d, e)
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    ref = scipy.linalg.eigvalsh_tridiagonal(d, e)
    np.testing.assert_allclose(w, ref, rtol=1e-10)
    np.testing.assert_allclose(t @ z, z * w, atol=1e-7)
    w_rev, _ = tridiagonal_ql(d[::-1].copy(), e[::-1].copy())
    np.testing.assert_allclose(w_rev, ref, rtol=1e-10)


def test_diagonal_input_is_exact():
    w, v = symmetric_eigh(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_array_equal(w, [1.0, 2.0, 3.0])
    np.testing.assert_allclose(np.abs(v), np.eye(3)[:, [1, 2, 0]])


def test_iteration_cap_raises():
    d = np.array([1.0, 2.0, 3.0, 4.0])
    e = np.array([1.0, 1.0, 1.0])
    with pytest.raises(EigenSolverError):
        tridiagonal_ql(d, e, max_sweeps=0)


def test_rejects_non_square():
    with pytest.raises(ValueError):
        symmetric_eigh(np.ones((2, 3)))


@given(st.integers(2, 9), st.integers(0, 2**32 - 1))
def test_property_reconstruction(n, seed):
    a = _random_symmetric(np.random.default_rng(seed), n)
    w, v = symmetric_eigh(a)
    np.testing.assert_allclose((v * w) @ v.T, a, atol=1e-11 * max(1.0, np.abs(a).max()))
