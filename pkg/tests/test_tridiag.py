import numpy as np
import pytest

from bosesemi.tridiag import EigensolverError, tridiag_eigh


def dense(diag, off):
    return np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)


def test_small_known_matrix():
    w, = tridiag_eigh([0.0, 0.0, 0.0], [np.sqrt(2), np.sqrt(2)])
    assert np.allclose(w, [-2.0, 0.0, 2.0], atol=1e-14)


def test_oracle_equivalence_parameter_grid():
    # Brute-force dense diagonalization as the independent route, over
    # all sizes up to 9x9 and a grid of matrix contents.
    rng = np.random.default_rng(0)
    for n in range(2, 10):
        for _ in range(25):
            d = rng.normal(scale=rng.uniform(0.5, 20.0), size=n)
            e = rng.normal(scale=rng.uniform(0.5, 20.0), size=n - 1)
            w, = tridiag_eigh(d, e)
            ref = np.linalg.eigvalsh(dense(d, e))
            scale = max(np.max(np.abs(d)), np.max(np.abs(e)))
            assert np.max(np.abs(w - ref)) < 1e-10 * max(scale, 1.0)


def test_eigenvectors_orthonormal_and_accurate():
    rng = np.random.default_rng(1)
    for n in (3, 8, 25, 60):
        d = rng.normal(size=n)
        e = rng.normal(size=n - 1)
        w, v = tridiag_eigh(d, e, want_vectors=True)
        h = dense(d, e)
        norm = max(np.max(np.abs(d)), np.max(np.abs(e)))
        assert np.max(np.abs(v.T @ v - np.eye(n))) < 1e-10
        resid = h @ v - v * w
        assert np.max(np.abs(resid)) < 1e-9 * norm
        assert np.all(np.diff(w) >= -1e-12 * norm)


def test_sign_convention_first_nonzero_positive():
    rng = np.random.default_rng(2)
    d = rng.normal(size=12)
    e = rng.normal(size=11)
    _, v = tridiag_eigh(d, e, want_vectors=True)
    for j in range(12):
        col = v[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12 * np.max(np.abs(col)))
        assert col[nz[0]] > 0


def test_degenerate_and_trivial_cases():
    w, = tridiag_eigh([3.0], [])
    assert np.allclose(w, [3.0])
    w, = tridiag_eigh([1.0, 1.0, 1.0], [0.0, 0.0])
    assert np.allclose(w, [1.0, 1.0, 1.0])


def test_convergence_failure_diagnostic():
    with pytest.raises(EigensolverError, match="iterations"):
        tridiag_eigh(np.zeros(8), np.ones(7), max_iter=0)
