"""Both kernel paths (numba-compiled and pure numpy) must agree."""

import numpy as np
import pytest
from scipy.linalg import schur

from pairspec import kernels, numkit
from helpers import random_covariance, random_hermitian

needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba unavailable")


def _triangular_pair(rng, d):
    A = -1j * random_hermitian(rng, d) - 0.1 * np.eye(d)
    TA, _ = schur(A, output="complex")
    TB, _ = schur(A.conj().T, output="complex")
    F = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return TA, TB, F


@pytest.mark.parametrize("d", [3, 8, 17])
def test_triangular_numpy_solves(d):
    rng = np.random.default_rng(d)
    TA, TB, F = _triangular_pair(rng, d)
    X = kernels.sylvester_triangular_numpy(TA, TB, F)
    assert np.linalg.norm(TA @ X + X @ TB - F) / np.linalg.norm(F) < 1e-12


@needs_numba
@pytest.mark.parametrize("d", [3, 8, 17])
def test_triangular_paths_agree(d):
    rng = np.random.default_rng(100 + d)
    TA, TB, F = _triangular_pair(rng, d)
    X_np = kernels.sylvester_triangular_numpy(TA, TB, F)
    X_nb = kernels.sylvester_triangular_numba(TA, TB, F)
    assert np.linalg.norm(X_np - X_nb) / np.linalg.norm(X_np) < 1e-12


@needs_numba
def test_rk4_paths_agree():
    rng = np.random.default_rng(5)
    d = 6
    W = -1j * random_hermitian(rng, d) - 0.05 * np.eye(d)
    theta = random_covariance(rng, d)
    out_np, done_np, ovf_np = kernels.rk4_lyapunov_numpy(W, theta, 1e-3, 500)
    out_nb, done_nb, ovf_nb = kernels.rk4_lyapunov_numba(W, theta, 1e-3, 500)
    assert done_np == done_nb == 500
    assert not ovf_np and not ovf_nb
    assert np.linalg.norm(out_np - out_nb) < 1e-12 * np.linalg.norm(out_np)


@needs_numba
def test_rk4_overflow_flag_matches():
    # A generator with gain blows past the limit on both paths identically.
    W = np.array([[0.5 + 0j]])
    theta = np.array([[1.0 + 0j]])
    out_np = kernels.rk4_lyapunov_numpy(W, theta, 0.5, 200, overflow_limit=1e6)
    out_nb = kernels.rk4_lyapunov_numba(W, theta, 0.5, 200, overflow_limit=1e6)
    assert out_np[2] and out_nb[2]
    assert out_np[1] == out_nb[1]


@needs_numba
def test_trapezoid_paths_agree():
    rng = np.random.default_rng(9)
    d = 5
    W = -1j * random_hermitian(rng, d) - 0.2 * np.eye(d)
    P = numkit.matrix_exponential(W, 0.05)
    theta = random_covariance(rng, d)
    acc_np, E_np = kernels.propagator_trapezoid_numpy(P, theta, 400, 0.05)
    acc_nb, E_nb = kernels.propagator_trapezoid_numba(P, theta, 400, 0.05)
    assert np.linalg.norm(acc_np - acc_nb) < 1e-12 * np.linalg.norm(acc_np)
    assert np.linalg.norm(E_np - E_nb) < 1e-12


def test_dispatch_matches_flag():
    # The active path must be one of the two explicit implementations.
    rng = np.random.default_rng(1)
    TA, TB, F = _triangular_pair(rng, 4)
    X = kernels.sylvester_triangular(TA, TB, F)
    X_ref = (
        kernels.sylvester_triangular_numba(TA, TB, F)
        if kernels.USE_NUMBA
        else kernels.sylvester_triangular_numpy(TA, TB, F)
    )
    assert np.array_equal(X, X_ref)
