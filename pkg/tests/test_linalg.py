import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm, logm

from curvlab.errors import DomainError
from curvlab.linalg import (apply_scalar, hermitian_eig, is_psd, log_mean_weights, matrix_func,
                            operator_norm, psd_min_eig)


def random_herm(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (z + z.conj().T) / 2


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_eig_reconstructs(n, seed):
    h = random_herm(np.random.default_rng(seed), n)
    e = hermitian_eig(h)
    assert np.allclose(e.reconstruct(), h, atol=1e-12)
    assert np.all(np.diff(e.eigenvalues) >= 0)


def test_exp_log_match_scipy():
    rng = np.random.default_rng(3)
    h = random_herm(rng, 4)
    assert np.allclose(matrix_func(h, "exp"), expm(h), atol=1e-10)
    p = expm(h)
    assert np.allclose(matrix_func(p, "log"), logm(p), atol=1e-9)


def test_log_of_singular_raises_with_value():
    with pytest.raises(DomainError) as info:
        apply_scalar("log", np.array([1.0, -0.5]))
    assert info.value.value == -0.5


def test_unknown_function_name():
    with pytest.raises(DomainError):
        apply_scalar("cosh", np.array([1.0]))


def test_psd_helpers():
    assert is_psd(np.diag([0.0, 1.0]))
    assert not is_psd(np.diag([-1e-3, 1.0]))
    assert psd_min_eig(np.diag([2.0, 3.0])) == pytest.approx(2.0)
    assert operator_norm(np.diag([1.0, -4.0])) == pytest.approx(4.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-6, 10), st.floats(1e-6, 10))
def test_log_mean_matches_integral(p, q):
    # (p - q) / (log p - log q) = int_0^1 p^s q^(1-s) ds, Gauss-Legendre quadrature
    x, w = np.polynomial.legendre.leggauss(64)
    s = (x + 1) / 2
    ref = 0.5 * np.sum(w * p ** s * q ** (1 - s))
    got = float(log_mean_weights([p], [q])[0, 0])
    assert got == pytest.approx(ref, rel=1e-10)


def test_log_mean_diagonal():
    p = np.array([0.3, 2.0])
    L = log_mean_weights(p, p)
    assert np.allclose(np.diag(L), p)
    assert np.allclose(L, L.T)
    assert L[0, 1] == pytest.approx((2.0 - 0.3) / np.log(2.0 / 0.3))
