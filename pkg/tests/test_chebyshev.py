import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curvlab.constants import (ChebyshevOverflowError, chebyshev_table, hunt_eigenvalues, onplus_spectral_data,
                               qaut_spectral_data)
from curvlab.errors import DomainError, MeasureSupportError


def test_small_values():
    tab = chebyshev_table(3.0, 4)
    assert tab.U.tolist() == [1, 3, 8, 21, 55]
    assert tab.U[2] == 8


@pytest.mark.parametrize("k", [0, 1, 5, 17])
def test_value_at_two(k):
    tab = chebyshev_table(2.0, 20)
    assert tab.U[k] == k + 1


@settings(max_examples=40, deadline=None)
@given(st.floats(-1.9, 1.9), st.integers(1, 30))
def test_trig_form_inside_interval(x, k):
    # U_k(2 cos th) = sin((k+1) th) / sin th
    th = math.acos(x / 2)
    tab = chebyshev_table(x, k)
    assert tab.U[k] == pytest.approx(math.sin((k + 1) * th) / math.sin(th), abs=1e-9)


def test_values_match_polynomial_recursion():
    X = np.polynomial.Polynomial([0.0, 1.0])
    polys = [np.polynomial.Polynomial([1.0]), X]
    for _ in range(11):
        polys.append(X * polys[-1] - polys[-2])
    tab = chebyshev_table(2.5, 12)
    for k, p in enumerate(polys):
        assert tab.U[k] == pytest.approx(p(2.5), rel=1e-12)
        assert tab.dU[k] == pytest.approx(p.deriv()(2.5), rel=1e-12)


def test_overflow_without_log_scale():
    with pytest.raises(ChebyshevOverflowError):
        chebyshev_table(10.0, 400)


def test_log_scale_large_k():
    tab = chebyshev_table(3.0, 10_000, log_scale=True)
    assert np.isinf(tab.U[-1])
    assert np.max(tab.recursion_residual()) <= 1e-12
    assert np.max(tab.derivative_identity_residual()) <= 1e-12
    # log U_k(x) ~ (k + 1) log(root) - log(root - 1/root) for the larger root
    root = (3 + math.sqrt(5)) / 2
    assert tab.log_abs_U[-1] == pytest.approx(10_001 * math.log(root) - math.log(root - 1 / root), rel=1e-12)
    ratio = tab.ratio_dU_U()
    assert np.all(np.isfinite(ratio))


def test_onplus_n2_flags_upper_bound():
    sp = onplus_spectral_data(2, 20)
    assert "lambda_upper" not in sp.bounds.checks
    assert sp.bounds.flags and sp.bounds.passed


def test_onplus_rejects_small_n():
    with pytest.raises(DomainError):
        onplus_spectral_data(1.5, 10)


def test_qaut_bounds():
    sp = qaut_spectral_data(6, 30)
    assert sp.bounds.passed and "xi_upper" in sp.bounds.checks
    flagged = qaut_spectral_data(4, 30)
    assert "xi_upper" not in flagged.bounds.checks and flagged.bounds.flags
    with pytest.raises(DomainError):
        qaut_spectral_data(3, 10)


def test_hunt_without_atoms_is_scaled_onplus():
    lam = hunt_eigenvalues(3.0, 2.0, [], 20)
    sp = onplus_spectral_data(3.0, 20)
    assert np.allclose(lam, 2.0 * sp.lambda_k, rtol=1e-12)


def test_hunt_atom_formula_small_k():
    N, x, w = 3.0, 1.0, 0.5
    lam = hunt_eigenvalues(N, 0.0, [(x, w)], 3)
    U = chebyshev_table(N, 3).U
    Ux = chebyshev_table(x, 3).U
    expect = w * (Ux - U) / (x - N) / U
    assert np.allclose(lam[1:], expect[1:], rtol=1e-12)
    assert lam[0] == 0.0
    assert np.all(lam[1:] > 0)


def test_hunt_large_k_is_finite():
    lam = hunt_eigenvalues(4.0, 1.0, [(-4.0, 1.0), (0.5, 2.0)], 5000)
    assert np.all(np.isfinite(lam))


def test_hunt_rejects_atoms_at_or_past_n():
    with pytest.raises(MeasureSupportError):
        hunt_eigenvalues(3.0, 1.0, [(3.0, 1.0)], 10)
    with pytest.raises(MeasureSupportError):
        hunt_eigenvalues(3.0, 1.0, [(-3.5, 1.0)], 10)
    with pytest.raises(DomainError):
        hunt_eigenvalues(3.0, 1.0, [(0.0, -1.0)], 10)
