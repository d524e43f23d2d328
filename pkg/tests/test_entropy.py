import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import logm

from curvlab.algebra import DensityState, FiniteAlgebra, maximally_mixed, random_density
from curvlab.entropy_curvature import (RegularizationWarning, best_bakry_emery_lambda, entropy,
                                       entropy_decay_check, fisher_information, gamma_form, mlsi_ratio,
                                       mlsi_ratio_search, relative_entropy, rho_weighted_norm)
from curvlab.errors import DomainError
from curvlab.models import (clifford_number_semigroup, cyclic_group, depolarizing_semigroup,
                            fourier_multiplier_semigroup, matrix_algebra, two_point_semigroup)

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_relative_entropy_matches_logm(seed):
    alg = matrix_algebra(3)
    rho = random_density(alg, seed)
    sigma = random_density(alg, seed + 1)
    r, s = rho.element.blocks[0], sigma.element.blocks[0]
    ref = np.trace(r @ (logm(r) - logm(s))).real / 3
    assert relative_entropy(rho, sigma) == pytest.approx(ref, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_relative_entropy_nonneg_and_pinsker(seed):
    alg = FiniteAlgebra([2, 1], [0.6, 0.4])
    rho = random_density(alg, seed)
    sigma = random_density(alg, (seed * 7 + 3) % 2**32)
    d = relative_entropy(rho, sigma)
    assert d >= 0
    diff = rho.element - sigma.element
    l1 = sum(w / n * np.sum(np.abs(np.linalg.eigvalsh(b)))
             for w, n, b in zip(alg.trace_weights, alg.block_dims, diff.blocks))
    assert d >= 0.5 * l1 ** 2 - 1e-12
    assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-12)


def test_relative_entropy_kernel_is_infinite():
    alg = FiniteAlgebra([2])
    rho = DensityState(alg.element([np.diag([1.0, 1.0])]))
    sigma = DensityState(alg.element([np.diag([2.0, 0.0])]))
    assert relative_entropy(rho, sigma) == math.inf


def test_entropy_of_identity_is_zero():
    alg = FiniteAlgebra([2, 3])
    assert entropy(maximally_mixed(alg)) == pytest.approx(0.0, abs=1e-14)


def test_fisher_depolarizing_formula():
    # A = id - tau gives I(rho) = tau((rho - 1) log rho)
    alg = matrix_algebra(2)
    S = depolarizing_semigroup(alg)
    rho = random_density(alg, 11)
    r = rho.element.blocks[0]
    ref = np.trace((r - np.eye(2)) @ logm(r)).real / 2
    assert fisher_information(S, rho) == pytest.approx(ref, abs=1e-10)


def test_fisher_singular_state_warns():
    alg = matrix_algebra(2)
    S = depolarizing_semigroup(alg)
    rho = DensityState(alg.element([np.diag([2.0, 0.0])]))
    with pytest.warns(RegularizationWarning):
        fisher_information(S, rho)


def test_rho_weighted_norm_matches_quadrature():
    alg = matrix_algebra(3)
    rng = np.random.default_rng(5)
    x = alg.random_element(rng)
    rho = random_density(alg, 8)
    r = rho.element.blocks[0]
    w, V = np.linalg.eigh(r)
    xb = x.blocks[0]
    nodes, weights = np.polynomial.legendre.leggauss(80)
    total = 0.0
    for s, ws in zip((nodes + 1) / 2, weights / 2):
        a = V @ np.diag(w ** (1 - s)) @ V.conj().T
        b = V @ np.diag(w ** s) @ V.conj().T
        total += ws * np.trace(xb.conj().T @ a @ xb @ b).real / 3
    assert rho_weighted_norm(x, rho) == pytest.approx(math.sqrt(total), rel=1e-8)


def test_rho_weighted_norm_at_identity_is_l2():
    alg = FiniteAlgebra([2, 2])
    x = alg.random_element(np.random.default_rng(1))
    assert rho_weighted_norm(x, maximally_mixed(alg)) == pytest.approx(x.norm(), rel=1e-12)


def test_gamma_form_is_positive():
    S = clifford_number_semigroup(2)
    alg = S.algebra
    rng = np.random.default_rng(2)
    for _ in range(10):
        x = alg.random_element(rng)
        g = gamma_form(S, x, x)
        assert min(np.linalg.eigvalsh(0.5 * (b + b.conj().T))[0] for b in g.blocks) >= -1e-12


def test_gamma_depolarizing_closed_form():
    # Gamma(x, x) = 1/2 (x* x + tau(x* x) - x* tau(x) - tau(x*) x) for A = id - tau
    alg = matrix_algebra(2)
    S = depolarizing_semigroup(alg)
    x = alg.random_element(np.random.default_rng(3))
    xf = x.full()
    tau_x = np.trace(xf) / 2
    tau_xx = np.trace(xf.conj().T @ xf) / 2
    ref = 0.5 * (xf.conj().T @ xf + tau_xx * np.eye(2) - xf.conj().T * tau_x - np.conj(tau_x) * xf)
    assert np.allclose(gamma_form(S, x, x).full(), ref, atol=1e-12)


def test_bakry_emery_values():
    assert best_bakry_emery_lambda(depolarizing_semigroup(matrix_algebra(2))).best_lambda >= 0.5
    assert best_bakry_emery_lambda(clifford_number_semigroup(1)).best_lambda == pytest.approx(1.0, abs=1e-5)
    z5 = fourier_multiplier_semigroup(cyclic_group(5, "wordlength"))[0]
    assert best_bakry_emery_lambda(z5).best_lambda > 0


def test_decay_check_rejects_negative_lambda():
    S = depolarizing_semigroup(matrix_algebra(2))
    with pytest.raises(DomainError):
        entropy_decay_check(S, random_density(S.algebra, 0), -1.0, [1.0])


def test_decay_fails_for_too_large_lambda():
    S = depolarizing_semigroup(matrix_algebra(2))
    rho = random_density(S.algebra, 0)
    assert entropy_decay_check(S, rho, 0.5, [0.5, 1.0]).passed
    assert not entropy_decay_check(S, rho, 5.0, [0.5, 1.0]).passed


def test_mlsi_ratio_nan_at_fixed_point():
    S = depolarizing_semigroup(matrix_algebra(2))
    assert math.isnan(mlsi_ratio(S, maximally_mixed(S.algebra)))


def test_mlsi_search_min_decreases_with_samples():
    S = two_point_semigroup()
    small = mlsi_ratio_search(S, samples=50, seed=3, refine=False)
    large = mlsi_ratio_search(S, samples=500, seed=3, refine=False)
    assert large.sampled_min <= small.sampled_min
    assert large.upper_bound


def test_mlsi_search_deterministic():
    S = depolarizing_semigroup(matrix_algebra(2))
    a = mlsi_ratio_search(S, samples=30, seed=9)
    b = mlsi_ratio_search(S, samples=30, seed=9)
    assert a.min_ratio == b.min_ratio


def test_clifford_mlsi_samples_above_one():
    S = clifford_number_semigroup(1)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegularizationWarning)
        rep = mlsi_ratio_search(S, samples=200, seed=0, refine=False)
    assert rep.sampled_min >= 1 - 1e-6
