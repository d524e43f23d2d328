import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curvlab.entropy_curvature import gradient_estimate_check, mlsi_ratio
from curvlab.errors import DomainError
from curvlab.models import (anticommutation_residual, clifford_derivation, clifford_number_semigroup,
                            clifford_realization, depolarizing_inner_derivation, depolarizing_semigroup,
                            derivation_triple_check, gell_mann_basis, matrix_algebra, popcount,
                            two_point_ratio, two_point_semigroup, two_point_state)
from curvlab.semigroup import spectral_gap


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_clifford_generators_anticommute(d):
    assert anticommutation_residual(d) <= 1e-13


def test_clifford_monomials_orthonormal():
    R = clifford_realization(3)
    mons = R.monomials()
    alg = mons[0].algebra
    G = np.array([[alg.inner(a, b) for b in mons] for a in mons])
    assert np.allclose(G, np.eye(8), atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 7), st.floats(0, 3))
def test_number_semigroup_scales_monomials(mask, t):
    R = clifford_realization(3)
    S = clifford_number_semigroup(3)
    x = R.monomial(mask)
    out = S.evolve(x, t)
    assert (out - math.exp(-t * popcount(mask)) * x).norm() <= 1e-11


def test_clifford_coefficients_roundtrip():
    R = clifford_realization(2)
    c = np.array([1.0, -2.0, 0.5j, 3.0])
    assert np.allclose(R.coefficients(R.assemble(c)), c)


def test_clifford_spectrum_is_integers():
    S = clifford_number_semigroup(3)
    w = np.sort(np.linalg.eigvalsh(0.5 * (S.generator.matrix + S.generator.matrix.conj().T)))
    assert np.allclose(w, sorted(popcount(m) for m in range(8)), atol=1e-12)


def test_clifford_triple_random_pairs():
    rep = derivation_triple_check(clifford_derivation(2), random_pairs=50, seed=1)
    assert rep.passed


def test_depolarizing_spectrum():
    S = depolarizing_semigroup(matrix_algebra(3), rate=2.0)
    w = np.sort(np.linalg.eigvalsh(0.5 * (S.generator.matrix + S.generator.matrix.conj().T)))
    assert np.allclose(w, [0.0] + [2.0] * 8, atol=1e-12)
    assert spectral_gap(S) == pytest.approx(2.0)


@pytest.mark.parametrize("n", [2, 3])
def test_gell_mann_orthogonal_traceless(n):
    hs = gell_mann_basis(n)
    assert len(hs) == n * n - 1
    for h in hs:
        assert abs(np.trace(h)) <= 1e-12
        assert np.allclose(h, h.conj().T)
    G = np.array([[np.trace(a @ b).real for b in hs] for a in hs])
    assert np.allclose(G, G[0, 0] * np.eye(len(hs)), atol=1e-12)


@pytest.mark.parametrize("n", [2, 3])
def test_inner_derivation_reproduces_generator(n):
    D = depolarizing_inner_derivation(n)
    assert derivation_triple_check(D, random_pairs=30, seed=0).passed


def test_inner_derivation_rejects_scalar_algebra():
    with pytest.raises(DomainError):
        depolarizing_inner_derivation(1)


def test_inner_derivation_gradient_estimate_half():
    D = depolarizing_inner_derivation(2)
    assert gradient_estimate_check(D.semigroup, D, 0.5, samples=50, seed=0).passed


@settings(max_examples=40, deadline=None)
@given(st.floats(1e-3, 0.99))
def test_two_point_ratio_matches_numeric(beta):
    S = two_point_semigroup()
    assert mlsi_ratio(S, two_point_state(beta)) == pytest.approx(float(two_point_ratio(beta)), rel=1e-9)


def test_two_point_ratio_at_least_one_and_limit():
    b = np.linspace(1e-3, 0.999, 200)
    r = two_point_ratio(b)
    assert np.all(r >= 1 - 1e-12)
    assert np.all(np.diff(r) > 0)
    assert float(two_point_ratio(1e-4)) == pytest.approx(1.0, abs=1e-7)
