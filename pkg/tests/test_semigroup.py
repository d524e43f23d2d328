import math

import numpy as np
import pytest
from scipy.linalg import expm

from curvlab.algebra import FiniteAlgebra, random_density
from curvlab.errors import NonUnitalError, NotDissipativeError, SymmetryError
from curvlab.models import clifford_number_semigroup, depolarizing_semigroup, matrix_algebra
from curvlab.semigroup import (Superoperator, build_semigroup, cb_return_time, choi_operator,
                               commuting_square_check, evolve, fixed_point_expectation, is_ergodic, markov_check, spectral_gap,
                               tensor_semigroup, trivial_semigroup)


def test_depolarizing_evolution_closed_form():
    alg = matrix_algebra(3)
    S = depolarizing_semigroup(alg)
    x = alg.random_element(np.random.default_rng(0))
    t = 0.7
    tau = complex(alg.trace(x))
    expect = math.exp(-t) * x.full() + (1 - math.exp(-t)) * tau * np.eye(3)
    assert np.allclose(evolve(S, x, t).full(), expect, atol=1e-12)


def test_generator_exponential_matches_scipy():
    S = clifford_number_semigroup(2)
    A = S.generator.matrix
    for t in (0.0, 0.4, 2.5):
        assert np.allclose(S.matrix_at(t), expm(-t * A), atol=1e-12)


def test_markov_properties():
    rep = markov_check(depolarizing_semigroup(matrix_algebra(2)), [0.0, 0.5, 3.0])
    assert rep.passed
    assert rep.worst_unital <= 1e-12 and rep.worst_trace <= 1e-12


def test_choi_of_identity_and_trace_on_m2():
    alg = matrix_algebra(2)
    S = depolarizing_semigroup(alg)
    C_id = choi_operator(Superoperator.identity(alg))
    C_E = choi_operator(Superoperator(alg, S.fixed_point.matrix))
    assert np.linalg.norm(C_id, 2) == pytest.approx(4.0)
    assert np.linalg.norm(C_id - C_E, 2) == pytest.approx(3.0)
    assert cb_return_time(S).t_cb == pytest.approx(math.log(6), abs=1e-8)


def test_cb_time_scales_with_rate():
    S = depolarizing_semigroup(matrix_algebra(2))
    t1 = cb_return_time(S).t_cb
    t2 = cb_return_time(S.scaled(2.0)).t_cb
    assert t2 == pytest.approx(t1 / 2, abs=1e-8)


def test_build_rejects_non_symmetric():
    alg = FiniteAlgebra([1, 1], [0.5, 0.5])
    with pytest.raises(SymmetryError):
        build_semigroup(Superoperator(alg, np.array([[0.0, 1.0], [0.0, 1.0]])))


def test_build_rejects_non_unital():
    alg = FiniteAlgebra([1, 1], [0.5, 0.5])
    with pytest.raises(NonUnitalError):
        build_semigroup(Superoperator(alg, np.eye(2)))


def test_build_rejects_negative_spectrum():
    alg = FiniteAlgebra([1, 1], [0.5, 0.5])
    # eigenvalue -1 on the mean-zero vector, 0 on the identity
    m = -np.array([[0.5, -0.5], [-0.5, 0.5]]) * 2
    with pytest.raises(NotDissipativeError):
        build_semigroup(Superoperator(alg, m))


def test_fixed_point_of_trivial_is_identity():
    alg = matrix_algebra(2)
    S = trivial_semigroup(alg)
    E = fixed_point_expectation(S)
    assert np.allclose(E.matrix, np.eye(alg.dim))
    assert not is_ergodic(S)
    assert is_ergodic(depolarizing_semigroup(alg))


def test_tensor_gap_is_minimum():
    a = depolarizing_semigroup(matrix_algebra(2)).scaled(0.3)
    b = clifford_number_semigroup(1)
    assert spectral_gap(tensor_semigroup(a, b)) == pytest.approx(0.3, abs=1e-12)


def test_tensor_semigroup_factorizes_on_products():
    from curvlab.algebra import tensor_element
    a = depolarizing_semigroup(matrix_algebra(2))
    b = clifford_number_semigroup(1)
    ab = tensor_semigroup(a, b)
    rng = np.random.default_rng(4)
    x = a.algebra.random_element(rng)
    y = b.algebra.random_element(rng)
    lhs = ab.evolve(tensor_element(x, y, ab.algebra), 0.9)
    rhs = tensor_element(a.evolve(x, 0.9), b.evolve(y, 0.9), ab.algebra)
    assert (lhs - rhs).norm() <= 1e-12


def test_evolution_preserves_states():
    alg = FiniteAlgebra([2, 1])
    S = depolarizing_semigroup(alg)
    rho = random_density(alg, 3)
    out = S.evolve(rho.element, 1.3)
    assert alg.trace(out) == pytest.approx(1.0)
    assert min(np.linalg.eigvalsh(b)[0] for b in out.blocks) > 0


def _dephasing(alg, U):
    from curvlab.algebra import conditional_expectation
    units = [alg.element([U @ np.diag(np.eye(2)[i]) @ U.conj().T]) for i in range(2)]
    return depolarizing_semigroup(alg, conditional_expectation(alg, units))


def test_non_commuting_dephasings_rejected():
    from curvlab.errors import CommutationError
    alg = matrix_algebra(2)
    c, s = math.cos(math.pi / 8), math.sin(math.pi / 8)
    SZ = _dephasing(alg, np.eye(2))
    SN = _dephasing(alg, np.array([[c, -s], [s, c]]))
    with pytest.raises(CommutationError) as info:
        commuting_square_check(SZ, SN)
    assert info.value.residual > 1e-3
