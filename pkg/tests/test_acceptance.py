"""Acceptance suite: one test per criterion, summarized at the end of the run."""
import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from curvlab.algebra import random_density, tensor
from curvlab.constants import (chebyshev_table, exp_growth_clsi, free_wordlength_clsi, onplus_closed,
                               onplus_clsi, onplus_series, onplus_spectral_data, qaut_closed, qaut_clsi,
                               qaut_series, torus_constants)
from curvlab.entropy_curvature import (best_bakry_emery_lambda, entropy_decay_check, gradient_estimate_check,
                                       mlsi_ratio, mlsi_ratio_search, relative_entropy)
from curvlab.models import (anticommutation_residual, clifford_derivation, clifford_number_semigroup,
                            cyclic_group, depolarizing_semigroup, derivation_triple_check,
                            fourier_multiplier_semigroup, intertwining_check, matrix_algebra, q_gram,
                            rayleigh_ratio, two_point_ratio, two_point_semigroup, two_point_state,
                            z_truncation)
from curvlab.semigroup import (Superoperator, cb_distance, cb_return_time, choi_norm, commuting_square_check,
                               spectral_gap, tensor_semigroup, trivial_semigroup)

pytestmark = pytest.mark.acceptance

R1 = 1 - math.sqrt(2 / 3)
R2 = (4 - math.sqrt(13)) / 3


def test_01_chebyshev_suite():
    t0 = time.perf_counter()
    for N in range(3, 11):
        tab = chebyshev_table(N, 61)
        assert np.max(tab.recursion_residual()) <= 1e-12
        assert np.max(tab.derivative_identity_residual()) <= 1e-12
        k = np.arange(61)
        U = tab.U[:61]
        # U_k(N) + N U'_k(N) = U'_{k-1}(N) + U'_{k+1}(N), direct evaluation
        lhs = U[1:60] + N * tab.dU[1:60]
        rhs = tab.dU[0:59] + tab.dU[2:61]
        assert np.max(np.abs(lhs - rhs) / np.abs(rhs)) <= 1e-12
        sp = onplus_spectral_data(N, 60)
        assert sp.bounds.passed and set(sp.bounds.checks) == {"dimension", "lambda_lower", "lambda_upper"}
        assert np.all(sp.n_k <= float(N) ** k * (1 + 1e-12))
        lam = sp.lambda_k[1:]
        kk = k[1:]
        assert np.all(kk / N <= lam * (1 + 1e-12))
        assert np.all(lam <= kk / (N - 2) * (1 + 1e-12))
    assert time.perf_counter() - t0 < 1.0


def test_02_onplus_constants():
    t0 = time.perf_counter()
    for r in (0.01, 0.1, R1, 0.5, 0.8):
        s = onplus_series(r)
        assert abs(s.partial - (2 * r - r * r) / (1 - r) ** 2) <= 1e-12 * max(1, onplus_closed(r))
        assert s.tail_bound < 1e-12
    assert abs(onplus_closed(R1) - 0.5) <= 1e-12
    for N in range(3, 11):
        rep = onplus_clsi(N)
        assert abs(rep.chain["t_cb"] - N * math.log(N / R1)) <= 1e-8
        assert rep.lambda_clsi == pytest.approx(1 / (4 * rep.t_cb), abs=1e-15)
    rep = onplus_clsi(3)
    assert abs(rep.t_cb - 3 * math.log(3 / R1)) <= 1e-12
    assert abs(rep.t_cb - 8.383) < 1e-3
    assert abs(rep.lambda_clsi - 0.02982) < 1e-5
    assert time.perf_counter() - t0 < 1.0


def test_03_qaut_constants():
    t0 = time.perf_counter()
    for r in (0.01, 0.3, R2, 0.6):
        s = qaut_series(r)
        assert abs(s.partial - qaut_closed(r)) <= 1e-12 * max(1, qaut_closed(r))
    assert abs(qaut_closed(R2) - 0.5) <= 1e-12
    for d in range(4, 11):
        rep = qaut_clsi(d)
        assert abs(rep.chain["t_cb"] - d * math.log(3 * (d - 1) / (4 - math.sqrt(13)))) <= 1e-8
    assert time.perf_counter() - t0 < 1.0


def test_04_fourier_constants():
    for S in range(2, 11):
        example = 1 / (4 * math.log(2 * S * (S + 1) / (S - 1)))
        assert abs(exp_growth_clsi(S, S - 1, 1.0).lambda_clsi - example) <= 1e-12
        assert abs(free_wordlength_clsi(S).lambda_clsi - example) <= 1e-12
    val = free_wordlength_clsi(2).lambda_clsi
    assert val == pytest.approx(1 / (4 * math.log(12)), abs=1e-15)
    assert abs(val - 0.10063) < 1e-4


def test_05_clifford_verification():
    t0 = time.perf_counter()
    for d in (1, 2, 3):
        assert anticommutation_residual(d) <= 1e-13
        D = clifford_derivation(d)
        tr = derivation_triple_check(D, exhaustive_limit=2 ** d)
        assert tr.pairs_checked == 4 ** d
        assert tr.gamma_residual <= 1e-10 and tr.passed
        assert intertwining_check(D, (0.1, 1.0, 2.0)) <= 1e-10
        assert abs(spectral_gap(clifford_number_semigroup(d)) - 1) <= 1e-12
        ge = gradient_estimate_check(D.semigroup, D, 1.0, samples=1000, seed=0)
        assert ge.samples == 1000 and ge.passed
    assert time.perf_counter() - t0 < 30.0


def test_06_depolarizing_curvature():
    t0 = time.perf_counter()
    for n in (2, 3):
        alg = matrix_algebra(n)
        S = depolarizing_semigroup(alg)
        assert best_bakry_emery_lambda(S).best_lambda >= 0.5 - 1e-6
        m = mlsi_ratio_search(S, samples=10_000, seed=0)
        assert m.sampled_min >= 0.5 - 1e-6 and m.min_ratio >= 0.5 - 1e-6
        grid = np.linspace(0.1, 3.0, 10)
        for i in range(100):
            rho = random_density(alg, np.random.default_rng([n, i]))
            assert entropy_decay_check(S, rho, 0.5, grid).passed
    assert time.perf_counter() - t0 < 60.0


def test_07_k_matrix_sharpness():
    n = 50
    assert abs(rayleigh_ratio(z_truncation(n)) - 53 / 102) <= 1e-12
    seq = [rayleigh_ratio(z_truncation(m)) for m in (10, 20, 50, 100)]
    assert all(a > b for a, b in zip(seq, seq[1:]))
    assert all(v > 0.5 for v in seq)
    assert seq[-1] - 0.5 < 0.01


def test_08_two_point_mlsi():
    S = two_point_semigroup()
    rep = mlsi_ratio_search(S, samples=100_000, seed=0, refine=True)
    assert rep.min_ratio >= 1 - 1e-6
    r = mlsi_ratio(S, two_point_state(1e-3))
    assert abs(r - 1) <= 1e-3
    assert r == pytest.approx(float(two_point_ratio(1e-3)), rel=1e-9)


def test_09_q_gram_positivity():
    for q in (-1.0, -0.5, 0.0, 0.5, 1.0):
        for n in range(1, 6):
            for dim in range(1, 4):
                assert q_gram(n, dim, q).min_eig >= -1e-10
        ev = np.linalg.eigvalsh(q_gram(2, 2, q).submatrix([(0, 1), (1, 0)]))
        assert np.max(np.abs(ev - np.sort([1 - q, 1 + q]))) <= 1e-14


def test_10_cb_return_numerics():
    alg = matrix_algebra(2)
    S = depolarizing_semigroup(alg)
    gap_norm = choi_norm(Superoperator.identity(alg) - Superoperator(alg, S.fixed_point.matrix))
    assert abs(cb_return_time(S).t_cb - math.log(2 * gap_norm)) <= 1e-8
    rng = np.random.default_rng(7)
    z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    U, _ = np.linalg.qr(z)
    base = alg.onb()
    rotated = [alg.from_vec(sum(U[i, j] * alg.to_vec(base[i]) for i in range(4))) for j in range(4)]
    for t in (0.0, 0.3, 1.0):
        T = S.at(t)
        assert abs(choi_norm(T, rotated) - choi_norm(T)) <= 1e-10
    grid = np.linspace(0, 4, 20)
    vals = [cb_distance(S, t) for t in grid]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def _gap_pairs():
    m2 = depolarizing_semigroup(matrix_algebra(2))
    m3 = depolarizing_semigroup(matrix_algebra(3))
    z5 = fourier_multiplier_semigroup(cyclic_group(5, "wordlength"))[0]
    return [(m2.scaled(0.7), clifford_number_semigroup(2)),
            (z5, m2.scaled(1.3)),
            (two_point_semigroup().scaled(2.0), m3.scaled(0.4))]


def test_11_tensor_commuting_square():
    for SA, SB in _gap_pairs():
        g = spectral_gap(tensor_semigroup(SA, SB))
        assert abs(g - min(spectral_gap(SA), spectral_gap(SB))) <= 1e-10
    a = matrix_algebra(2)
    dep = depolarizing_semigroup(a)
    triv = trivial_semigroup(a)
    SS = tensor_semigroup(dep, triv)
    ST = tensor_semigroup(triv, dep)
    rep = commuting_square_check(SS, ST)
    assert rep.passed and rep.es_et_residual <= 1e-9 and rep.et_es_residual <= 1e-9
    joint = tensor(a, a)
    E = tensor_semigroup(dep, dep).fixed_point
    ES = SS.fixed_point
    for i in range(20):
        rho = random_density(joint, np.random.default_rng([11, i]))
        lhs = relative_entropy(rho, E.apply_state(rho))
        rhs = relative_entropy(rho, ES.apply_state(rho)) + relative_entropy(ES.apply_state(rho), E.apply_state(rho))
        assert abs(lhs - rhs) <= 1e-8


def test_12_torus_constants():
    for d in (1, 2, 3):
        assert torus_constants(d, "wordlength").lambda_clsi == 1.0
        assert abs(torus_constants(d, "heat").lambda_clsi - 1 / (4 * math.log(3))) <= 1e-12
        rep = torus_constants(d, "poisson")
        chain, closed = rep.chain["lambda"], rep.closed_form["lambda"]
        assert chain > 0 and closed > 0
        assert 1 / 8 <= chain / closed <= 8
        assert any("poisson_discrepancy" in f for f in rep.flags)


SUITES = [
    ["constants", "onplus", "--N", "3"],
    ["constants", "torus", "--dim", "2", "--family", "poisson"],
    ["verify", "clifford", "--d", "2", "--samples", "200"],
    ["verify", "depolarizing", "--dims", "2", "--samples", "100", "--states", "3"],
    ["mlsi", "search", "--model", "two-point", "--samples", "200", "--seed", "5"],
    ["verify", "qgram", "--n", "3", "--dim", "2", "--q", "0.3"],
]


@pytest.mark.parametrize("argv", SUITES, ids=lambda a: "-".join(a[:2]))
def test_13_determinism(argv):
    outs = []
    for _ in range(2):
        p = subprocess.run([sys.executable, "-m", "curvlab", *argv, "--format", "json"],
                           capture_output=True, check=False)
        assert p.returncode == 0, p.stderr.decode()
        outs.append(p.stdout)
    assert outs[0] == outs[1]
    json.loads(outs[0])
