import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curvlab.constants import (GrowthData, chebyshev_sup_norm, exp_growth_chain, exp_growth_clsi, fourier_clsi,
                               free_wordlength_clsi, kappa, onplus_closed, onplus_clsi, onplus_series,
                               parse_growth, qaut_closed, qaut_clsi, qaut_series, sphere_area,
                               torus_constants, torus_poisson_lattice_tcb)
from curvlab.errors import DomainError, ParseError


def test_kappa_values():
    assert kappa(0.0, 2.0) == pytest.approx(1 / 8)
    assert kappa(1.0, 20.0) == pytest.approx(0.5, rel=1e-15)
    assert kappa(-1.0, 1.0) == pytest.approx(-1 / (2 * (1 - math.exp(2))))
    with pytest.raises(DomainError):
        kappa(1.0, 0.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.05, 10))
def test_kappa_monotone_in_lambda(a, b, t):
    lo, hi = sorted((a, b))
    assert kappa(lo, t) <= kappa(hi, t) * (1 + 1e-12) + 1e-15


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 10))
def test_kappa_small_lambda_expansion(t):
    # kappa(lam, t) = 1/(4t) + lam/4 + O(lam^2 t)
    lam = 1e-6
    assert kappa(lam, t) - 1 / (4 * t) == pytest.approx(lam / 4, rel=1e-4)
    assert abs(kappa(1e-12, t) - 1 / (4 * t)) <= 1e-12


def test_kappa_large_argument_no_overflow():
    # exact value -400 / (2 (1 - e^800)) underflows to zero
    assert 0.0 <= kappa(-400.0, 1.0) <= 1e-300
    assert kappa(400.0, 1.0) == pytest.approx(200.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.001, 0.9))
def test_series_match_closed_forms(r):
    s = onplus_series(r)
    assert s.partial == pytest.approx(onplus_closed(r), rel=1e-12)
    q = qaut_series(r)
    assert q.partial == pytest.approx(qaut_closed(r), rel=1e-12)
    assert s.tail_bound >= 0 and q.tail_bound >= 0


def test_sup_norm_matches_dimension():
    # sup over the interval equals U_k at the right endpoint
    assert chebyshev_sup_norm(3) == pytest.approx(4.0, rel=1e-9)
    assert chebyshev_sup_norm(0) == pytest.approx(1.0)


def test_onplus_report_checks_pass():
    rep = onplus_clsi(5)
    assert all(c.passed is not False for c in rep.checks)
    assert rep.consistency_residual() <= 1e-15
    with pytest.raises(DomainError):
        onplus_clsi(2)


def test_qaut_report_and_domain():
    rep = qaut_clsi(4)
    assert rep.t_cb == pytest.approx(4 * math.log(9 / (4 - math.sqrt(13))), rel=1e-12)
    assert rep.lambda_clsi == pytest.approx(1 / (4 * rep.t_cb))
    assert rep.notes
    with pytest.raises(DomainError):
        qaut_clsi(3)


def test_fourier_example():
    g = GrowthData("A", sigma=1.0, r=math.exp(-1), C_r=1.0)
    rep = fourier_clsi(g)
    assert rep.closed_form["t_cb"] == pytest.approx(math.log(2) + 1)
    assert rep.chain["t_cb"] == pytest.approx(math.log(2) + 1, abs=1e-10)
    assert rep.lambda_clsi == pytest.approx(1 / (4 * (math.log(2) + 1)))
    assert not rep.flags


def test_fourier_small_c_flagged():
    rep = fourier_clsi(GrowthData("A", sigma=2.0, r=0.5, C_r=0.4))
    assert any("C_r <= 1/2" in f for f in rep.flags)
    assert rep.chain["t_cb"] == pytest.approx(math.log(2))


def test_fourier_rejects_mode_b():
    with pytest.raises(DomainError):
        fourier_clsi(GrowthData("B", sigma=1.0, C=2.0, R=1.0))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.6, 50), st.floats(0.6, 50))
def test_fourier_t_grows_with_c(c1, c2):
    lo, hi = sorted((c1, c2))
    a = fourier_clsi(GrowthData("A", sigma=1.0, r=0.5, C_r=lo)).chain["t_cb"]
    b = fourier_clsi(GrowthData("A", sigma=1.0, r=0.5, C_r=hi)).chain["t_cb"]
    assert a <= b + 1e-10


def test_free_wordlength_four_generators():
    assert free_wordlength_clsi(4).lambda_clsi == pytest.approx(1 / (4 * math.log(40 / 3)), abs=1e-15)
    rep = free_wordlength_clsi(4)
    assert rep.checks[0].passed


def test_exp_growth_chain_admissibility():
    ok = exp_growth_clsi(2.0, 1.2, 1.0)
    assert ok.chain["r_half_R_admissible"] and "lambda" in ok.chain
    bad = exp_growth_clsi(3.0, 2.0, 1.0)
    assert not bad.chain["r_half_R_admissible"]
    assert bad.flags
    with pytest.raises(DomainError):
        exp_growth_chain(3.0, 2.0, 1.0, 0.6)


def test_torus_lattice_d1():
    # sum over n != 0 of e^{-|n| t} = 2/(e^t - 1) = 1/2
    assert torus_poisson_lattice_tcb(1) == pytest.approx(math.log(5), abs=1e-10)


def test_sphere_area():
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)


def test_torus_families():
    w = torus_constants(2, "wordlength")
    assert w.t_cb is None and w.lambda_clsi == 1.0
    h = torus_constants(3, "heat")
    assert h.consistency_residual() <= 1e-15
    with pytest.raises(DomainError):
        torus_constants(2, "gaussian")
    with pytest.raises(DomainError):
        torus_constants(0, "heat")


def test_parse_growth_modes():
    g = parse_growth("mode=A\nsigma=1\nr=0.5  # comment\nC_r=3\n")
    assert g == GrowthData("A", 1.0, r=0.5, C_r=3.0)
    g = parse_growth("mode = B\nsigma=1\nC=4\nR=3\n")
    assert g.R == 3.0


@pytest.mark.parametrize("text", [
    "mode=A\nsigma=1\nr=0.5\n",
    "mode=C\nsigma=1\n",
    "mode=A\nsigma=1\nr=0.5\nC_r=1\nR=2\n",
    "mode=A\nsigma=1\nsigma=2\nr=0.5\nC_r=1\n",
    "mode=A\nsigma=x\nr=0.5\nC_r=1\n",
    "mode=A\nsigma=1\nr=1.5\nC_r=1\n",
    "mode=A\nfoo=1\n",
    "mode A\n",
])
def test_parse_growth_errors(text):
    with pytest.raises(ParseError):
        parse_growth(text)


def test_growth_data_validation():
    with pytest.raises(DomainError):
        GrowthData("A", sigma=0.0, r=0.5, C_r=1.0)
    with pytest.raises(DomainError):
        GrowthData("B", sigma=1.0, C=1.0, R=0.5)
    assert np.isfinite(exp_growth_clsi(1.0, 1.0, 2.0).lambda_clsi)
