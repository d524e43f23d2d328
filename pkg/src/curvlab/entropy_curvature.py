"""Entropy functionals, Gamma calculus and curvature/MLSI checks."""
from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

import numpy as np
from scipy.optimize import minimize

from .algebra import CondExpectation, DensityState, Element, FiniteAlgebra, random_density
from .config import get_tolerances
from .errors import DimensionError, DomainError
from .linalg import hermitian_eig, log_mean_weights
from .semigroup import QMSemigroup

if TYPE_CHECKING:  # pragma: no cover
    from .models.derivation import Derivation


class RegularizationWarning(UserWarning):
    """A singular state was floored to keep ``log rho`` finite."""


def _same_algebra(a: FiniteAlgebra, b: FiniteAlgebra) -> None:
    if a is not b and a != b:
        raise DimensionError("objects live on different algebras")


def _as_state(rho) -> DensityState:
    if isinstance(rho, DensityState):
        return rho
    if isinstance(rho, Element):
        return DensityState(rho)
    raise TypeError(f"expected a DensityState, got {type(rho).__name__}")


# -- entropies ---------------------------------------------------------------------
def relative_entropy(rho: DensityState, sigma: DensityState) -> float:
    """``D(rho||sigma) = tau(rho log rho - rho log sigma)``.

    Eigenvalues below ``eig_floor`` are treated as zero. Returns ``inf`` when
    ``rho`` puts weight above the floor on the kernel of ``sigma``.
    """
    rho, sigma = _as_state(rho), _as_state(sigma)
    _same_algebra(rho.algebra, sigma.algebra)
    alg = rho.algebra
    floor = get_tolerances().eig_floor
    total = 0.0
    for w, n, er, es, rb in zip(alg.trace_weights, alg.block_dims, rho.eigs, sigma.eigs, rho.element.blocks):
        mu = np.clip(er.eigenvalues, 0.0, None)
        pos = mu > floor
        t1 = float(np.sum(mu[pos] * np.log(mu[pos])))
        nu = es.eigenvalues
        V = es.eigenvectors
        # diagonal of rho in sigma's eigenbasis
        diag = np.real(np.einsum("ij,jk,ki->i", V.conj().T, rb, V))
        ker = nu <= floor
        if np.any(ker) and float(np.sum(np.clip(diag[ker], 0, None))) > floor:
            return float("inf")
        t2 = float(np.sum(diag[~ker] * np.log(nu[~ker])))
        total += w / n * (t1 - t2)
    return max(total, 0.0)


def entropy(rho: DensityState) -> float:
    """``H(rho) = D(rho||1) = tau(rho log rho)``."""
    rho = _as_state(rho)
    alg = rho.algebra
    floor = get_tolerances().eig_floor
    total = 0.0
    for w, n, e in zip(alg.trace_weights, alg.block_dims, rho.eigs):
        mu = e.eigenvalues[e.eigenvalues > floor]
        total += w / n * float(np.sum(mu * np.log(mu)))
    return total


def entropy_to_subalgebra(rho: DensityState, E: CondExpectation) -> float:
    """``D(rho||N) = D(rho||E(rho))``."""
    rho = _as_state(rho)
    _same_algebra(rho.algebra, E.algebra)
    return relative_entropy(rho, E.apply_state(rho))


def _floored_log(rho: DensityState, what: str) -> Element:
    floor = get_tolerances().eig_floor
    if rho.min_eig <= floor:
        warnings.warn(f"{what}: state is singular, eigenvalues floored at {floor:g}", RegularizationWarning,
                      stacklevel=3)
        return rho.func(lambda w: np.log(np.maximum(w, floor)))
    return rho.func(np.log)


def fisher_information(S: QMSemigroup, rho: DensityState) -> float:
    """``I(rho) = tau((A rho) log rho)``."""
    rho = _as_state(rho)
    _same_algebra(S.algebra, rho.algebra)
    alg = rho.algebra
    log_rho = _floored_log(rho, "fisher_information")
    a_rho = S.A(rho.element)
    val = alg.inner(a_rho.adjoint(), log_rho)
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise DomainError(f"Fisher information has imaginary part {val.imag:.3e}", val)
    return float(val.real)


def rho_weighted_norm(x: Element, rho) -> float:
    """``(int_0^1 tau(x* rho^(1-s) x rho^s) ds)^(1/2)``.

    Evaluated in the eigenbasis of ``rho`` with logarithmic-mean weights.
    ``rho`` may be a :class:`DensityState` or any positive element.
    """
    alg = x.algebra
    blocks = rho.element.blocks if isinstance(rho, DensityState) else rho.blocks
    _same_algebra(alg, rho.algebra)
    floor = get_tolerances().eig_floor
    total = 0.0
    flagged = False
    for w, n, xb, rb in zip(alg.trace_weights, alg.block_dims, x.blocks, blocks):
        e = hermitian_eig(rb, check=False)
        mu = e.eigenvalues
        if mu[0] <= floor:
            flagged = True
            mu = np.maximum(mu, floor)
        U = e.eigenvectors
        xt = U.conj().T @ xb @ U
        total += w / n * float(np.sum(log_mean_weights(mu, mu) * np.abs(xt) ** 2))
    if flagged:
        warnings.warn("rho_weighted_norm: singular weight floored", RegularizationWarning, stacklevel=2)
    return float(np.sqrt(max(total, 0.0)))


# -- Gamma calculus ------------------------------------------------------------------
def gamma_form(S: QMSemigroup, x: Element, y: Element) -> Element:
    """Carre du champ ``1/2 (A(x*) y + x* A(y) - A(x* y))``."""
    A = S.A
    xs = x.adjoint()
    return 0.5 * (A(xs) @ y + xs @ A(y) - A(xs @ y))


def gamma2_form(S: QMSemigroup, x: Element, y: Element) -> Element:
    """Iterated form ``1/2 (G(Ax, y) + G(x, Ay) - A G(x, y))``."""
    A = S.A
    return 0.5 * (gamma_form(S, A(x), y) + gamma_form(S, x, A(y)) - A(gamma_form(S, x, y)))


def _gamma_tables(S: QMSemigroup, basis: Sequence[Element]):
    """All ``Gamma(x_j, x_k)`` and ``Gamma_2(x_j, x_k)`` with shared subterms."""
    A = S.A
    k = len(basis)
    ax = [A(b) for b in basis]
    G = [[None] * k for _ in range(k)]
    G2 = [[None] * k for _ in range(k)]

    def gam(a, a_adj_img, b, b_img):
        # A(a*) is needed; a_adj_img is that image
        return 0.5 * (a_adj_img @ b + a.adjoint() @ b_img - A(a.adjoint() @ b))

    adj_img = [A(b.adjoint()) for b in basis]
    aax = [A(v) for v in ax]
    adj_img_ax = [A(v.adjoint()) for v in ax]
    for j in range(k):
        for l in range(k):
            g = gam(basis[j], adj_img[j], basis[l], ax[l])
            G[j][l] = g
            g_ax = gam(ax[j], adj_img_ax[j], basis[l], ax[l])
            g_xa = gam(basis[j], adj_img[j], ax[l], aax[l])
            G2[j][l] = 0.5 * (g_ax + g_xa - A(g))
    return G, G2


def _assemble_blocks(table, alg: FiniteAlgebra) -> list[np.ndarray]:
    k = len(table)
    out = []
    for b in range(len(alg.block_dims)):
        out.append(np.block([[table[j][l].blocks[b] for l in range(k)] for j in range(k)]))
    return out


@dataclass
class CurvatureReport:
    """Largest ``lam`` with ``[Gamma_2(x_j, x_k)] >= lam [Gamma(x_j, x_k)]``.

    ``min_eig_trace`` lists the ``(lam, min-eig)`` pairs visited by the
    bisection. ``degenerate`` marks a numerically vanishing Gamma block
    matrix, for which ``best_lambda`` is ``inf``.
    """

    best_lambda: float
    basis_used: list[Element] = field(repr=False)
    min_eig_trace: list[tuple[float, float]] = field(repr=False)
    resolution: float
    degenerate: bool = False
    unbounded: bool = False

    def margin_at(self, lam: float) -> float:
        return self._f(lam)

    _f: object = field(default=None, repr=False, compare=False)


def best_bakry_emery_lambda(S: QMSemigroup, basis: Sequence[Element] | None = None,
                            resolution: float = 1e-6, lam_max: float = 1e6) -> CurvatureReport:
    """Bisection for the best Bakry-Emery constant on a test family.

    Parameters
    ----------
    basis : sequence of Element, optional
        Test family ``x_1, ..., x_n``; defaults to the L2-ONB of the algebra
        (matrix units for full algebras).
    resolution : float
        Absolute bisection resolution for ``lam``.
    """
    alg = S.algebra
    basis = alg.onb() if basis is None else list(basis)
    for b in basis:
        alg.check_owns(b)
    tol = get_tolerances().tol_psd
    G, G2 = _gamma_tables(S, basis)
    Gb = _assemble_blocks(G, alg)
    G2b = _assemble_blocks(G2, alg)
    trace: list[tuple[float, float]] = []

    def f(lam: float) -> float:
        m = min(float(np.linalg.eigvalsh(0.5 * (a + a.conj().T) - lam * 0.5 * (g + g.conj().T))[0])
                for a, g in zip(G2b, Gb))
        trace.append((lam, m))
        return m

    if max(float(np.max(np.abs(g))) for g in Gb) <= 1e-12:
        return CurvatureReport(float("inf"), basis, trace, resolution, degenerate=True, _f=f)
    lo, hi = 0.0, 1.0
    if f(lo) < -tol:
        hi = lo
        lo = -1.0
        while f(lo) < -tol:
            hi = lo
            lo *= 2.0
            if lo < -lam_max:
                raise DomainError("no feasible curvature constant above -lam_max")
    else:
        while f(hi) >= -tol:
            lo = hi
            hi *= 2.0
            if hi > lam_max:
                return CurvatureReport(float("inf"), basis, trace, resolution, unbounded=True, _f=f)
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if f(mid) >= -tol:
            lo = mid
        else:
            hi = mid
    return CurvatureReport(lo, basis, trace, resolution, _f=f)


# -- MLSI search -------------------------------------------------------------------------
def mlsi_ratio(S: QMSemigroup, rho: DensityState, E: CondExpectation | None = None) -> float:
    """``I(rho) / (2 D(rho||E rho))``; ``nan`` when ``D`` is below ``entropy_skip``."""
    E = S.fixed_point if E is None else E
    d = entropy_to_subalgebra(rho, E)
    if not d >= get_tolerances().entropy_skip:
        return float("nan")
    return fisher_information(S, rho) / (2.0 * d)


@dataclass
class MLSIReport:
    """Smallest sampled MLSI ratio.

    The value is an upper bound on the MLSI constant: it certifies nothing
    from below, it can only falsify a claimed constant.
    """

    min_ratio: float
    argmin_state: DensityState | None = field(repr=False)
    samples: int
    refinement_steps: int
    skipped: int
    sampled_min: float
    upper_bound: bool = True
    note: str = "upper bound on the MLSI constant from sampling and local search"


def default_workers() -> int:
    env = os.environ.get("CURVLAB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _sample_seed(seed: int, i: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(i),)))


def _param_stacks(herm: Sequence[Element]) -> list[np.ndarray]:
    return [np.stack([b.blocks[j] for b in herm]) for j in range(len(herm[0].blocks))]


def _state_from_params(alg: FiniteAlgebra, stacks: list[np.ndarray], theta: np.ndarray) -> DensityState:
    hs = [np.tensordot(theta, st, axes=1) for st in stacks]
    hs = [0.5 * (h + h.conj().T) for h in hs]
    eigs = [np.linalg.eigh(h) for h in hs]
    # shift for numerical stability before exponentiating
    top = max(float(w[-1]) for w, _ in eigs)
    blocks = [(u * np.exp(w - top)) @ u.conj().T for w, u in eigs]
    return DensityState.from_positive(alg.element(blocks))


def _refine(S: QMSemigroup, E: CondExpectation, rho: DensityState, herm, max_iter: int):
    alg = S.algebra
    log_rho = rho.func(lambda w: np.log(np.maximum(w, get_tolerances().eig_floor)))
    theta0 = np.array([alg.inner(b, log_rho).real for b in herm])

    stacks = _param_stacks(herm)

    def obj(theta):
        try:
            st = _state_from_params(alg, stacks, theta)
            r = mlsi_ratio(S, st, E)
        except (DomainError, np.linalg.LinAlgError):
            return np.inf
        return r if np.isfinite(r) else np.inf

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegularizationWarning)
        res = minimize(obj, theta0, method="Nelder-Mead",
                       options={"maxiter": max_iter, "xatol": 1e-9, "fatol": 1e-13})
    if not np.isfinite(res.fun):
        return None, np.inf, int(res.nit)
    st = _state_from_params(alg, stacks, res.x)
    return st, mlsi_ratio(S, st, E), int(res.nit)


def mlsi_ratio_search(S: QMSemigroup, samples: int = 1000, seed: int = 0, mode: str = "hilbert_schmidt",
                      refine: bool = True, max_refine_iter: int | None = None,
                      workers: int | None = None) -> MLSIReport:
    """Search for small MLSI ratios ``I(rho) / (2 D(rho||E rho))``.

    Sample ``i`` is drawn from a generator seeded by ``(seed, i)``, so results
    do not depend on chunking or worker count, and the first ``n`` samples of a
    larger run are exactly the samples of a run of size ``n``. Each sample
    that sets a new running minimum is refined by Nelder-Mead over
    ``rho = exp(H) / tau(exp(H))``. The refined set of a shorter run is
    contained in that of a longer one, so ``min_ratio`` never increases with
    ``samples``.
    """
    if samples < 1:
        raise DomainError("samples must be at least 1", samples)
    alg = S.algebra
    E = S.fixed_point
    workers = default_workers() if workers is None else max(1, int(workers))

    def chunk(bounds):
        a, b = bounds
        out = np.empty(b - a)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegularizationWarning)
            for i in range(a, b):
                out[i - a] = mlsi_ratio(S, random_density(alg, _sample_seed(seed, i), mode), E)
        return out

    size = max(1, min(2000, samples // max(1, workers)))
    bounds = [(a, min(a + size, samples)) for a in range(0, samples, size)]
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(chunk, bounds))
    else:
        parts = [chunk(b) for b in bounds]
    ratios = np.concatenate(parts)
    valid = np.isfinite(ratios)
    skipped = int(np.sum(~valid))
    best = np.inf
    best_state = None
    records = []
    running = np.inf
    for i in np.flatnonzero(valid):
        if ratios[i] < running:
            running = ratios[i]
            records.append(int(i))
    if records:
        best = float(ratios[records[-1]])
        best_state = random_density(alg, _sample_seed(seed, records[-1]), mode)
    sampled_min = best
    steps = 0
    if refine and records:
        herm = alg.hermitian_basis()
        max_iter = max_refine_iter or 200 * len(herm)
        for i in records:
            start = random_density(alg, _sample_seed(seed, i), mode)
            st, r, nit = _refine(S, E, start, herm, max_iter)
            steps += nit
            if st is not None and r < best:
                best, best_state = float(r), st
    return MLSIReport(best, best_state, samples, steps, skipped, sampled_min)


# -- decay and gradient estimates ----------------------------------------------------------
@dataclass
class DecayReport:
    t_grid: list[float]
    entropy: list[float]
    bound: list[float]
    margins: list[float]
    passed: bool


def entropy_decay_check(S: QMSemigroup, rho: DensityState, lam: float, t_grid: Sequence[float],
                        rel_slack: float = 1e-8) -> DecayReport:
    """Check ``D(T_t rho||E rho) <= exp(-2 lam t) D(rho||E rho)`` on a grid."""
    if lam < 0:
        raise DomainError("lambda must be nonnegative", lam)
    rho = _as_state(rho)
    E = S.fixed_point
    d0 = entropy_to_subalgebra(rho, E)
    ds, bounds, margins = [], [], []
    ok = True
    for t in t_grid:
        st = DensityState.from_positive(S.evolve(rho.element, float(t)), floor=0.0)
        d = entropy_to_subalgebra(st, E)
        bound = np.exp(-2.0 * lam * t) * d0
        ds.append(d)
        bounds.append(bound)
        margins.append(bound * (1 + rel_slack) - d)
        ok &= d <= bound * (1 + rel_slack)
    return DecayReport([float(t) for t in t_grid], ds, bounds, margins, bool(ok))


@dataclass
class GradientEstimateReport:
    samples: int
    worst_margin: float
    worst_relative_margin: float
    passed: bool
    lam: float


def gradient_estimate_check(S: QMSemigroup, D: "Derivation", lam: float, samples: int = 1000, seed: int = 0,
                            t_max: float = 3.0, rel_slack: float = 1e-8) -> GradientEstimateReport:
    """Sample ``(x, rho, t)`` and test ``||d(T_t x)||_rho <= exp(-lam t) ||d x||_{T_t rho}``.

    ``x`` is a complex Gaussian element with ``E(x)`` subtracted; the first
    sample uses ``t = 0``. Norms are taken in the codomain of ``D`` with
    states embedded there.
    """
    alg = S.algebra
    _same_algebra(alg, D.domain)
    E = S.fixed_point
    worst = np.inf
    worst_rel = np.inf
    ok = True
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegularizationWarning)
        for i in range(samples):
            rng = _sample_seed(seed, i)
            x = alg.random_element(rng)
            x = x - E(x)
            rho = random_density(alg, rng)
            t = 0.0 if i == 0 else float(rng.uniform(0.0, t_max))
            lhs = rho_weighted_norm(D.delta(S.evolve(x, t)), D.embed(rho.element))
            t_rho = S.evolve(rho.element, t)
            rhs = np.exp(-lam * t) * rho_weighted_norm(D.delta(x), D.embed(t_rho))
            margin = rhs - lhs
            worst = min(worst, margin)
            if rhs > 0:
                worst_rel = min(worst_rel, margin / rhs)
            ok &= lhs <= rhs * (1 + rel_slack)
    return GradientEstimateReport(samples, float(worst), float(worst_rel), bool(ok), lam)
