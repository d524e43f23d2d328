"""Symmetric quantum Markov semigroups on finite algebras."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import CondExpectation, Element, FiniteAlgebra, _check_closure, tensor, tensor_element
from .config import get_tolerances
from .errors import (BasisError, CommutationError, ConsistencyError, DimensionError, DivergenceError,
                     DomainError, NonUnitalError, NotDissipativeError, NotSubalgebraError, SymmetryError)
from .linalg import operator_norm, psd_min_eig


class Superoperator:
    """Linear map of an algebra, as a matrix in L2-orthonormal coordinates."""

    __slots__ = ("algebra", "matrix")

    def __init__(self, algebra: FiniteAlgebra, matrix):
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (algebra.dim, algebra.dim):
            raise DimensionError(f"superoperator matrix must be {algebra.dim}x{algebra.dim}, got {m.shape}")
        self.algebra = algebra
        self.matrix = m

    @classmethod
    def from_function(cls, alg: FiniteAlgebra, f: Callable[[Element], Element]) -> "Superoperator":
        """Tabulate ``f`` on the ONB of ``alg``."""
        cols = [alg.to_vec(f(b)) for b in alg.onb()]
        return cls(alg, np.column_stack(cols))

    @classmethod
    def identity(cls, alg: FiniteAlgebra) -> "Superoperator":
        return cls(alg, np.eye(alg.dim, dtype=complex))

    @classmethod
    def zero(cls, alg: FiniteAlgebra) -> "Superoperator":
        return cls(alg, np.zeros((alg.dim, alg.dim), dtype=complex))

    def __call__(self, x: Element) -> Element:
        alg = self.algebra
        return alg.from_vec(self.matrix @ alg.to_vec(x))

    def _check(self, other: "Superoperator") -> None:
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise DimensionError("superoperators act on different algebras")

    def __add__(self, other: "Superoperator") -> "Superoperator":
        self._check(other)
        return Superoperator(self.algebra, self.matrix + other.matrix)

    def __sub__(self, other: "Superoperator") -> "Superoperator":
        self._check(other)
        return Superoperator(self.algebra, self.matrix - other.matrix)

    def __neg__(self) -> "Superoperator":
        return Superoperator(self.algebra, -self.matrix)

    def __mul__(self, c: float) -> "Superoperator":
        return Superoperator(self.algebra, c * self.matrix)

    __rmul__ = __mul__

    def __matmul__(self, other: "Superoperator") -> "Superoperator":
        self._check(other)
        return Superoperator(self.algebra, self.matrix @ other.matrix)

    def adjoint(self) -> "Superoperator":
        """Adjoint with respect to the trace inner product."""
        return Superoperator(self.algebra, self.matrix.conj().T)


def _expectation_superop(E: CondExpectation) -> Superoperator:
    return Superoperator(E.algebra, E.matrix)


class QMSemigroup:
    """``T_t = exp(-t A)`` for a symmetric dissipative generator ``A``.

    Use :func:`build_semigroup` to construct one with validation.
    """

    def __init__(self, generator: Superoperator, eigenvalues: np.ndarray, eigenvectors: np.ndarray):
        self.generator = generator
        self.eigenvalues = np.asarray(eigenvalues, dtype=float)
        self.eigenvectors = np.asarray(eigenvectors, dtype=complex)
        self._fixed: CondExpectation | None = None

    @property
    def algebra(self) -> FiniteAlgebra:
        return self.generator.algebra

    def A(self, x: Element) -> Element:
        return self.generator(x)

    def matrix_at(self, t: float) -> np.ndarray:
        if t < 0:
            raise DomainError("semigroup time must be nonnegative", t)
        u = self.eigenvectors
        return (u * np.exp(-t * self.eigenvalues)) @ u.conj().T

    def at(self, t: float) -> Superoperator:
        return Superoperator(self.algebra, self.matrix_at(t))

    def evolve(self, x: Element, t: float) -> Element:
        if t < 0:
            raise DomainError("semigroup time must be nonnegative", t)
        alg = self.algebra
        u = self.eigenvectors
        v = u @ (np.exp(-t * self.eigenvalues) * (u.conj().T @ alg.to_vec(x)))
        return alg.from_vec(v)

    def scaled(self, rate: float) -> "QMSemigroup":
        """Semigroup of ``rate * A`` (time reparametrization)."""
        if rate <= 0:
            raise DomainError("rate must be positive", rate)
        return QMSemigroup(self.generator * rate, self.eigenvalues * rate, self.eigenvectors)

    @property
    def fixed_point(self) -> CondExpectation:
        if self._fixed is None:
            self._fixed = fixed_point_expectation(self)
        return self._fixed

    def __repr__(self) -> str:
        return f"QMSemigroup({self.algebra!r}, spectrum=[{self.eigenvalues.min():.4g}, {self.eigenvalues.max():.4g}])"


def build_semigroup(gen: Superoperator, validate: bool = True,
                    spectral: tuple[np.ndarray, np.ndarray] | None = None) -> QMSemigroup:
    """Validate a generator and store its spectral decomposition.

    Parameters
    ----------
    gen : Superoperator
        Candidate generator ``A``.
    validate : bool
        When false, skip symmetry, dissipativity and unitality checks. Only
        useful for constructing deliberate non-examples.
    spectral : (eigenvalues, eigenvectors), optional
        Known decomposition that replaces the numerical one.

    Raises
    ------
    SymmetryError, NotDissipativeError, NonUnitalError
    """
    tol = get_tolerances()
    m = gen.matrix
    if validate:
        scale = max(1.0, operator_norm(m))
        asym = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        if asym > 1e-10 * scale:
            raise SymmetryError("generator is not self-adjoint in L2", asym)
        one = gen.algebra.to_vec(gen.algebra.identity())
        a1 = float(np.linalg.norm(m @ one))
        if a1 > tol.tol_unital * scale:
            raise NonUnitalError("generator does not annihilate the unit", a1)
    if spectral is None:
        h = 0.5 * (m + m.conj().T)
        w, u = np.linalg.eigh(h)
    else:
        w, u = (np.asarray(a) for a in spectral)
        order = np.argsort(w, kind="stable")
        w, u = w[order], u[:, order]
    if validate and w.size and w[0] < -tol.tol_psd:
        raise NotDissipativeError("generator has negative spectrum", float(w[0]))
    return QMSemigroup(gen, w, u)


def generator_from_spectrum(alg: FiniteAlgebra, eigenvalues, basis: Sequence[Element]) -> QMSemigroup:
    """Semigroup diagonal in an L2-orthonormal ``basis`` with given rates."""
    V = np.column_stack([alg.to_vec(b) for b in basis])
    if V.shape != (alg.dim, alg.dim):
        raise BasisError("basis must span the algebra")
    if np.max(np.abs(V.conj().T @ V - np.eye(alg.dim))) > 1e-8:
        raise BasisError("basis is not orthonormal")
    w = np.asarray(eigenvalues, dtype=float)
    gen = Superoperator(alg, (V * w) @ V.conj().T)
    return build_semigroup(gen, spectral=(w, V))


def evolve(S: QMSemigroup, x: Element, t: float) -> Element:
    return S.evolve(x, t)


def trivial_semigroup(alg: FiniteAlgebra) -> QMSemigroup:
    return build_semigroup(Superoperator.zero(alg))


# -- Choi operators ------------------------------------------------------------
def choi_operator(T: Superoperator, onb: Sequence[Element] | None = None) -> np.ndarray:
    """``sum_i conj(x_i) (x) T(x_i)`` for an L2-orthonormal basis ``x_i``.

    The opposite algebra is realized by transposition, so ``(x*)^op`` is the
    entrywise conjugate of ``x`` in the block-diagonal representation.
    """
    alg = T.algebra
    onb = alg.onb() if onb is None else list(onb)
    if len(onb) != alg.dim:
        raise BasisError(f"basis has {len(onb)} elements, algebra dimension is {alg.dim}")
    V = np.column_stack([alg.to_vec(x) for x in onb])
    gram_resid = float(np.max(np.abs(V.conj().T @ V - np.eye(alg.dim))))
    if gram_resid > 1e-8:
        raise BasisError(f"basis is not orthonormal (Gram residual {gram_resid:.3e})")
    n = alg.total_size
    out = np.zeros((n * n, n * n), dtype=complex)
    for x in onb:
        out += np.kron(x.full().conj(), T(x).full())
    return out


def choi_norm(T: Superoperator, onb: Sequence[Element] | None = None) -> float:
    return operator_norm(choi_operator(T, onb))


@dataclass
class MarkovReport:
    t_grid: list[float]
    unital_residual: list[float]
    trace_residual: list[float]
    choi_min_eig: list[float]
    passed: bool

    @property
    def worst_unital(self) -> float:
        return max(self.unital_residual)

    @property
    def worst_trace(self) -> float:
        return max(self.trace_residual)

    @property
    def worst_choi(self) -> float:
        return min(self.choi_min_eig)


def markov_check(S: QMSemigroup, t_grid: Sequence[float]) -> MarkovReport:
    """Unitality, trace preservation and complete positivity of ``T_t`` on a grid."""
    t_grid = [float(t) for t in t_grid]
    if not t_grid or any(t < 0 for t in t_grid):
        raise DomainError("t_grid must be a nonempty list of nonnegative times")
    tol = get_tolerances()
    alg = S.algebra
    one = alg.to_vec(alg.identity())
    unital, trace_res, choi = [], [], []
    for t in t_grid:
        m = S.matrix_at(t)
        unital.append(float(np.linalg.norm(m @ one - one)))
        trace_res.append(float(np.linalg.norm(one.conj() @ m - one.conj())))
        choi.append(psd_min_eig(choi_operator(Superoperator(alg, m))))
    passed = (max(unital) <= tol.tol_unital and max(trace_res) <= tol.tol_unital
              and min(choi) >= -tol.tol_psd)
    return MarkovReport(t_grid, unital, trace_res, choi, passed)


# -- fixed points and spectra ---------------------------------------------------
def fixed_point_expectation(S: QMSemigroup) -> CondExpectation:
    """Spectral projection onto the kernel of the generator.

    Raises
    ------
    ConsistencyError
        If the kernel is not a *-subalgebra or ``T_t E = E T_t = E`` fails.
    """
    tol = get_tolerances()
    alg = S.algebra
    kern = S.eigenvalues <= tol.tol_gap
    Q = S.eigenvectors[:, kern]
    P = Q @ Q.conj().T
    basis = tuple(alg.from_vec(Q[:, k]) for k in range(Q.shape[1]))

    def residual(x: Element) -> float:
        v = alg.to_vec(x)
        return float(np.linalg.norm(v - P @ v))

    try:
        _check_closure(alg, basis, residual)
    except NotSubalgebraError as exc:
        raise ConsistencyError(f"generator kernel is not a subalgebra: {exc}") from exc
    for t in (0.5, 2.0):
        m = S.matrix_at(t)
        r = max(float(np.max(np.abs(m @ P - P))), float(np.max(np.abs(P @ m - P))))
        if r > 1e-10:
            raise ConsistencyError(f"T_t E = E fails at t={t} (residual {r:.3e})")
    return CondExpectation(alg, P, basis)


def spectral_gap(S: QMSemigroup) -> float:
    """Smallest generator eigenvalue above ``tol_gap``; 0.0 if there is none."""
    above = S.eigenvalues[S.eigenvalues > get_tolerances().tol_gap]
    return float(above.min()) if above.size else 0.0


def is_ergodic(S: QMSemigroup) -> bool:
    return S.fixed_point.rank == 1


# -- CB return time -------------------------------------------------------------
@dataclass(frozen=True)
class CBReturnTime:
    """Result of :func:`cb_return_time`.

    ``surrogate`` is true for non-ergodic semigroups, where the L1 to L-infinity
    cb norm only bounds the relevant conditional norm from above.
    """

    t_cb: float
    threshold: float
    norm_at_zero: float
    surrogate: bool
    iterations: int

    def __float__(self) -> float:
        return self.t_cb


def cb_distance(S: QMSemigroup, t: float) -> float:
    """``||C(T_t) - C(E)||`` with ``E`` the fixed-point expectation."""
    alg = S.algebra
    m = S.matrix_at(t) - S.fixed_point.matrix
    return choi_norm(Superoperator(alg, m))


def cb_return_time(S: QMSemigroup, threshold: float = 0.5, t_tol: float = 1e-9,
                   t_max: float = 1e3) -> CBReturnTime:
    """First time the Choi norm of ``T_t - E`` reaches ``threshold``.

    The norm is nonincreasing in ``t``; the bracket grows geometrically from
    ``t = 1`` and is then bisected to ``t_tol``.

    Raises
    ------
    DivergenceError
        If the norm is still above ``threshold`` at ``t_max``.
    """
    if threshold <= 0:
        raise DomainError("threshold must be positive", threshold)
    surrogate = S.fixed_point.rank > 1
    f0 = cb_distance(S, 0.0)
    if f0 <= threshold:
        return CBReturnTime(0.0, threshold, f0, surrogate, 0)
    lo, hi = 0.0, 1.0
    it = 0
    while cb_distance(S, hi) > threshold:
        lo, hi = hi, 2.0 * hi
        it += 1
        if hi > t_max:
            if cb_distance(S, t_max) > threshold:
                raise DivergenceError(f"Choi norm stays above {threshold} up to t={t_max}")
            hi = t_max
            break
    while hi - lo > t_tol:
        mid = 0.5 * (lo + hi)
        if cb_distance(S, mid) > threshold:
            lo = mid
        else:
            hi = mid
        it += 1
    return CBReturnTime(0.5 * (lo + hi), threshold, f0, surrogate, it)


# -- tensor products -------------------------------------------------------------
def tensor_semigroup(SA: QMSemigroup, SB: QMSemigroup) -> QMSemigroup:
    """Semigroup of ``A (x) id + id (x) B`` on the tensor product algebra."""
    alg_a, alg_b = SA.algebra, SB.algebra
    target = tensor(alg_a, alg_b)
    W = np.column_stack([target.to_vec(tensor_element(a, b, target)) for a in alg_a.onb() for b in alg_b.onb()])
    ia = np.eye(alg_a.dim)
    ib = np.eye(alg_b.dim)
    L = np.kron(SA.generator.matrix, ib) + np.kron(ia, SB.generator.matrix)
    gen = Superoperator(target, W @ L @ W.conj().T)
    w = (SA.eigenvalues[:, None] + SB.eigenvalues[None, :]).ravel()
    u = W @ np.kron(SA.eigenvectors, SB.eigenvectors)
    return build_semigroup(gen, spectral=(w, u))


@dataclass
class CommutingSquareReport:
    commutation_residual: float
    es_et_residual: float
    et_es_residual: float
    E: CondExpectation = field(repr=False)
    E_S: CondExpectation = field(repr=False)
    E_T: CondExpectation = field(repr=False)
    passed: bool = False


def commuting_square_check(SA: QMSemigroup, SB: QMSemigroup,
                           t_grid: Sequence[float] = (0.25, 1.0, 3.0), tol: float = 1e-9) -> CommutingSquareReport:
    """Check ``E_S E_T = E_T E_S = E`` for commuting semigroups on one algebra.

    ``E`` is the fixed-point expectation of the joint semigroup generated by
    ``A + B``.

    Raises
    ------
    CommutationError
        If ``T_t S_s`` and ``S_s T_t`` differ by more than ``tol`` on the grid.
    """
    if SA.algebra is not SB.algebra and SA.algebra != SB.algebra:
        raise DimensionError("semigroups act on different algebras")
    comm = 0.0
    for t in t_grid:
        for s in t_grid:
            a = SA.matrix_at(t)
            b = SB.matrix_at(s)
            comm = max(comm, float(np.max(np.abs(a @ b - b @ a))))
    if comm > tol:
        raise CommutationError("semigroups do not commute", comm)
    joint = build_semigroup(SA.generator + SB.generator)
    E = joint.fixed_point.matrix
    ES = SA.fixed_point.matrix
    ET = SB.fixed_point.matrix
    r1 = float(np.max(np.abs(ES @ ET - E)))
    r2 = float(np.max(np.abs(ET @ ES - E)))
    return CommutingSquareReport(comm, r1, r2, joint.fixed_point, SA.fixed_point, SB.fixed_point,
                                 passed=max(r1, r2) <= tol)
