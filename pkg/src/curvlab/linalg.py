"""Dense Hermitian linear algebra and spectral functional calculus."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .config import get_tolerances
from .errors import DimensionError, DomainError, InvalidInputError

ScalarFunc = Union[str, Callable[[np.ndarray], np.ndarray]]

_NAMED_FUNCS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "log": np.log,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
}


def as_cmatrix(m, square: bool = False) -> np.ndarray:
    """Validate a 2-D finite complex array and return it as ``complex128``."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has NaN or infinite entries")
    return a


@dataclass(frozen=True)
class HermitianEig:
    """Ascending eigenvalues and a unitary matrix of eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self, f: Callable[[np.ndarray], np.ndarray] | None = None) -> np.ndarray:
        w = self.eigenvalues if f is None else f(self.eigenvalues)
        u = self.eigenvectors
        return (u * w) @ u.conj().T


def hermitian_eig(h, check: bool = True) -> HermitianEig:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as ``(H + H*)/2`` first, so small hermiticity
    drift is tolerated rather than rejected.

    Parameters
    ----------
    h : array_like
        Square complex matrix.
    check : bool
        Verify the reconstruction residual against ``tol_recon (1 + ||H||)``.
    """
    a = as_cmatrix(h, square=True)
    a = 0.5 * (a + a.conj().T)
    w, u = np.linalg.eigh(a)
    eig = HermitianEig(w, u)
    if check and a.shape[0]:
        scale = 1.0 + float(np.max(np.abs(w)))
        resid = operator_norm(eig.reconstruct() - a)
        if resid > get_tolerances().tol_recon * scale:
            raise InvalidInputError(f"eigendecomposition residual {resid:.3e} too large")
    return eig


def apply_scalar(f: ScalarFunc, values: np.ndarray) -> np.ndarray:
    """Evaluate ``f`` on real eigenvalues, raising ``DomainError`` on failure."""
    if isinstance(f, str):
        if f not in _NAMED_FUNCS:
            raise DomainError(f"unknown function name {f!r}; use one of {sorted(_NAMED_FUNCS)}")
        fn = _NAMED_FUNCS[f]
    else:
        fn = f
    with np.errstate(all="ignore"):
        out = np.asarray(fn(values))
    bad = ~np.isfinite(out)
    if np.iscomplexobj(out) and not bad.any():
        bad = np.abs(out.imag) > 0
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise DomainError(f"eigenvalue {values[i]!r} outside the domain of the function", values[i])
    return out


def matrix_func(h, f: ScalarFunc, check: bool = True) -> np.ndarray:
    """Return ``U f(D) U*`` for Hermitian ``h = U D U*``.

    ``f`` may be a vectorized callable or one of ``"log"``, ``"exp"``,
    ``"sqrt"``, ``"abs"``.
    """
    eig = hermitian_eig(h, check=check)
    return eig.reconstruct(lambda w: apply_scalar(f, w))


def psd_min_eig(h) -> float:
    """Smallest eigenvalue of a Hermitian matrix (after symmetrization)."""
    a = as_cmatrix(h, square=True)
    if a.shape[0] == 0:
        return float("inf")
    return float(np.linalg.eigvalsh(0.5 * (a + a.conj().T))[0])


def is_psd(h, tol: float | None = None) -> bool:
    tol = get_tolerances().tol_psd if tol is None else tol
    return psd_min_eig(h) >= -tol


def operator_norm(m) -> float:
    """Largest singular value."""
    a = np.asarray(m, dtype=complex)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def log_mean_weights(p, q) -> np.ndarray:
    """Matrix of logarithmic means ``(p_i - q_j) / (log p_i - log q_j)``.

    Entry ``(i, j)`` equals the integral of ``p_i**(1-s) * q_j**s`` over
    ``s`` in [0, 1]. When ``p_i`` and ``q_j`` agree to relative ``1e-12`` the
    limit value is used instead of the difference quotient.
    """
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    if np.any(~(p > 0)) or np.any(~(q > 0)):
        raise DomainError("logarithmic mean requires strictly positive entries")
    P = p[:, None]
    Q = q[None, :]
    lp = np.log(P)
    lq = np.log(Q)
    diff = lp - lq
    close = np.abs(P - Q) <= 1e-12 * np.maximum(P, Q)
    with np.errstate(divide="ignore", invalid="ignore"):
        # expm1 keeps precision when the ratio is near one
        out = np.where(close, 0.5 * (P + Q), Q * np.expm1(diff) / np.where(close, 1.0, diff))
    return out
