"""Generalized depolarizing semigroups ``T_t = exp(-t) id + (1 - exp(-t)) E``."""
from __future__ import annotations

import numpy as np

from ..algebra import CondExpectation, Element, FiniteAlgebra, identity_expectation, trace_expectation
from ..errors import DimensionError, DomainError
from ..semigroup import QMSemigroup, Superoperator, build_semigroup
from .derivation import Derivation, linear_map_matrix


def matrix_algebra(n: int) -> FiniteAlgebra:
    """``M_n`` with its normalized trace."""
    return FiniteAlgebra([n], [1.0])


def depolarizing_semigroup(alg: FiniteAlgebra, E: CondExpectation | None = None, rate: float = 1.0) -> QMSemigroup:
    """Semigroup generated by ``rate * (id - E)``; ``E`` defaults to ``E_tau``."""
    if rate <= 0:
        raise DomainError("rate must be positive", rate)
    E = trace_expectation(alg) if E is None else E
    if E.algebra is not alg and E.algebra != alg:
        raise DimensionError("conditional expectation lives on another algebra")
    gen = Superoperator(alg, rate * (np.eye(alg.dim) - E.matrix))
    S = build_semigroup(gen)
    S._fixed = E
    return S


def trivial_depolarizing(alg: FiniteAlgebra) -> QMSemigroup:
    """``E = id`` gives the trivial semigroup."""
    return depolarizing_semigroup(alg, identity_expectation(alg))


def gell_mann_basis(n: int) -> list[np.ndarray]:
    """Traceless Hermitian ``h_k`` with ``tr(h_k h_l) / n = delta_kl``."""
    out = []
    scale = np.sqrt(n / 2.0)
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1.0
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = -1j
            a[k, j] = 1j
            out.append(scale * s)
            out.append(scale * a)
    for l in range(1, n):
        diag = np.zeros(n)
        diag[:l] = 1.0
        diag[l] = -l
        out.append(scale * np.sqrt(2.0 / (l * (l + 1))) * np.diag(diag).astype(complex))
    return out


def depolarizing_inner_derivation(n: int, rate: float = 1.0) -> Derivation:
    """Derivation triple for ``rate * (id - E_tau)`` on ``M_n`` by inner derivations.

    With ``h_k`` as in :func:`gell_mann_basis`, ``id - E_tau`` equals
    ``(1/2) sum_k [v_k, [v_k, .]]`` for ``v_k = h_k / n``. The codomain is
    ``K = n^2 - 1`` copies of ``M_n`` with equal weights, ``M_n`` embeds
    diagonally and ``delta(x) = (sqrt(K rate / 2) i [v_k, x])_k``.
    ``E_hat`` averages the copies. There is no extension semigroup.
    """
    if n < 2:
        raise DomainError("need n >= 2", n)
    alg = matrix_algebra(n)
    S = depolarizing_semigroup(alg, rate=rate)
    hs = gell_mann_basis(n)
    K = len(hs)
    cod = FiniteAlgebra([n] * K, [1.0 / K] * K)
    c = np.sqrt(K * rate / 2.0)
    basis = alg.onb()
    images, embeds = [], []
    for b in basis:
        x = b.blocks[0]
        images.append(Element(cod, [c * 1j * (h @ x - x @ h) / n for h in hs], check=False))
        embeds.append(Element(cod, [x] * K, check=False))
    delta_m = linear_map_matrix(alg, cod, basis, images)
    embed_m = linear_map_matrix(alg, cod, basis, embeds)
    cond_m = embed_m.conj().T
    return Derivation(S, cod, delta_m, embed_m, cond_m, tuple(basis), extension=None,
                      lambda_claim=0.5, mean_zero=False, name=f"depolarizing-inner(n={n})")
