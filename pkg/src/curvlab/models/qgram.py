"""Gram matrices of the q-deformed inner product on tensor powers."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..config import get_tolerances
from ..errors import DomainError


def inversions(perm) -> int:
    p = list(perm)
    return sum(1 for i in range(len(p)) for j in range(i + 1, len(p)) if p[i] > p[j])


@dataclass(frozen=True)
class QGram:
    matrix: np.ndarray
    labels: tuple[tuple[int, ...], ...]
    min_eig: float
    psd: bool
    q: float

    def submatrix(self, labels) -> np.ndarray:
        pos = {lab: i for i, lab in enumerate(self.labels)}
        idx = [pos[tuple(l)] for l in labels]
        return self.matrix[np.ix_(idx, idx)]


def q_gram(n: int, dim: int, q: float) -> QGram:
    """Gram matrix of ``e_{i1} (x) ... (x) e_{in}`` under the q-form.

    ``<h_1..h_n, k_1..k_n>_q = sum_sigma q^inv(sigma) prod_j <h_j, k_sigma(j)>``.
    Basis labels are multi-indices (0-based) in lexicographic order.
    """
    if not 1 <= n <= 6 or not 1 <= dim <= 4:
        raise DomainError("q_gram requires 1 <= n <= 6 and 1 <= dim <= 4", (n, dim))
    if not -1.0 <= q <= 1.0:
        raise DomainError("q must lie in [-1, 1]", q)
    labels = list(itertools.product(range(dim), repeat=n))
    N = len(labels)
    arr = np.array(labels, dtype=np.int64)
    weights = dim ** np.arange(n - 1, -1, -1)
    G = np.zeros((N, N))
    rows = np.arange(N)
    # sigma-term is 1 exactly when i_j = k_sigma(j) for all j; deterministic order over sigma
    for sigma in itertools.permutations(range(n)):
        coef = float(q) ** inversions(sigma)
        if coef == 0.0:
            continue
        k = np.empty_like(arr)
        k[:, list(sigma)] = arr
        cols = k @ weights
        G[rows, cols] += coef
    G = 0.5 * (G + G.T)
    m = float(np.linalg.eigvalsh(G)[0])
    return QGram(G, tuple(labels), m, m >= -get_tolerances().tol_psd, float(q))
