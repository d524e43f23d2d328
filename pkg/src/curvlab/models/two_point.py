"""The two-point space ``C + C`` with the word-length semigroup."""
from __future__ import annotations

import numpy as np

from ..algebra import DensityState, Element, FiniteAlgebra
from ..semigroup import QMSemigroup
from .clifford import clifford_algebra, clifford_number_semigroup


def two_point_algebra() -> tuple[FiniteAlgebra, Element]:
    """``C + C`` with weights (1/2, 1/2) and ``eps = (1, -1)``."""
    alg, gens = clifford_algebra(1)
    return alg, gens[0]


def two_point_semigroup() -> QMSemigroup:
    """``T_t(a 1 + b eps) = a 1 + exp(-t) b eps``."""
    return clifford_number_semigroup(1)


def two_point_state(beta: float) -> DensityState:
    """``diag(1 + beta, 1 - beta)``, densities relative to the normalized trace."""
    alg, eps = two_point_algebra()
    return DensityState(alg.identity() + beta * eps)


def two_point_ratio(beta) -> np.ndarray:
    """Closed-form MLSI ratio ``I / (2 D)`` of ``two_point_state(beta)``."""
    b = np.asarray(beta, dtype=float)
    num = 0.5 * b * np.log((1 + b) / (1 - b))
    den = (1 + b) * np.log1p(b) + (1 - b) * np.log1p(-b)
    return num / den
