"""Derivation triples and their consistency checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Protocol, Sequence

import numpy as np

from ..algebra import Element, FiniteAlgebra
from ..entropy_curvature import gamma_form
from ..semigroup import QMSemigroup


class ExtensionSemigroup(Protocol):
    def evolve(self, y: Element, t: float) -> Element: ...


@dataclass
class Derivation:
    """A symmetric derivation ``delta: M -> M_hat`` with ``E_hat(delta(x)* delta(y)) = Gamma(x, y)``.

    Linear maps are stored as matrices in L2-orthonormal coordinates:
    ``delta_matrix`` and ``embed_matrix`` map domain to codomain,
    ``cond_exp_matrix`` maps codomain back to the domain.
    """

    semigroup: QMSemigroup
    codomain: FiniteAlgebra
    delta_matrix: np.ndarray
    embed_matrix: np.ndarray
    cond_exp_matrix: np.ndarray
    basis: tuple[Element, ...]
    extension: ExtensionSemigroup | None = None
    lambda_claim: float | None = None
    mean_zero: bool = False
    name: str = ""

    @property
    def domain(self) -> FiniteAlgebra:
        return self.semigroup.algebra

    def delta(self, x: Element) -> Element:
        return self.codomain.from_vec(self.delta_matrix @ self.domain.to_vec(x))

    def embed(self, x: Element) -> Element:
        return self.codomain.from_vec(self.embed_matrix @ self.domain.to_vec(x))

    def cond_exp(self, y: Element) -> Element:
        return self.domain.from_vec(self.cond_exp_matrix @ self.codomain.to_vec(y))


def linear_map_matrix(src: FiniteAlgebra, dst: FiniteAlgebra, basis: Sequence[Element],
                      images: Sequence[Element]) -> np.ndarray:
    """Matrix of the linear map sending an ONB ``basis`` of ``src`` to ``images``."""
    B = np.column_stack([src.to_vec(b) for b in basis])
    Im = np.column_stack([dst.to_vec(y) for y in images])
    return Im @ B.conj().T


@dataclass
class TripleReport:
    star_residual: float
    leibniz_residual: float
    gamma_residual: float
    mean_zero_residual: float | None
    pairs_checked: int
    tol: float = 1e-10
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        vals = [self.star_residual, self.leibniz_residual, self.gamma_residual]
        if self.mean_zero_residual is not None:
            vals.append(self.mean_zero_residual)
        return max(vals) <= self.tol


def derivation_triple_check(D: Derivation, random_pairs: int = 200, seed: int = 0,
                            exhaustive_limit: int = 8, tol: float = 1e-10) -> TripleReport:
    """Check the *-property, Leibniz rule and Gamma compatibility.

    Leibniz is tested on all basis pairs when the basis has at most
    ``exhaustive_limit`` elements and on ``random_pairs`` random pairs
    otherwise. Gamma compatibility is always tested on all basis pairs.
    """
    S = D.semigroup
    basis = list(D.basis)
    star = max((D.delta(x.adjoint()) - D.delta(x).adjoint()).norm() for x in basis)

    def leib(x, y):
        return (D.delta(x @ y) - (D.delta(x) @ D.embed(y) + D.embed(x) @ D.delta(y))).norm()

    if len(basis) <= exhaustive_limit:
        pairs = [(x, y) for x in basis for y in basis]
    else:
        rng = np.random.default_rng(seed)
        pairs = [(D.domain.random_element(rng), D.domain.random_element(rng)) for _ in range(random_pairs)]
    leibniz = max(leib(x, y) for x, y in pairs)
    deltas = [D.delta(x) for x in basis]
    gam = 0.0
    for x, dx in zip(basis, deltas):
        for y, dy in zip(basis, deltas):
            gam = max(gam, (D.cond_exp(dx.adjoint() @ dy) - gamma_form(S, x, y)).norm())
    mean = max(D.cond_exp(dx).norm() for dx in deltas) if D.mean_zero else None
    return TripleReport(float(star), float(leibniz), float(gam), mean, len(pairs), tol)


def intertwining_check(D: Derivation, t_grid: Sequence[float] = (0.1, 1.0, 2.0),
                       lambda_claim: float | None = None) -> float:
    """Max of ``||delta(T_t x) - exp(-lam t) T_hat_t(delta x)||_2`` over grid and basis."""
    if D.extension is None:
        raise ValueError("derivation has no extension semigroup")
    lam = D.lambda_claim if lambda_claim is None else lambda_claim
    S = D.semigroup
    worst = 0.0
    for t in t_grid:
        for x in D.basis:
            lhs = D.delta(S.evolve(x, t))
            rhs = np.exp(-lam * t) * D.extension.evolve(D.delta(x), t)
            worst = max(worst, (lhs - rhs).norm())
    return float(worst)
