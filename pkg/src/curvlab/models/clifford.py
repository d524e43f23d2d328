"""Clifford algebras, the number semigroup and the word-length derivation.

Generators come from a Jordan-Wigner construction on ``m = floor(d/2)``
qubits. For odd ``d`` the last generator is the chirality string
``Z (x) ... (x) Z`` taken with opposite signs on two blocks, which makes the
representation faithful (``Cl(R^d)`` is then ``M + M``). Monomials
``c_A = c_{j1} ... c_{jm}`` (``j1 < ... < jm``) are indexed by bitmasks, bit
``j - 1`` standing for ``c_j``; they form an L2-orthonormal basis.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..algebra import Element, FiniteAlgebra
from ..errors import DomainError
from ..semigroup import QMSemigroup, generator_from_spectrum
from .derivation import Derivation, linear_map_matrix

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _kron_all(mats) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def _jw_generators(count: int, qubits: int) -> list[np.ndarray]:
    gens = []
    for k in range(count // 2):
        pre = [_Z] * k
        post = [_I] * (qubits - k - 1)
        gens.append(_kron_all(pre + [_X] + post))
        gens.append(_kron_all(pre + [_Y] + post))
    return gens


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class CliffordRealization:
    """Concrete matrices for ``Cl(R^d)`` together with its monomial basis.

    Monomials are phase-permutation matrices, which makes expansion in the
    monomial basis cheap: ``coefficients`` and ``assemble`` run in
    ``O(2^d * size)`` without forming dense change-of-basis matrices.
    """

    def __init__(self, d: int):
        if not 1 <= d <= 12:
            raise DomainError("Clifford dimension must satisfy 1 <= d <= 12", d)
        self.d = d
        m = d // 2
        size = 2 ** m
        jw = _jw_generators(2 * m, m)
        if d % 2 == 0:
            self.algebra = FiniteAlgebra([size], [1.0])
            block_gens = [jw]
        else:
            chir = _kron_all([_Z] * m)
            self.algebra = FiniteAlgebra([size, size], [0.5, 0.5])
            block_gens = [jw + [chir], jw + [-chir]]
        self.generators = [Element(self.algebra, [bg[j] for bg in block_gens]) for j in range(d)]
        n_mono = 2 ** d
        total = self.algebra.total_size
        full_gens = [g.full() for g in self.generators]
        mats = [np.eye(total, dtype=complex)]
        for mask in range(1, n_mono):
            top = mask.bit_length() - 1
            mats.append(mats[mask ^ (1 << top)] @ full_gens[top])
        self._full = mats
        rows = np.arange(total)
        self.perm = np.empty((n_mono, total), dtype=np.int64)
        self.phase = np.empty((n_mono, total), dtype=complex)
        for mask, M in enumerate(mats):
            cols = np.argmax(np.abs(M), axis=1)
            self.perm[mask] = cols
            self.phase[mask] = M[rows, cols]
        self.row_weight = np.concatenate([np.full(n, w / n) for n, w in
                                          zip(self.algebra.block_dims, self.algebra.trace_weights)])
        self.sizes = np.array([popcount(k) for k in range(n_mono)])

    @property
    def n_monomials(self) -> int:
        return 2 ** self.d

    def monomial(self, mask: int) -> Element:
        return self.algebra.from_matrix(self._full[mask])

    def monomial_from_indices(self, indices) -> Element:
        """Ordered product ``c_{i1} c_{i2} ...`` (1-based, any order)."""
        out = self.algebra.identity()
        for i in indices:
            out = out @ self.generators[i - 1]
        return out

    def monomials(self) -> list[Element]:
        return [self.monomial(k) for k in range(self.n_monomials)]

    def coefficients(self, x: Element) -> np.ndarray:
        """``tau(c_A* x)`` for every mask ``A``."""
        Xf = x.full()
        rows = np.arange(Xf.shape[0])
        vals = Xf[rows[None, :], self.perm]
        return (self.phase.conj() * vals) @ self.row_weight

    def assemble(self, coeffs: np.ndarray) -> Element:
        total = self.algebra.total_size
        out = np.zeros(total * total, dtype=complex)
        rows = np.arange(total)
        flat = rows[None, :] * total + self.perm
        np.add.at(out, flat.ravel(), (coeffs[:, None] * self.phase).ravel())
        return self.algebra.from_matrix(out.reshape(total, total))


@lru_cache(maxsize=None)
def clifford_realization(d: int) -> CliffordRealization:
    return CliffordRealization(d)


def clifford_algebra(d: int) -> tuple[FiniteAlgebra, list[Element]]:
    """``Cl(R^d)`` and its Hermitian anticommuting generators ``c_1, ..., c_d``."""
    r = clifford_realization(d)
    return r.algebra, list(r.generators)


def monomial_basis(d: int) -> list[Element]:
    return clifford_realization(d).monomials()


def anticommutation_residual(d: int) -> float:
    """``max ||c_i c_j + c_j c_i - 2 delta_ij 1||`` over all pairs."""
    alg, gens = clifford_algebra(d)
    one = alg.identity()
    worst = 0.0
    for i, a in enumerate(gens):
        for j, b in enumerate(gens):
            r = a @ b + b @ a - (2.0 if i == j else 0.0) * one
            worst = max(worst, r.op_norm())
    return worst


_SEMIGROUPS: dict[int, QMSemigroup] = {}


def clifford_number_semigroup(d: int) -> QMSemigroup:
    """Semigroup with ``T_t(c_A) = exp(-|A| t) c_A``."""
    if d not in _SEMIGROUPS:
        r = clifford_realization(d)
        _SEMIGROUPS[d] = generator_from_spectrum(r.algebra, r.sizes.astype(float), r.monomials())
    return _SEMIGROUPS[d]


class MonomialSemigroup:
    """Semigroup on a Clifford algebra, diagonal in the monomial basis.

    ``rates[mask]`` is the decay rate of ``c_mask``.
    """

    def __init__(self, realization: CliffordRealization, rates: np.ndarray):
        self.realization = realization
        self.rates = np.asarray(rates, dtype=float)

    def evolve(self, y: Element, t: float) -> Element:
        if t < 0:
            raise DomainError("semigroup time must be nonnegative", t)
        r = self.realization
        return r.assemble(r.coefficients(y) * np.exp(-t * self.rates))


def clifford_derivation(d: int) -> Derivation:
    """Word-length derivation ``Cl(R^d) -> Cl(R^{2d})``.

    Codomain generators ``1..d`` are the copies of ``c_j`` and ``d+1..2d``
    the hatted ``c_j^``. ``delta`` replaces one factor of a monomial by its
    hatted copy (summed over positions); ``E_hat`` keeps the coefficients of
    monomials without hatted factors; ``T_hat_t`` multiplies a monomial by
    ``exp(-t * (number of unhatted factors))``.
    """
    if not 1 <= d <= 6:
        raise DomainError("Clifford derivation requires 1 <= d <= 6", d)
    dom = clifford_realization(d)
    cod = clifford_realization(2 * d)
    S = clifford_number_semigroup(d)
    basis = dom.monomials()
    images, embeds = [], []
    for mask in range(dom.n_monomials):
        idx = [j + 1 for j in range(d) if mask >> j & 1]
        embeds.append(cod.monomial(mask))
        acc = cod.algebra.zero()
        for k in range(len(idx)):
            word = idx[:k] + [idx[k] + d] + idx[k + 1:]
            acc = acc + cod.monomial_from_indices(word)
        images.append(acc)
    delta_m = linear_map_matrix(dom.algebra, cod.algebra, basis, images)
    embed_m = linear_map_matrix(dom.algebra, cod.algebra, basis, embeds)
    # E_hat(y) = sum_A <c_A, y> c_A over unhatted masks, then pulled back
    cond_m = embed_m.conj().T
    unhatted = (1 << d) - 1
    rates = np.array([popcount(k & unhatted) for k in range(cod.n_monomials)], dtype=float)
    return Derivation(S, cod.algebra, delta_m, embed_m, cond_m, tuple(basis),
                      extension=MonomialSemigroup(cod, rates), lambda_claim=1.0, mean_zero=True,
                      name=f"clifford(d={d})")
