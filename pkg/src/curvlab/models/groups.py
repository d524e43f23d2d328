"""Finite groups, K-matrices and Fourier multiplier semigroups."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..algebra import Element, FiniteAlgebra
from ..config import get_tolerances
from ..errors import CNDError, DomainError, GroupTableError, InvalidInputError, ParseError
from ..semigroup import QMSemigroup, generator_from_spectrum


class FiniteGroupModel:
    """Group given by a multiplication table, with a length function ``psi``.

    Elements are ``0..n-1`` with ``0`` the identity and
    ``table[g, h] = g h``. ``psi`` must satisfy ``psi(0) = 0`` and
    ``psi(g) = psi(g^-1)``.
    """

    def __init__(self, table, psi=None, names: Sequence[str] | None = None, spot_checks: int = 4000):
        t = np.asarray(table)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] < 1:
            raise GroupTableError("multiplication table must be a square array")
        if not np.issubdtype(t.dtype, np.integer):
            if not np.all(np.equal(np.mod(t, 1), 0)):
                raise GroupTableError("multiplication table entries must be integers")
            t = t.astype(np.int64)
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise GroupTableError("table entries out of range")
        ar = np.arange(n)
        if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
            raise GroupTableError("element 0 must be the identity")
        for axis in (0, 1):
            if not np.all(np.sort(t, axis=axis) == (ar[:, None] if axis == 0 else ar[None, :])):
                raise GroupTableError("table is not a Latin square")
        if n ** 3 <= spot_checks:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = np.random.default_rng(0)
            triples = rng.integers(0, n, size=(spot_checks, 3))
        for a, b, c in triples:
            if t[t[a, b], c] != t[a, t[b, c]]:
                raise GroupTableError(f"associativity fails at ({a}, {b}, {c})")
        self.table = t
        self.order = n
        self.inverse = np.argmax(t == 0, axis=1)
        self.names = list(names) if names is not None else [str(g) for g in range(n)]
        self.psi = np.zeros(n) if psi is None else self._check_psi(psi)

    def _check_psi(self, psi) -> np.ndarray:
        p = np.asarray(psi, dtype=float)
        if p.shape != (self.order,):
            raise InvalidInputError(f"psi needs {self.order} values")
        if not np.all(np.isfinite(p)):
            raise InvalidInputError("psi has non-finite values")
        if abs(p[0]) > 1e-12:
            raise InvalidInputError("psi must vanish at the identity")
        asym = float(np.max(np.abs(p - p[self.inverse])))
        if asym > 1e-12:
            raise InvalidInputError(f"psi is not symmetric under inversion (residual {asym:.3e})")
        return p

    def with_psi(self, psi) -> "FiniteGroupModel":
        g = FiniteGroupModel.__new__(FiniteGroupModel)
        g.table, g.order, g.inverse, g.names = self.table, self.order, self.inverse, self.names
        g.psi = self._check_psi(psi)
        return g

    def mul(self, g: int, h: int) -> int:
        return int(self.table[g, h])

    def inv(self, g: int) -> int:
        return int(self.inverse[g])


def cyclic_group(n: int, psi=None) -> FiniteGroupModel:
    """``Z_n``; ``psi="wordlength"`` gives ``min(k, n - k)``."""
    if n < 1:
        raise DomainError("n must be positive", n)
    ar = np.arange(n)
    table = (ar[:, None] + ar[None, :]) % n
    if isinstance(psi, str):
        if psi != "wordlength":
            raise DomainError(f"unknown psi {psi!r}")
        psi = np.minimum(ar, n - ar).astype(float)
    return FiniteGroupModel(table, psi)


def symmetric_group(n: int, psi=None) -> FiniteGroupModel:
    """``S_n`` with permutations in lexicographic order (identity first).

    Product is composition ``(g h)(i) = g(h(i))``. ``psi="indicator"`` gives
    ``1_{g != e}`` and ``psi="transpositions"`` the Cayley distance
    (``n`` minus the number of cycles).
    """
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = np.array([[index[tuple(g[h[i]] for i in range(n))] for h in perms] for g in perms])
    if isinstance(psi, str):
        if psi == "indicator":
            psi = np.array([0.0] + [1.0] * (len(perms) - 1))
        elif psi == "transpositions":
            psi = np.array([float(n - _cycle_count(p)) for p in perms])
        else:
            raise DomainError(f"unknown psi {psi!r}")
    return FiniteGroupModel(table, psi, names=["".join(map(str, p)) for p in perms])


def _cycle_count(p) -> int:
    seen = set()
    count = 0
    for i in range(len(p)):
        if i not in seen:
            count += 1
            j = i
            while j not in seen:
                seen.add(j)
                j = p[j]
    return count


def parse_group_table(text: str) -> FiniteGroupModel:
    """Parse the text table format.

    First line ``n``; then ``n`` lines of ``n`` integers (row ``g``, column
    ``h`` holds the index of ``g h``, element 0 the identity); then one line
    of ``n`` reals giving ``psi``. Blank lines and ``#`` comments are ignored.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty group table")
    try:
        n = int(lines[0])
    except ValueError as exc:
        raise ParseError(f"first line must be the group order, got {lines[0]!r}") from exc
    if n < 1:
        raise ParseError("group order must be positive")
    if len(lines) != n + 2:
        raise ParseError(f"expected {n + 2} non-empty lines, found {len(lines)}")
    rows = []
    for k, ln in enumerate(lines[1:n + 1], start=2):
        parts = ln.split()
        if len(parts) != n:
            raise ParseError(f"table row {k - 1} has {len(parts)} entries, expected {n}")
        try:
            rows.append([int(p) for p in parts])
        except ValueError as exc:
            raise ParseError(f"non-integer entry in table row {k - 1}") from exc
    parts = lines[n + 1].split()
    if len(parts) != n:
        raise ParseError(f"psi line has {len(parts)} values, expected {n}")
    try:
        psi = [float(p) for p in parts]
    except ValueError as exc:
        raise ParseError("non-numeric psi value") from exc
    try:
        return FiniteGroupModel(np.array(rows, dtype=np.int64), psi)
    except (GroupTableError, InvalidInputError) as exc:
        raise ParseError(str(exc)) from exc


# -- K-matrices ---------------------------------------------------------------------
@dataclass(frozen=True)
class KMatrix:
    """``K(g, h) = (psi(g) + psi(h) - psi(g^-1 h)) / 2`` on an index set."""

    index: tuple
    matrix: np.ndarray

    @property
    def schur_square(self) -> np.ndarray:
        return self.matrix * self.matrix


def k_matrix(G: FiniteGroupModel, psi=None) -> KMatrix:
    psi = G.psi if psi is None else G._check_psi(psi)
    gi_h = G.table[G.inverse][:, :]  # row g: g^-1 h for each h
    K = 0.5 * (psi[:, None] + psi[None, :] - psi[gi_h])
    return KMatrix(tuple(range(G.order)), 0.5 * (K + K.T))


def integer_k_matrix(indices: Sequence[int], psi: Callable[[int], float]) -> KMatrix:
    """K-matrix of a function ``psi`` on ``Z`` restricted to ``indices``."""
    idx = [int(i) for i in indices]
    p = np.array([psi(i) for i in idx], dtype=float)
    diff = np.array([[psi(h - g) for h in idx] for g in idx], dtype=float)
    K = 0.5 * (p[:, None] + p[None, :] - diff)
    return KMatrix(tuple(idx), K)


def z_truncation(n: int, psi: Callable[[int], float] | None = None, symmetric: bool = False) -> KMatrix:
    """K-matrix on ``{0, ..., n}`` (or ``{-n, ..., n}``) for ``psi`` on ``Z``.

    The default ``psi`` is ``1_{g != 0}``.
    """
    psi = (lambda g: float(g != 0)) if psi is None else psi
    idx = range(-n, n + 1) if symmetric else range(0, n + 1)
    return integer_k_matrix(idx, psi)


def cnd_violation(K: KMatrix) -> tuple[float, np.ndarray]:
    w, u = np.linalg.eigh(K.matrix)
    return float(w[0]), u[:, 0]


def cnd_check(G: FiniteGroupModel, psi=None) -> bool:
    """``psi`` is conditionally negative definite iff its K-matrix is PSD."""
    m, _ = cnd_violation(k_matrix(G, psi))
    return m >= -get_tolerances().tol_psd


def rayleigh_ratio(K: KMatrix, v=None) -> float:
    """``<v, (K o K) v> / <v, K v>``; ``v`` defaults to the all-ones vector."""
    v = np.ones(K.matrix.shape[0]) if v is None else np.asarray(v, dtype=float)
    return float(v @ K.schur_square @ v / (v @ K.matrix @ v))


def schur_power_bound(K: KMatrix, resolution: float = 1e-8, lam_max: float = 1e6) -> float:
    """Largest ``lam`` with ``K o K - lam K`` PSD (bisection)."""
    tol = get_tolerances().tol_psd
    A = K.schur_square
    B = K.matrix

    def ok(lam):
        return float(np.linalg.eigvalsh(A - lam * B)[0]) >= -tol

    if not ok(0.0):
        raise DomainError("K o K is not PSD; K is not a valid K-matrix")
    lo, hi = 0.0, 1.0
    while ok(hi):
        lo, hi = hi, 2 * hi
        if hi > lam_max:
            return float("inf")
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


# -- group algebra -------------------------------------------------------------------
def left_regular(G: FiniteGroupModel, g: int) -> np.ndarray:
    """Permutation matrix of ``lambda(g)``: ``delta_h -> delta_{g h}``."""
    n = G.order
    m = np.zeros((n, n), dtype=complex)
    m[G.table[g], np.arange(n)] = 1.0
    return m


class GroupAlgebra:
    """``C[G]`` acting on ``l2(G)``, normalized trace ``tau(x) = <delta_e, x delta_e>``."""

    def __init__(self, G: FiniteGroupModel):
        if G.order > 200:
            raise DomainError("group order must be at most 200", G.order)
        self.group = G
        n = G.order
        self.matrices = [left_regular(G, g) for g in range(n)]
        ambient = FiniteAlgebra([n], [1.0])
        cols = np.column_stack([ambient.ambient_vec(Element(ambient, [m], check=False)) for m in self.matrices])
        self.algebra = FiniteAlgebra([n], [1.0], onb=cols)
        self._elements = [Element(self.algebra, [m], check=False) for m in self.matrices]

    def lam(self, g: int) -> Element:
        return self._elements[g]

    def basis(self) -> list[Element]:
        return list(self._elements)


def fourier_multiplier_semigroup(G: FiniteGroupModel, psi=None) -> tuple[QMSemigroup, GroupAlgebra]:
    """``T_t(lambda(g)) = exp(-t psi(g)) lambda(g)`` on the group algebra.

    Raises
    ------
    CNDError
        If ``psi`` is not conditionally negative definite; the error carries
        the eigenvector of the most negative K-matrix eigenvalue.
    """
    if psi is not None:
        G = G.with_psi(psi)
    m, vec = cnd_violation(k_matrix(G))
    if m < -get_tolerances().tol_psd:
        raise CNDError("psi is not conditionally negative definite", vec, m)
    ga = GroupAlgebra(G)
    S = generator_from_spectrum(ga.algebra, G.psi, ga.basis())
    return S, ga
