"""Finite von Neumann algebras with a normalized trace.

An algebra is a direct sum of full matrix blocks ``M_{n_1} + ... + M_{n_k}``
with trace ``tau(x) = sum_b w_b tr(x_b) / n_b``. Optionally it is a unital
*-subalgebra of such a sum, described by an L2-orthonormal basis; group
algebras in the left-regular representation are handled this way.

Elements are vectorized in L2-orthonormal coordinates, so that the trace
inner product ``tau(x* y)`` becomes the standard inner product of vectors.
For full algebras the coordinates of block ``b`` are ``sqrt(w_b/n_b) x_b``
flattened in row-major order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import get_tolerances
from .errors import DimensionError, DomainError, InvalidInputError, NotSubalgebraError
from .linalg import HermitianEig, apply_scalar, hermitian_eig, operator_norm


class FiniteAlgebra:
    """Direct sum of matrix blocks carrying a faithful normalized trace.

    Parameters
    ----------
    block_dims : sequence of int
        Sizes of the matrix blocks.
    trace_weights : sequence of float, optional
        Weight of each block in the trace; must be positive and sum to one.
        Defaults to weights proportional to ``n_b**2``.
    onb : array_like, optional
        Columns are ambient coordinate vectors of an L2-orthonormal basis of a
        unital *-subalgebra. ``None`` means the full direct sum.
    """

    def __init__(self, block_dims: Sequence[int], trace_weights: Sequence[float] | None = None,
                 onb: np.ndarray | None = None):
        dims = tuple(int(n) for n in block_dims)
        if not dims or any(n < 1 for n in dims):
            raise DimensionError(f"block dimensions must be positive, got {block_dims!r}")
        if trace_weights is None:
            sq = np.array([n * n for n in dims], dtype=float)
            weights = sq / sq.sum()
        else:
            weights = np.asarray(trace_weights, dtype=float)
            if weights.shape != (len(dims),):
                raise DimensionError("one trace weight per block is required")
            if np.any(~(weights > 0)):
                raise DomainError("trace weights must be positive")
            if abs(weights.sum() - 1.0) > 1e-12:
                raise DomainError(f"trace weights sum to {weights.sum()!r}, expected 1")
        self.block_dims = dims
        self.trace_weights = weights
        self._scales = np.sqrt(weights / np.array(dims, dtype=float))
        sizes = [n * n for n in dims]
        self._offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
        self.ambient_dim = int(self._offsets[-1])
        if onb is not None:
            onb = np.asarray(onb, dtype=complex)
            if onb.ndim != 2 or onb.shape[0] != self.ambient_dim:
                raise DimensionError("onb columns must be ambient coordinate vectors")
            gram = onb.conj().T @ onb
            if np.max(np.abs(gram - np.eye(onb.shape[1]))) > 1e-8:
                raise DimensionError("onb columns are not orthonormal")
            if onb.shape[1] == self.ambient_dim:
                onb = None
        self._onb = onb
        self._onb_elements: list[Element] | None = None

    # -- structure -----------------------------------------------------------
    @property
    def is_full(self) -> bool:
        return self._onb is None

    @property
    def dim(self) -> int:
        """Complex dimension of the algebra."""
        return self.ambient_dim if self._onb is None else self._onb.shape[1]

    @property
    def total_size(self) -> int:
        """Size of the block-diagonal matrix representation."""
        return sum(self.block_dims)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        if self.block_dims != other.block_dims or not np.allclose(self.trace_weights, other.trace_weights,
                                                                    atol=1e-14):
            return False
        if (self._onb is None) != (other._onb is None):
            return False
        if self._onb is None:
            return True
        if self._onb.shape != other._onb.shape:
            return False
        # same subspace
        return bool(np.allclose(self._onb @ (self._onb.conj().T @ other._onb), other._onb, atol=1e-10))

    def __hash__(self):
        return hash((self.block_dims, tuple(np.round(self.trace_weights, 14)), self.dim))

    def __repr__(self) -> str:
        kind = "" if self.is_full else f", subalgebra dim={self.dim}"
        return f"FiniteAlgebra(blocks={list(self.block_dims)}, weights={self.trace_weights.round(6).tolist()}{kind})"

    # -- constructors ---------------------------------------------------------
    def element(self, blocks: Iterable) -> "Element":
        return Element(self, blocks)

    def from_matrix(self, m) -> "Element":
        """Element from a block-diagonal matrix (off-block entries ignored)."""
        m = np.asarray(m, dtype=complex)
        if m.shape != (self.total_size, self.total_size):
            raise DimensionError(f"expected a {self.total_size}x{self.total_size} matrix")
        blocks = []
        start = 0
        for n in self.block_dims:
            blocks.append(m[start:start + n, start:start + n])
            start += n
        return Element(self, blocks)

    def identity(self) -> "Element":
        return Element(self, [np.eye(n, dtype=complex) for n in self.block_dims], check=False)

    def zero(self) -> "Element":
        return Element(self, [np.zeros((n, n), dtype=complex) for n in self.block_dims], check=False)

    def scalar(self, c: complex) -> "Element":
        return self.identity() * c

    # -- coordinates ----------------------------------------------------------
    def ambient_vec(self, x: "Element") -> np.ndarray:
        return np.concatenate([s * b.ravel() for s, b in zip(self._scales, x.blocks)])

    def from_ambient_vec(self, v: np.ndarray) -> "Element":
        v = np.asarray(v, dtype=complex)
        blocks = []
        for b, n in enumerate(self.block_dims):
            seg = v[self._offsets[b]:self._offsets[b + 1]]
            blocks.append((seg / self._scales[b]).reshape(n, n))
        return Element(self, blocks, check=False)

    def to_vec(self, x: "Element") -> np.ndarray:
        """L2-orthonormal coordinates of ``x``."""
        self.check_owns(x)
        v = self.ambient_vec(x)
        return v if self._onb is None else self._onb.conj().T @ v

    def from_vec(self, v) -> "Element":
        v = np.asarray(v, dtype=complex)
        if v.shape != (self.dim,):
            raise DimensionError(f"expected a coordinate vector of length {self.dim}")
        return self.from_ambient_vec(v if self._onb is None else self._onb @ v)

    def onb(self) -> list["Element"]:
        """The L2-orthonormal basis whose coordinates ``to_vec`` returns."""
        if self._onb_elements is None:
            eye = np.eye(self.dim, dtype=complex)
            self._onb_elements = [self.from_vec(eye[:, k]) for k in range(self.dim)]
        return list(self._onb_elements)

    def membership_residual(self, x: "Element") -> float:
        """L2 distance from ``x`` to the algebra (zero for full algebras)."""
        if self._onb is None:
            return 0.0
        v = self.ambient_vec(x)
        return float(np.linalg.norm(v - self._onb @ (self._onb.conj().T @ v)))

    def check_owns(self, x: "Element") -> None:
        if not isinstance(x, Element):
            raise DimensionError(f"expected an Element, got {type(x).__name__}")
        if x.algebra is not self and x.algebra != self:
            raise DimensionError("element belongs to a different algebra")

    # -- functionals ----------------------------------------------------------
    def trace(self, x: "Element") -> complex:
        self.check_owns(x)
        return complex(sum(w * np.trace(b) / n for w, b, n in zip(self.trace_weights, x.blocks, self.block_dims)))

    def inner(self, x: "Element", y: "Element") -> complex:
        """``tau(x* y)``."""
        self.check_owns(x)
        self.check_owns(y)
        return complex(sum(w * np.vdot(a, b) / n
                           for w, a, b, n in zip(self.trace_weights, x.blocks, y.blocks, self.block_dims)))

    def func(self, x: "Element", f, check: bool = False) -> "Element":
        """Spectral calculus of a Hermitian element, block by block."""
        return Element(self, [hermitian_eig(b, check=check).reconstruct(lambda w: apply_scalar(f, w))
                              for b in x.blocks], check=False)

    def hermitian_basis(self) -> list["Element"]:
        """Self-adjoint elements forming an ONB over the reals of the self-adjoint part."""
        cands = []
        for b in self.onb():
            cands.append(0.5 * (b + b.adjoint()))
            cands.append(-0.5j * (b - b.adjoint()))
        out: list[Element] = []
        vecs: list[np.ndarray] = []
        for c in cands:
            v = self.ambient_vec(c)
            v = np.concatenate([v.real, v.imag])
            for u in vecs:
                v = v - (u @ v) * u
            nrm = np.linalg.norm(v)
            if nrm > 1e-9:
                v = v / nrm
                vecs.append(v)
                half = v.size // 2
                out.append(self.from_ambient_vec(v[:half] + 1j * v[half:]))
        return out

    def random_element(self, rng: np.random.Generator, hermitian: bool = False) -> "Element":
        z = (rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)) / np.sqrt(2)
        x = self.from_vec(z)
        return 0.5 * (x + x.adjoint()) if hermitian else x

    def subalgebra(self, span: Sequence["Element"]) -> "FiniteAlgebra":
        """Algebra structure on the span of ``span`` inside the same blocks."""
        q = _orthonormalize([self.ambient_vec(x) for x in span])
        sub = FiniteAlgebra(self.block_dims, self.trace_weights, onb=np.column_stack(q))
        _check_closure(sub, sub.onb(), lambda e: sub.membership_residual(e))
        return sub


class Element:
    """An element of a :class:`FiniteAlgebra`, stored block by block."""

    __slots__ = ("algebra", "blocks")
    __array_priority__ = 100

    def __init__(self, algebra: FiniteAlgebra, blocks: Iterable, check: bool = True):
        blocks = tuple(np.asarray(b, dtype=complex) for b in blocks)
        if check:
            if len(blocks) != len(algebra.block_dims):
                raise DimensionError(f"expected {len(algebra.block_dims)} blocks, got {len(blocks)}")
            for b, n in zip(blocks, algebra.block_dims):
                if b.shape != (n, n):
                    raise DimensionError(f"block of shape {b.shape} does not match dimension {n}")
                if not np.all(np.isfinite(b)):
                    raise InvalidInputError("element has NaN or infinite entries")
        self.algebra = algebra
        self.blocks = blocks

    def _combine(self, other: "Element", op) -> "Element":
        self.algebra.check_owns(other)
        return Element(self.algebra, [op(a, b) for a, b in zip(self.blocks, other.blocks)], check=False)

    def __add__(self, other):
        if isinstance(other, Element):
            return self._combine(other, np.add)
        return self + self.algebra.scalar(other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Element):
            return self._combine(other, np.subtract)
        return self - self.algebra.scalar(other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Element(self.algebra, [-b for b in self.blocks], check=False)

    def __mul__(self, c):
        if isinstance(c, Element):
            raise TypeError("use @ for the algebra product")
        return Element(self.algebra, [c * b for b in self.blocks], check=False)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return Element(self.algebra, [b / c for b in self.blocks], check=False)

    def __matmul__(self, other: "Element") -> "Element":
        return self._combine(other, np.matmul)

    def adjoint(self) -> "Element":
        return Element(self.algebra, [b.conj().T for b in self.blocks], check=False)

    @property
    def H(self) -> "Element":
        return self.adjoint()

    def full(self) -> np.ndarray:
        """Block-diagonal matrix representation."""
        n = self.algebra.total_size
        out = np.zeros((n, n), dtype=complex)
        start = 0
        for b in self.blocks:
            k = b.shape[0]
            out[start:start + k, start:start + k] = b
            start += k
        return out

    def trace(self) -> complex:
        return self.algebra.trace(self)

    def norm(self) -> float:
        """L2 norm ``tau(x* x)**(1/2)``."""
        return float(np.sqrt(max(self.algebra.inner(self, self).real, 0.0)))

    def op_norm(self) -> float:
        return max(operator_norm(b) for b in self.blocks)

    def hermiticity_residual(self) -> float:
        return max(float(np.max(np.abs(b - b.conj().T))) if b.size else 0.0 for b in self.blocks)

    def __repr__(self) -> str:
        return f"Element({[b.round(6).tolist() for b in self.blocks]})"


def l2_inner(x: Element, y: Element) -> complex:
    """Trace inner product ``tau(x* y)``."""
    return x.algebra.inner(x, y)


def trace(alg: FiniteAlgebra, x: Element) -> complex:
    return alg.trace(x)


class DensityState:
    """Positive element with unit trace.

    Construction rejects elements whose smallest eigenvalue is below
    ``-tol_psd`` or whose trace differs from one by more than ``1e-10``.
    """

    __slots__ = ("element", "_eigs")

    def __init__(self, element: Element, check: bool = True):
        self.element = element
        self._eigs: tuple[HermitianEig, ...] | None = None
        if check:
            tol = get_tolerances()
            if element.hermiticity_residual() > 1e-8 * max(1.0, element.op_norm()):
                raise DomainError("density must be self-adjoint")
            m = self.min_eig
            if m < -tol.tol_psd:
                raise DomainError(f"density has negative eigenvalue {m:.3e}", m)
            tr = element.trace()
            if abs(tr - 1.0) > 1e-10:
                raise DomainError(f"density has trace {tr!r}", tr)

    @property
    def algebra(self) -> FiniteAlgebra:
        return self.element.algebra

    @property
    def eigs(self) -> tuple[HermitianEig, ...]:
        if self._eigs is None:
            self._eigs = tuple(hermitian_eig(b, check=False) for b in self.element.blocks)
        return self._eigs

    @property
    def min_eig(self) -> float:
        return min(float(e.eigenvalues[0]) for e in self.eigs)

    def func(self, f) -> Element:
        """Spectral calculus using the cached eigendecomposition."""
        return Element(self.algebra, [e.reconstruct(lambda w: apply_scalar(f, w)) for e in self.eigs],
                       check=False)

    @classmethod
    def from_positive(cls, x: Element, floor: float | None = None) -> "DensityState":
        """Normalize a positive element, clipping eigenvalues below ``floor`` first."""
        floor = get_tolerances().eig_floor if floor is None else floor
        alg = x.algebra
        blocks = []
        for b in x.blocks:
            e = hermitian_eig(b, check=False)
            blocks.append(e.reconstruct(lambda w: np.maximum(w, floor)))
        y = Element(alg, blocks, check=False)
        tr = alg.trace(y).real
        y = y / tr
        return cls(Element(alg, [0.5 * (b + b.conj().T) for b in y.blocks], check=False), check=False)

    def __repr__(self) -> str:
        return f"DensityState({self.element!r})"


def maximally_mixed(alg: FiniteAlgebra) -> DensityState:
    return DensityState(alg.identity(), check=False)


def random_density(alg: FiniteAlgebra, seed: int | np.random.Generator, mode: str = "hilbert_schmidt",
                   rank: int | None = None) -> DensityState:
    """Sample a density deterministically from ``seed``.

    Parameters
    ----------
    mode : {"hilbert_schmidt", "ginibre_rank_k", "diagonal"}
        ``hilbert_schmidt`` draws ``G G*`` from complex Ginibre blocks,
        ``ginibre_rank_k`` uses ``n x rank`` blocks, ``diagonal`` draws
        exponential diagonal entries in every block.

    Eigenvalues are clipped below at ``eig_floor`` and the result renormalized,
    except in rank-k mode where the state is intentionally singular.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if mode == "hilbert_schmidt":
        if alg.is_full:
            blocks = []
            for n in alg.block_dims:
                g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
                blocks.append(g @ g.conj().T)
            x = Element(alg, blocks, check=False)
        else:
            g = alg.random_element(rng)
            x = g @ g.adjoint()
        return DensityState.from_positive(x)
    if mode == "ginibre_rank_k":
        if not alg.is_full:
            raise DomainError("rank-k sampling requires a full block algebra")
        if rank is None or rank < 1:
            raise DomainError("ginibre_rank_k needs a positive rank")
        blocks = []
        for n in alg.block_dims:
            k = min(rank, n)
            g = (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) / np.sqrt(2)
            blocks.append(g @ g.conj().T)
        return DensityState.from_positive(Element(alg, blocks, check=False), floor=0.0)
    if mode == "diagonal":
        if not alg.is_full:
            raise DomainError("diagonal sampling requires a full block algebra")
        blocks = [np.diag(rng.exponential(size=n)).astype(complex) for n in alg.block_dims]
        return DensityState.from_positive(Element(alg, blocks, check=False))
    raise DomainError(f"unknown sampling mode {mode!r}")


@dataclass(frozen=True)
class CondExpectation:
    """Trace-preserving conditional expectation, as an L2 projection.

    ``matrix`` acts on L2 coordinates of the algebra; ``basis`` is an
    L2-orthonormal basis of the range.
    """

    algebra: FiniteAlgebra
    matrix: np.ndarray
    basis: tuple[Element, ...]
    idempotent: bool = field(default=True)

    def __call__(self, x: Element) -> Element:
        return self.apply(x)

    def apply(self, x: Element) -> Element:
        alg = self.algebra
        return alg.from_vec(self.matrix @ alg.to_vec(x))

    def apply_state(self, rho: DensityState) -> DensityState:
        y = self.apply(rho.element)
        return DensityState(Element(y.algebra, [0.5 * (b + b.conj().T) for b in y.blocks], check=False),
                            check=False)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def invariant_residuals(self) -> dict[str, float]:
        alg = self.algebra
        m = self.matrix
        one = alg.to_vec(alg.identity())
        return {
            "idempotent": float(np.max(np.abs(m @ m - m))),
            "self_adjoint": float(np.max(np.abs(m - m.conj().T))),
            "unital": float(np.linalg.norm(m @ one - one)),
            "trace_preserving": float(np.linalg.norm(one.conj() @ m - one.conj())),
        }


def _orthonormalize(vectors: Sequence[np.ndarray], drop_tol: float = 1e-10) -> list[np.ndarray]:
    """Modified Gram-Schmidt with one re-orthogonalization pass."""
    out: list[np.ndarray] = []
    for v in vectors:
        w = np.array(v, dtype=complex)
        for _ in range(2):
            for q in out:
                w = w - np.vdot(q, w) * q
        nrm = np.linalg.norm(w)
        if nrm > drop_tol * max(1.0, np.linalg.norm(v)):
            out.append(w / nrm)
    return out


def _check_closure(alg: FiniteAlgebra, basis: Sequence[Element], residual) -> None:
    tol = get_tolerances().tol_subalgebra
    worst = residual(alg.identity())
    if worst > tol:
        raise NotSubalgebraError("span does not contain the unit", worst)
    for a in basis:
        worst = max(worst, residual(a.adjoint()))
        for b in basis:
            worst = max(worst, residual(a @ b))
            if worst > tol:
                raise NotSubalgebraError("span is not closed under multiplication", worst)
    if worst > tol:
        raise NotSubalgebraError("span is not closed under adjoints", worst)


def conditional_expectation(alg: FiniteAlgebra, span: Sequence[Element]) -> CondExpectation:
    """L2 projection onto the *-subalgebra spanned by ``span``.

    Raises
    ------
    NotSubalgebraError
        If the span misses the unit or is not closed under products and
        adjoints (residual above ``tol_subalgebra``).
    """
    if not span:
        raise NotSubalgebraError("empty span", float("inf"))
    q = _orthonormalize([alg.to_vec(x) for x in span])
    Q = np.column_stack(q)
    P = Q @ Q.conj().T

    def residual(x: Element) -> float:
        v = alg.to_vec(x)
        return float(np.linalg.norm(v - P @ v))

    basis = tuple(alg.from_vec(c) for c in q)
    _check_closure(alg, basis, residual)
    return CondExpectation(alg, P, basis)


def trace_expectation(alg: FiniteAlgebra) -> CondExpectation:
    """``E_tau(x) = tau(x) 1``."""
    return conditional_expectation(alg, [alg.identity()])


def identity_expectation(alg: FiniteAlgebra) -> CondExpectation:
    eye = np.eye(alg.dim, dtype=complex)
    return CondExpectation(alg, eye, tuple(alg.onb()))


def tensor(alg_a: FiniteAlgebra, alg_b: FiniteAlgebra) -> FiniteAlgebra:
    """Tensor product; blocks are ordered ``(i, j)`` with ``i`` major."""
    dims = [m * n for m in alg_a.block_dims for n in alg_b.block_dims]
    weights = [u * v for u in alg_a.trace_weights for v in alg_b.trace_weights]
    weights = np.asarray(weights) / np.sum(weights)
    full = FiniteAlgebra(dims, weights)
    if alg_a.is_full and alg_b.is_full:
        return full
    cols = [full.ambient_vec(_kron_elements(full, a, b)) for a in alg_a.onb() for b in alg_b.onb()]
    return FiniteAlgebra(dims, weights, onb=np.column_stack(cols))


def _kron_elements(target: FiniteAlgebra, x: Element, y: Element) -> Element:
    return Element(target, [np.kron(a, b) for a in x.blocks for b in y.blocks], check=False)


def tensor_element(x: Element, y: Element, target: FiniteAlgebra | None = None) -> Element:
    """``x (x) y`` in ``tensor(x.algebra, y.algebra)`` (or ``target`` if given)."""
    target = tensor(x.algebra, y.algebra) if target is None else target
    return _kron_elements(target, x, y)
