"""Dilated Chebyshev polynomials and the spectral data they encode."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import CurvlabError, DomainError, MeasureSupportError

_RESCALE = 1e250
_OVERFLOW = 1e300
_LN2 = float(np.log(2.0))


class ChebyshevOverflowError(CurvlabError, OverflowError):
    pass


@dataclass(frozen=True)
class ChebyshevTable:
    """``U_k(x)`` and ``U'_k(x)`` for ``k = 0..k_max``.

    ``U_0 = 1``, ``U_1 = x``, ``U_{k+1} = x U_k - U_{k-1}`` and
    ``U'_{k+1} = U_k + x U'_k - U'_{k-1}``. Values are stored as
    ``mantissa * 2**exponent`` (rescaling by powers of two is exact); in
    log-scale mode the plain arrays hold ``inf`` where a value exceeds the
    double range.
    """

    x: float
    k_max: int
    U: np.ndarray
    dU: np.ndarray
    mant_U: np.ndarray = field(repr=False)
    exp_U: np.ndarray = field(repr=False)
    mant_dU: np.ndarray = field(repr=False)
    exp_dU: np.ndarray = field(repr=False)
    log_scale: bool = False

    @property
    def sign_U(self) -> np.ndarray:
        return np.sign(self.mant_U)

    @property
    def sign_dU(self) -> np.ndarray:
        return np.sign(self.mant_dU)

    @property
    def log_abs_U(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.mant_U)) + self.exp_U * _LN2

    @property
    def log_abs_dU(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.mant_dU)) + self.exp_dU * _LN2

    def ratio_dU_U(self) -> np.ndarray:
        """``U'_k / U_k``, exact up to rounding of the final division."""
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.ldexp(self.mant_dU / self.mant_U, (self.exp_dU - self.exp_U).astype(np.int64))

    @staticmethod
    def _at(mant, ex, k, ref):
        return float(np.ldexp(mant[k], int(ex[k] - ref)))

    def recursion_residual(self) -> np.ndarray:
        """Relative ``|x U_k - U_{k-1} - U_{k+1}|`` for ``k = 1..k_max-1``."""
        m, e = self.mant_U, self.exp_U
        out = []
        for k in range(1, self.k_max):
            ref = max(e[k - 1], e[k], e[k + 1])
            r = abs(self.x * self._at(m, e, k, ref) - self._at(m, e, k - 1, ref) - self._at(m, e, k + 1, ref))
            scale = max(abs(self._at(m, e, j, ref)) for j in (k - 1, k, k + 1))
            out.append(r / scale if scale > 0 else r)
        return np.array(out)

    def derivative_identity_residual(self) -> np.ndarray:
        """Relative ``|U_k + x U'_k - U'_{k-1} - U'_{k+1}| / |U'_{k+1}|`` for ``k = 1..k_max-1``."""
        m, e, md, ed = self.mant_U, self.exp_U, self.mant_dU, self.exp_dU
        out = []
        for k in range(1, self.k_max):
            ref = ed[k + 1]
            r = abs(self._at(m, e, k, ref) + self.x * self._at(md, ed, k, ref)
                    - self._at(md, ed, k - 1, ref) - self._at(md, ed, k + 1, ref))
            out.append(r / abs(float(md[k + 1])))
        return np.array(out)


def chebyshev_table(x: float, k_max: int, log_scale: bool = False) -> ChebyshevTable:
    """Fill both recursions up to ``k_max``.

    Raises
    ------
    ChebyshevOverflowError
        If a value exceeds ``1e300`` and ``log_scale`` is false.
    """
    if not 0 <= k_max <= 10_000:
        raise DomainError("k_max must lie in [0, 10000]", k_max)
    if not abs(x) <= 1e6:
        raise DomainError("|x| must be at most 1e6", x)
    x = float(x)
    n = k_max + 1
    mu = np.empty(n)
    md = np.empty(n)
    sh = np.empty(n, dtype=np.int64)
    shift = 0
    # actual value = stored * 2**shift
    u_prev, u = 0.0, 1.0
    du_prev, du = 0.0, 0.0
    for k in range(n):
        if k == 1:
            u_prev, u = u, x
            du_prev, du = du, 1.0
        elif k > 1:
            u_prev, u = u, x * u - u_prev
            du_prev, du = du, u_prev + x * du - du_prev
        big = max(abs(u), abs(du))
        if big > _RESCALE:
            if not log_scale and big * 2.0 ** shift > _OVERFLOW:
                raise ChebyshevOverflowError(f"U_k({x}) exceeds 1e300 at k={k}; use log_scale=True")
            e = int(np.frexp(big)[1])
            u_prev, u, du_prev, du = (float(np.ldexp(v, -e)) for v in (u_prev, u, du_prev, du))
            shift += e
        mu[k] = u
        md[k] = du
        sh[k] = shift
    # normalize every entry to its own exponent so later arithmetic never overflows
    fu, eu = np.frexp(mu)
    fd, ed = np.frexp(md)
    eu = eu.astype(np.int64) + sh
    ed = ed.astype(np.int64) + sh
    with np.errstate(over="ignore"):
        U = np.ldexp(fu, np.minimum(eu, 5000))
        dU = np.ldexp(fd, np.minimum(ed, 5000))
    if not log_scale and (np.any(np.abs(U) > _OVERFLOW) or np.any(np.abs(dU) > _OVERFLOW)):
        raise ChebyshevOverflowError(f"U_k({x}) exceeds 1e300; use log_scale=True")
    return ChebyshevTable(x, k_max, U, dU, fu, eu, fd, ed, log_scale)


@dataclass
class BoundReport:
    """Which inequalities hold, with the worst relative slack of each."""

    checks: dict[str, bool]
    worst: dict[str, float]
    flags: list[str]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def _le(a: np.ndarray, b: np.ndarray, rel: float = 1e-12) -> tuple[bool, float]:
    """``a <= b`` up to relative ``rel``; returns the worst ``(a - b) / |b|``."""
    scale = np.maximum(np.abs(b), 1e-300)
    gap = (a - b) / scale
    return bool(np.all(gap <= rel)), float(np.max(gap)) if gap.size else 0.0


@dataclass
class OnPlusSpectrum:
    N: float
    n_k: np.ndarray
    lambda_k: np.ndarray
    bounds: BoundReport


def onplus_spectral_data(N: float, k_max: int, log_scale: bool = True) -> OnPlusSpectrum:
    """``n_k = U_k(N)`` and ``lambda_k = U'_k(N) / U_k(N)``, with the bounds
    ``n_k <= N^k`` and ``k/N <= lambda_k <= k/(N-2)``.

    For ``N = 2`` the upper bound is undefined and reported as flagged.
    """
    if N < 2:
        raise DomainError("N must be at least 2", N)
    tab = chebyshev_table(N, k_max, log_scale=log_scale)
    k = np.arange(k_max + 1, dtype=float)
    lam = tab.ratio_dU_U()
    lam[0] = 0.0
    checks, worst, flags = {}, {}, []
    checks["dimension"], worst["dimension"] = _le(tab.log_abs_U, k * np.log(N), rel=1e-12)
    checks["lambda_lower"], worst["lambda_lower"] = _le(k / N, lam)
    if N > 2:
        checks["lambda_upper"], worst["lambda_upper"] = _le(lam, k / (N - 2))
    else:
        flags.append("lambda_upper bound k/(N-2) undefined for N=2")
    return OnPlusSpectrum(float(N), tab.U, lam, BoundReport(checks, worst, flags))


@dataclass
class QautSpectrum:
    d: float
    m_k: np.ndarray
    xi_k: np.ndarray
    bounds: BoundReport


def qaut_spectral_data(d: float, k_max: int, log_scale: bool = True) -> QautSpectrum:
    """``m_k = U_{2k}(sqrt d)`` and ``xi_k = U'_{2k} / (2 sqrt(d) U_{2k})``.

    Bounds ``m_k <= (d-1)^k`` and ``k/d <= xi_k``; the upper bound
    ``xi_k <= k / (sqrt d (sqrt d - 2))`` is checked for ``d > 4`` and flagged
    as inapplicable at ``d = 4``.
    """
    if d < 4:
        raise DomainError("d must be at least 4", d)
    s = np.sqrt(d)
    tab = chebyshev_table(s, 2 * k_max, log_scale=log_scale)
    k = np.arange(k_max + 1, dtype=float)
    ratio = tab.ratio_dU_U()[::2]
    xi = ratio / (2.0 * s)
    xi[0] = 0.0
    m = tab.U[::2]
    checks, worst, flags = {}, {}, []
    log_m = tab.log_abs_U[::2]
    checks["dimension"], worst["dimension"] = _le(log_m, k * np.log(d - 1), rel=1e-12)
    checks["xi_lower"], worst["xi_lower"] = _le(k / d, xi)
    if d > 4:
        checks["xi_upper"], worst["xi_upper"] = _le(xi, k / (s * (s - 2)))
    else:
        flags.append("xi_upper bound k/(sqrt(d)(sqrt(d)-2)) inapplicable for d=4")
    return QautSpectrum(float(d), m, xi, BoundReport(checks, worst, flags))


def hunt_eigenvalues(N: float, b: float, atoms, k_max: int) -> np.ndarray:
    """Eigenvalues from the Hunt-type formula with a finite atomic measure.

    ``lambda_k = (b U'_k(N) + sum_i w_i (U_k(x_i) - U_k(N)) / (x_i - N)) / U_k(N)``,
    evaluated as ratios ``U_k(x_i) / U_k(N)`` so that large ``k`` does not
    overflow.

    Parameters
    ----------
    atoms : iterable of (x, w)
        Atoms ``x`` in ``[-N, N)`` with weights ``w > 0``.
    """
    if N < 2:
        raise DomainError("N must be at least 2", N)
    if b < 0:
        raise DomainError("b must be nonnegative", b)
    atoms = [(float(x), float(w)) for x, w in atoms]
    for x, w in atoms:
        if x == N:
            raise MeasureSupportError(f"atom at x = N = {N} is not allowed")
        if not -N <= x < N:
            raise MeasureSupportError(f"atom {x} outside [-N, N)")
        if not w > 0:
            raise DomainError("atom weights must be positive", w)
    base = chebyshev_table(N, k_max, log_scale=True)
    lam = b * base.ratio_dU_U()
    for x, w in atoms:
        t = chebyshev_table(x, k_max, log_scale=True)
        with np.errstate(over="ignore", invalid="ignore"):
            r = np.ldexp(t.mant_U / base.mant_U, np.clip(t.exp_U - base.exp_U, -5000, 5000))
        lam = lam + w * (r - 1.0) / (x - N)
    lam[0] = 0.0
    return lam
