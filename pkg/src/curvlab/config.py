"""Numerical tolerances shared by every module.

The active record can be swapped for the duration of a ``with`` block, which
is how tests and the CLI ``--tol`` flag tighten or loosen checks globally.
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    tol_recon: float = 1e-10  # eigendecomposition reconstruction
    tol_psd: float = 1e-9  # min-eig threshold for positivity
    tol_herm: float = 1e-12  # hermiticity of inputs
    tol_gap: float = 1e-10  # generator eigenvalues below this count as kernel
    tol_subalgebra: float = 1e-8  # closure residual for spans
    tol_unital: float = 1e-9
    eig_floor: float = 1e-12  # faithfulness floor for sampled states
    entropy_skip: float = 1e-10  # D below this is excluded from MLSI ratios


DEFAULT_TOLERANCES = Tolerances()
_ACTIVE: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "curvlab_tolerances", default=DEFAULT_TOLERANCES
)


def get_tolerances() -> Tolerances:
    return _ACTIVE.get()


def tolerance_names() -> list[str]:
    return [f.name for f in dataclasses.fields(Tolerances)]


@contextlib.contextmanager
def override_tolerances(**changes: float):
    """Temporarily replace fields of the active tolerance record.

    Unknown names raise ``KeyError`` so that typos are not silently ignored.
    """
    unknown = set(changes) - set(tolerance_names())
    if unknown:
        raise KeyError(f"unknown tolerance(s): {sorted(unknown)}")
    token = _ACTIVE.set(dataclasses.replace(_ACTIVE.get(), **changes))
    try:
        yield _ACTIVE.get()
    finally:
        _ACTIVE.reset(token)
