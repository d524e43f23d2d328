"""Growth descriptors of a length function and their file format."""
from __future__ import annotations

from dataclasses import dataclass

from ..errors import DomainError, ParseError


@dataclass(frozen=True)
class GrowthData:
    """Mode ``"A"``: ``(sigma, r, C_r)``; mode ``"B"``: ``(C, R, sigma)``.

    ``sigma`` is the spectral gap ``inf psi`` off the fixed subgroup, ``C_r``
    the sum of ``r**psi(g)`` over those ``g``; in mode B the length function
    has at most ``C R^m`` elements with ``m <= psi <= m + 1``.
    """

    mode: str
    sigma: float
    r: float | None = None
    C_r: float | None = None
    C: float | None = None
    R: float | None = None

    def __post_init__(self):
        if self.mode not in ("A", "B"):
            raise DomainError(f"mode must be 'A' or 'B', got {self.mode!r}")
        if not self.sigma > 0:
            raise DomainError("sigma must be positive", self.sigma)
        if self.mode == "A":
            if self.r is None or self.C_r is None:
                raise DomainError("mode A needs r and C_r")
            if not 0 < self.r < 1:
                raise DomainError("r must lie in (0, 1)", self.r)
            if not 0 < self.C_r < float("inf"):
                raise DomainError("C_r must be finite and positive", self.C_r)
        else:
            if self.C is None or self.R is None:
                raise DomainError("mode B needs C and R")
            if not self.C > 0:
                raise DomainError("C must be positive", self.C)
            if not self.R >= 1:
                raise DomainError("R must be at least 1", self.R)


_KEYS = {"A": {"mode", "sigma", "r", "C_r"}, "B": {"mode", "sigma", "C", "R"}}


def parse_growth(text: str) -> GrowthData:
    """Parse ``key=value`` lines (``#`` comments allowed). Unknown keys are rejected."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS["A"] | _KEYS["B"]:
            raise ParseError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ParseError(f"line {lineno}: duplicate key {key!r}")
        values[key] = val
    mode = values.get("mode")
    if mode not in _KEYS:
        raise ParseError(f"mode must be A or B, got {mode!r}")
    extra = set(values) - _KEYS[mode]
    if extra:
        raise ParseError(f"keys {sorted(extra)} are not valid in mode {mode}")
    missing = _KEYS[mode] - set(values)
    if missing:
        raise ParseError(f"missing keys {sorted(missing)}")
    try:
        nums = {k: float(v) for k, v in values.items() if k != "mode"}
    except ValueError as exc:
        raise ParseError(f"non-numeric value: {exc}") from exc
    try:
        return GrowthData(mode=mode, **nums)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc
