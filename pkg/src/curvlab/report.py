"""Check records, report serialization and the report schema."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

from . import __version__

STATUSES = ("pass", "fail", "flagged")
PROVENANCES = ("paper_closed_form", "chain_computation", "numeric_oracle")


def _clean(v: Any) -> Any:
    """JSON-safe copy: non-finite floats become strings, numpy scalars plain Python."""
    if hasattr(v, "item") and not isinstance(v, (list, tuple, dict)):
        try:
            v = v.item()
        except (ValueError, AttributeError):
            v = v.tolist()
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, float):
        return v if math.isfinite(v) else ("nan" if math.isnan(v) else ("inf" if v > 0 else "-inf"))
    if isinstance(v, complex):
        return [_clean(v.real), _clean(v.imag)]
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if hasattr(v, "tolist"):
        return _clean(v.tolist())
    return str(v)


@dataclass
class CheckRecord:
    name: str
    status: str
    value: Any = None
    expected: Any = None
    tol: float | None = None
    provenance: str = "numeric_oracle"
    seconds: float | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"bad provenance {self.provenance!r}")

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "value": _clean(self.value),
                "expected": _clean(self.expected), "tol": _clean(self.tol),
                "provenance": self.provenance, "seconds": _clean(self.seconds)}


def check(name: str, passed: bool, value=None, expected=None, tol=None,
          provenance: str = "numeric_oracle") -> CheckRecord:
    return CheckRecord(name, "pass" if passed else "fail", value, expected, tol, provenance)


def info(name: str, value, provenance: str = "numeric_oracle", flagged: bool = False) -> CheckRecord:
    """A computed value with nothing to compare against."""
    return CheckRecord(name, "flagged" if flagged else "pass", value, None, None, provenance)


@dataclass
class Report:
    command: str
    seed: int
    config: dict = field(default_factory=dict)
    checks: list[CheckRecord] = field(default_factory=list)
    version: str = __version__

    @property
    def failed(self) -> bool:
        return any(c.status == "fail" for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def as_dict(self) -> dict:
        return {"version": self.version, "command": self.command, "seed": self.seed,
                "config": _clean(self.config), "checks": [c.as_dict() for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, allow_nan=False)

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["name", "status", "value", "expected", "tol", "provenance", "seconds"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for c in self.checks:
            d = c.as_dict()
            w.writerow(["" if d[k] is None else (json.dumps(d[k]) if isinstance(d[k], (list, dict)) else d[k])
                        for k in cols])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [f"curvlab {self.version}  {self.command}  seed={self.seed}"]
        width = max((len(c.name) for c in self.checks), default=4)
        for c in self.checks:
            d = c.as_dict()
            val = json.dumps(d["value"]) if isinstance(d["value"], (list, dict)) else d["value"]
            extra = f"  expected={d['expected']}" if d["expected"] is not None else ""
            extra += f"  tol={d['tol']}" if d["tol"] is not None else ""
            lines.append(f"{c.status.upper():8s} {c.name:<{width}}  {val}{extra}  [{c.provenance}]")
        n_fail = sum(c.status == "fail" for c in self.checks)
        n_flag = sum(c.status == "flagged" for c in self.checks)
        lines.append(f"{len(self.checks)} checks, {n_fail} failed, {n_flag} flagged")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        return {"json": lambda: self.to_json() + "\n", "csv": self.to_csv, "text": self.to_text}[fmt]()


def report_schema() -> dict:
    """JSON Schema of the report document."""
    scalar = {"type": ["number", "string", "boolean", "array", "object", "null"]}
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": "curvlab report",
        "version": __version__,
        "type": "object",
        "required": ["version", "command", "seed", "checks"],
        "properties": {
            "version": {"type": "string", "const": __version__},
            "command": {"type": "string"},
            "seed": {"type": "integer"},
            "config": {"type": "object"},
            "checks": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["name", "status", "value", "expected", "tol", "provenance", "seconds"],
                    "properties": {
                        "name": {"type": "string"},
                        "status": {"enum": list(STATUSES)},
                        "value": scalar,
                        "expected": scalar,
                        "tol": {"type": ["number", "null"]},
                        "provenance": {"enum": list(PROVENANCES)},
                        "seconds": {"type": ["number", "null"],
                                    "description": "wall clock; null unless timings are requested"},
                    },
                    "additionalProperties": False,
                },
            },
        },
    }
