"""Versioned experiment reports with replayable (exact) witnesses."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .groups import AlgebraVector, GroupPoint

SCHEMA_VERSION = "1.0"


def jsonable(obj):
    """Convert Fractions, points and containers to JSON-ready values."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (GroupPoint, AlgebraVector)):
        return [str(c) for c in obj.coords]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "p12"):  # Root12 and friends
        return float(obj)
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj


@dataclass
class ExperimentReport:
    name: str
    params: dict
    passed: bool
    counts: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    metrics: dict = field(default_factory=dict)
    wall_ms: float | None = None

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "name": self.name,
            "version": SCHEMA_VERSION,
            "params": jsonable(self.params),
            "pass": bool(self.passed),
            "counts": jsonable(self.counts),
            "witnesses": jsonable(self.witnesses),
            "metrics": jsonable(self.metrics),
        }
        if timing:
            out["wall_ms"] = self.wall_ms
        return out

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2)


class Stopwatch:
    def __init__(self):
        self.start = time.perf_counter()

    def ms(self) -> float:
        return round((time.perf_counter() - self.start) * 1000, 3)
