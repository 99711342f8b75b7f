"""Outcome of a decision procedure."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Stats:
    """``states`` counts the tuples examined; ``profiles`` the full profiles evaluated."""

    states: int = 0
    profiles: int = 0
    millis: float = 0.0

    def as_dict(self, timing: bool = True) -> dict[str, Any]:
        d = {"states": self.states, "profiles": self.profiles}
        if timing:
            d["millis"] = round(self.millis, 1)
        return d


@dataclass
class Verdict:
    """``holds`` answers the question asked (e.g. "is it manipulable?").

    Positive manipulability answers carry a ``witness``; failed universal
    checks carry a ``counterexample``.
    """

    holds: bool
    witness: Any = None
    counterexample: Any = None
    stats: Stats = field(default_factory=Stats)
    note: str = ""

    def __bool__(self) -> bool:
        return self.holds
