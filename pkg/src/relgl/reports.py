"""Structured pass/fail records shared by every verifier."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
HYPOTHESIS_VIOLATED = "hypothesis-violated"
REFUSED_CAP = "refused-cap"
INFORMATIONAL = "informational"

EXIT_CODES = {
    PASS: 0,
    INFORMATIONAL: 0,
    FAIL: 2,
    HYPOTHESIS_VIOLATED: 3,
    REFUSED_CAP: 4,
}


class CapExceeded(RuntimeError):
    """A closure or scan would exceed its configured cap; refused outright
    rather than silently truncated."""


@dataclass
class VerificationReport:
    claim: str
    ring: dict
    n: int
    ideals: dict = field(default_factory=dict)
    mode: str = "exhaustive"
    seed: int | None = None
    checked_count: int = 0
    verdict: str = INFORMATIONAL
    witnesses: list = field(default_factory=list)
    wall_time_ms: float = 0.0
    details: dict = field(default_factory=dict)
    # bulky artifacts (element-key sets etc.) kept out of serialisation
    extras: dict = field(default_factory=dict, repr=False, compare=False)

    def to_dict(self, include_timing=True):
        d = {
            "claim": self.claim,
            "ring": self.ring,
            "n": self.n,
            "ideals": self.ideals,
            "mode": self.mode,
            "seed": self.seed,
            "checked_count": self.checked_count,
            "verdict": self.verdict,
            "witnesses": self.witnesses,
            "details": self.details,
        }
        if include_timing:
            d["wall_time_ms"] = round(self.wall_time_ms, 3)
        return d

    def to_json(self, include_timing=True):
        return json.dumps(self.to_dict(include_timing), sort_keys=True,
                          default=str)

    @property
    def exit_code(self):
        return EXIT_CODES.get(self.verdict, 1)

    def human(self):
        lines = [f"[{self.verdict.upper()}] {self.claim}  "
                 f"(ring={self.ring}, n={self.n}, mode={self.mode})"]
        if self.ideals:
            lines.append("  ideals: " + ", ".join(
                f"{k}={v}" for k, v in self.ideals.items()))
        lines.append(f"  checked: {self.checked_count}, "
                     f"time: {self.wall_time_ms:.0f} ms")
        for key, val in self.details.items():
            lines.append(f"  {key}: {val}")
        for w in self.witnesses[:5]:
            lines.append(f"  witness: {w}")
        if len(self.witnesses) > 5:
            lines.append(f"  ... and {len(self.witnesses) - 5} more witnesses")
        return "\n".join(lines)
