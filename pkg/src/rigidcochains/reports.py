"""Verification records shared by the property suites and the command line."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

EXHAUSTIVE_LIMIT = 4096
MIN_SAMPLES = 1000


@dataclass
class Check:
    label: str
    status: str  # PASS, FAIL or VACUOUS
    mode: str = "exact"  # exact, exhaustive or sampled
    trials: int = 1
    counterexample: str | None = None
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return self.status != "FAIL"


def check(label: str, ok: bool, counterexample=None, **kw) -> Check:
    return Check(label, "PASS" if ok else "FAIL",
                 counterexample=None if ok else _describe(counterexample), **kw)


def _describe(x) -> str | None:
    if x is None:
        return None
    return x if isinstance(x, str) else repr(x)


@dataclass
class Report:
    checks: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def add(self, c: Check) -> Check:
        self.checks.append(c)
        return c

    def extend(self, other: "Report"):
        self.checks.extend(other.checks)
        self.warnings.extend(other.warnings)

    def tally(self, label: str, failures: list, trials: int, seed=None, mode="sampled"):
        """Record a repeated check from its list of counterexamples."""
        if trials == 0:
            self.warnings.append(f"{label}: no trials requested, vacuous pass")
            return self.add(Check(label, "VACUOUS", mode, 0, None, seed))
        return self.add(check(label, not failures, failures[0] if failures else None,
                              mode=mode, trials=trials, seed=seed))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def lines(self) -> str:
        out = []
        for c in self.checks:
            line = f"{c.status} {c.label} [{c.mode}, {c.trials} trials, seed={c.seed}]"
            if c.counterexample is not None:
                line += f" counterexample={c.counterexample}"
            out.append(line)
        return "\n".join(out)

    def summary(self) -> str:
        fails = [c for c in self.checks if not c.passed]
        head = f"{len(self.checks) - len(fails)}/{len(self.checks)} checks passed"
        if fails:
            head += f"; first failure: {fails[0].label}"
        return head

    def to_json(self) -> str:
        return json.dumps({"checks": [asdict(c) for c in self.checks],
                           "warnings": self.warnings, "passed": self.passed},
                          indent=2, sort_keys=True)
