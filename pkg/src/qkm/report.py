"""Check results shared by the relation, bar and R-matrix verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la


@dataclass
class CheckResult:
    """One check on one block; ``witness`` holds the first differing entry on failure."""

    check: str
    block: object
    status: str
    witness: object = None
    instance: str = ""

    def to_json(self) -> dict:
        return {"check": self.check, "instance": self.instance, "block": _jsonable(self.block),
                "status": self.status, "witness": self.witness}


def _jsonable(x):
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    return x


@dataclass
class Report:
    results: list[CheckResult] = field(default_factory=list)
    instance: str = ""

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == "fail"]

    @property
    def skipped(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == "skip"]

    @property
    def ok(self) -> bool:
        return not self.failures

    def by_check(self, check: str) -> list[CheckResult]:
        return [r for r in self.results if r.check == check]

    def passed(self, check: str) -> bool:
        """True when ``check`` ran on at least one block and never failed."""
        rs = self.by_check(check)
        return any(r.status == "pass" for r in rs) and not any(r.status == "fail" for r in rs)

    def add(self, check: str, block, status: str, witness=None) -> None:
        self.results.append(CheckResult(check, block, status, witness, self.instance))

    def skip(self, check: str, block, reason: str | None = None) -> None:
        self.add(check, block, "skip", reason)

    def truth(self, check: str, block, ok: bool, witness=None) -> None:
        self.add(check, block, "pass" if ok else "fail", None if ok else witness)

    def compare(self, check: str, block, lhs: np.ndarray, rhs: np.ndarray) -> None:
        diff = la.first_difference(lhs, rhs)
        if diff is None:
            self.add(check, block, "pass")
        else:
            idx, a, b = diff
            self.add(check, block, "fail", [str(idx), str(a), str(b)])

    def extend(self, other: "Report") -> None:
        self.results.extend(other.results)

    def to_json(self) -> list[dict]:
        return [r.to_json() for r in self.results]
