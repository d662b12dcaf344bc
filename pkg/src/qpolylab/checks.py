"""Pass/fail records shared by every verification routine."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class CheckResult:
    id: str
    claim: str
    status: str
    witness: dict[str, Any] | None = None
    wall_time: float = 0.0
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self) -> bool:
        return self.passed


def jsonable(value: Any) -> Any:
    """Exact scalars become "p/q" strings; containers are converted recursively."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    # flint scalars and anything else exact
    try:
        return jsonable(Fraction(int(value.p), int(value.q)))
    except AttributeError:
        return str(value)


def run_check(check_id: str, claim: str,
              find_witness: Callable[[], dict[str, Any] | None]) -> CheckResult:
    """Evaluate ``find_witness``; ``None`` means the claim holds."""
    start = time.perf_counter()
    witness = find_witness()
    elapsed = time.perf_counter() - start
    if witness is None:
        return CheckResult(check_id, claim, PASS, None, elapsed)
    return CheckResult(check_id, claim, FAIL, jsonable(witness), elapsed)


def skipped(check_id: str, claim: str, reason: str) -> CheckResult:
    return CheckResult(check_id, claim, SKIPPED, {"reason": reason})
