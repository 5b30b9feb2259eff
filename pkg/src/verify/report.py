"""Verification reports: expected vs computed quantities plus witnesses."""
import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List

import numpy as np

from ..combinat.basis import BasisVector
from ..combinat.fcurves import FCurve
from ..coinv.divisor import CoinvariantDivisor

REPORT_SCHEMA = "mzn-report v1"


class ReportStatus(Enum):
    PASS = "pass"
    FAIL = "fail"


def to_jsonable(value: Any) -> Any:
    """Recursively convert exact values and domain objects to JSON-ready data."""
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (FCurve, BasisVector, CoinvariantDivisor)):
        return value.encode()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(item) for item in items]
    return str(value)


@dataclass
class VerificationReport:
    """
    Certificate emitted by one verifier run.

    Every claim is recorded as a named expected/computed pair; the report
    passes iff all pairs match exactly.
    """
    theorem: str
    n: int
    params: Dict[str, Any] = field(default_factory=dict)
    expected: Dict[str, Any] = field(default_factory=dict)
    computed: Dict[str, Any] = field(default_factory=dict)
    witnesses: Dict[str, Any] = field(default_factory=dict)
    millis: int = 0

    def check(self, name: str, expected: Any, computed: Any) -> bool:
        """Record a claim; returns whether it holds."""
        self.expected[name] = expected
        self.computed[name] = computed
        return expected == computed

    def witness(self, name: str, value: Any) -> None:
        self.witnesses[name] = value

    def mismatches(self) -> List[str]:
        return [name for name in self.expected if self.expected[name] != self.computed.get(name)]

    @property
    def status(self) -> ReportStatus:
        if not self.expected or self.mismatches():
            return ReportStatus.FAIL
        return ReportStatus.PASS

    @property
    def passed(self) -> bool:
        return self.status is ReportStatus.PASS

    def to_json(self) -> Dict[str, Any]:
        return {
            "schema": REPORT_SCHEMA,
            "theorem": self.theorem,
            "n": self.n,
            "params": to_jsonable(self.params),
            "expected": to_jsonable(self.expected),
            "computed": to_jsonable(self.computed),
            "witnesses": to_jsonable(self.witnesses),
            "status": self.status.value,
            "millis": self.millis,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)
