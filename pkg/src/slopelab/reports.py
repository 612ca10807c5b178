"""Check reports and exact verdicts for inequalities between real quantities."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .logs import Enclosure, as_enclosure, render

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"
# how a computed value relates to the true one
EXACT, LOWER, UPPER, UNKNOWN = "exact", "lower", "upper", "unknown"


def verdict_le(lhs, rhs, strict: bool = False) -> str:
    """PASS if lhs <= rhs is certain, FAIL if lhs > rhs is certain.

    Exact values are compared exactly. For genuine intervals PASS needs the
    upper end of lhs strictly below the lower end of rhs (or <= when not
    ``strict``).
    """
    a, b = as_enclosure(lhs), as_enclosure(rhs)
    if a.is_exact and b.is_exact:
        ok = a.lo < b.lo if strict else a.lo <= b.lo
        return PASS if ok else FAIL
    if a.hi < b.lo or (not strict and a.hi <= b.lo):
        return PASS
    if a.lo > b.hi or (strict and a.lo >= b.hi and a.is_exact and b.is_exact):
        return FAIL
    return INCONCLUSIVE


@dataclass
class CheckReport:
    suite: str
    case_id: str
    seed: int
    lhs: Enclosure
    rhs: Enclosure
    status: str
    witness: Any = None
    notes: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, suite: str, case_id: str, seed: int, lhs, rhs, witness=None, strict: bool = False, lhs_kind: str = EXACT, rhs_kind: str = EXACT, **notes) -> "CheckReport":
        """lhs <= rhs (or <). A side may be a one-sided bound of the true value
        (kind LOWER or UPPER); verdicts it cannot support become INCONCLUSIVE."""
        lhs, rhs = as_enclosure(lhs), as_enclosure(rhs)
        status = verdict_le(lhs, rhs, strict)
        if status == PASS and (lhs_kind not in (EXACT, UPPER) or rhs_kind not in (EXACT, LOWER)):
            status = INCONCLUSIVE
        if status == FAIL and (lhs_kind not in (EXACT, LOWER) or rhs_kind not in (EXACT, UPPER)):
            status = INCONCLUSIVE
        return cls(suite, case_id, seed, lhs, rhs, status, witness, notes)

    @classmethod
    def equality(cls, suite: str, case_id: str, seed: int, lhs, rhs, witness=None, exact: bool = True) -> "CheckReport":
        lhs, rhs = as_enclosure(lhs), as_enclosure(rhs)
        if not exact:
            status = INCONCLUSIVE
        elif lhs.is_exact and rhs.is_exact:
            status = PASS if lhs.lo == rhs.lo else FAIL
        else:
            status = FAIL if (lhs.hi < rhs.lo or rhs.hi < lhs.lo) else INCONCLUSIVE
        return cls(suite, case_id, seed, lhs, rhs, status, witness, {"relation": "eq"})

    @property
    def slack(self) -> Enclosure:
        return self.rhs - self.lhs

    def row(self) -> dict:
        return {
            "suite": self.suite,
            "case_id": self.case_id,
            "seed": self.seed,
            "lhs_exact": _fmt(self.lhs),
            "rhs_exact": _fmt(self.rhs),
            "lhs_float": f"{float(self.lhs):.12g}",
            "rhs_float": f"{float(self.rhs):.12g}",
            "slack_float": f"{float(self.slack):.12g}",
            "status": self.status,
            "witness": "" if self.witness is None else str(self.witness),
        }


def _fmt(e: Enclosure) -> str:
    if e.is_exact:
        return render(e.lo)
    return f"[{render(e.lo)}; {render(e.hi)}]"


CSV_COLUMNS = [
    "suite",
    "case_id",
    "seed",
    "lhs_exact",
    "rhs_exact",
    "lhs_float",
    "rhs_float",
    "slack_float",
    "status",
    "witness",
]
