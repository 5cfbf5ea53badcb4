"""
Which sizes n + t(n-m) a flag blocker of order n can have.

``achievable_cardinalities`` is the ground truth (a double loop over the
admissible (m, t)); ``paper_predicate`` encodes the prime/composite
characterisation with m-1 read as n-2 (0 when n=1); ``audit`` lists where they disagree.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PredicateRangeError

__all__ = [
    "CardinalityAudit", "max_cardinality", "achievable_cardinalities",
    "is_composite", "paper_predicate", "audit",
]


def max_cardinality(n: int) -> int:
    half = (n + 1) // 2
    return n + (half - 1) * (n - half)


def achievable_cardinalities(n: int) -> list[int]:
    if n < 1:
        raise ValueError("n must be >= 1")
    return sorted({n + t * (n - m) for m in range(1, n + 1) for t in range(m)})


def is_composite(c: int) -> bool:
    if c < 4:
        return False
    d = 2
    while d * d <= c:
        if c % d == 0:
            return True
        d += 1
    return False


def paper_predicate(n: int, p: int) -> bool:
    lo, hi = n, max_cardinality(n)
    if not lo <= p <= hi:
        raise PredicateRangeError(f"p={p} outside [{lo}, {hi}] for n={n}")
    delta = p - n
    # largest admissible m-1 with n-m >= 1; clamped so n=1 still admits delta 0
    return delta <= max(n - 2, 0) or is_composite(delta)


@dataclass(frozen=True)
class CardinalityAudit:
    n: int
    achievable: list[int]
    paper_predicate_set: list[int]
    discrepancies: list[int]
    max_cardinality: int
    rows: list[tuple[int, bool, bool]] = field(repr=False, default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "achievable": self.achievable,
            "paper_predicate_set": self.paper_predicate_set,
            "discrepancies": self.discrepancies,
            "max_cardinality": self.max_cardinality,
            "table": [{"p": p, "in_oracle": a, "in_predicate": b} for p, a, b in self.rows],
        }

    def table(self) -> str:
        lines = [f"n={self.n}  max={self.max_cardinality}", "   p  oracle  predicate"]
        for p, a, b in self.rows:
            mark = "  <- discrepancy" if a != b else ""
            lines.append(f"{p:4d}  {'yes' if a else 'no':>6}  {'yes' if b else 'no':>9}{mark}")
        return "\n".join(lines)


def audit(n: int) -> CardinalityAudit:
    hi = max_cardinality(n)
    achievable = achievable_cardinalities(n)
    have = set(achievable)
    rows = []
    for p in range(n, hi + 1):
        rows.append((p, p in have, paper_predicate(n, p)))
    predicate_set = [p for p, _, b in rows if b]
    discrepancies = [p for p, a, b in rows if a != b]
    return CardinalityAudit(n, achievable, predicate_set, discrepancies, hi, rows)
