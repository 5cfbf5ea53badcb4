"""
Exhaustive ground-truth predicates over the 123-avoiding permutations.

Every check walks ``enumerate_avoiders(n)`` with bitmask intersections; a
permutation that contains 123 can never matter for blockerhood, so S_n is
never scanned. Vocabulary: *minimum* means irredundant
(no cell can be dropped) and *minimal* means smallest cardinality.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .blocker_model import PositionSet
from .errors import OrderMismatchError, OrderTooLargeError
from .perm_core import DEFAULT_ORDER_LIMIT, Permutation, enumerate_avoiders, hankel_label

__all__ = [
    "BlockerVerdict", "intersection_count", "is_blocker", "is_minimum",
    "is_minimum_by_certificate", "private_witnesses", "is_minimal",
    "once_intersecting_avoiders", "hankel_coverage", "avoider_masks",
]


@dataclass(frozen=True)
class BlockerVerdict:
    is_blocker: bool
    witness: Permutation | None = None

    def __post_init__(self):
        if self.is_blocker == (self.witness is not None):
            raise ValueError("a witness is present exactly when the set is not a blocker")

    def to_dict(self) -> dict:
        return {
            "is_blocker": self.is_blocker,
            "witness": None if self.witness is None else self.witness.to_list(),
        }


@lru_cache(maxsize=None)
def _masks(n: int) -> tuple[int, ...]:
    return tuple(p.mask() for p in enumerate_avoiders(n, limit=max(n, DEFAULT_ORDER_LIMIT)))


def avoider_masks(n: int, limit: int = DEFAULT_ORDER_LIMIT) -> tuple[int, ...]:
    """Cell bitmasks of the avoiders of order n, aligned with enumerate_avoiders."""
    if n > limit:
        raise OrderTooLargeError(n, limit)
    return _masks(n)


def _avoiders(n: int, limit: int) -> tuple[Permutation, ...]:
    return enumerate_avoiders(n, limit=limit)


def intersection_count(p: Permutation, B: PositionSet) -> int:
    if p.n != B.n:
        raise OrderMismatchError(f"permutation of order {p.n} against a set of order {B.n}")
    return sum(1 for cell in p.cells() if cell in B.cells)


def _first_miss(masks: tuple[int, ...], bmask: int) -> int | None:
    for k, pm in enumerate(masks):
        if not pm & bmask:
            return k
    return None


def is_blocker(B: PositionSet, limit: int = DEFAULT_ORDER_LIMIT) -> BlockerVerdict:
    masks = avoider_masks(B.n, limit)
    k = _first_miss(masks, B.mask())
    if k is None:
        return BlockerVerdict(True)
    return BlockerVerdict(False, _avoiders(B.n, limit)[k])


def is_minimum(B: PositionSet, limit: int = DEFAULT_ORDER_LIMIT) -> bool:
    """Blocker from which no single cell can be removed (removal testing)."""
    masks = avoider_masks(B.n, limit)
    bmask = B.mask()
    if _first_miss(masks, bmask) is not None:
        return False
    for r, c in B.cells:
        bit = 1 << ((r - 1) * B.n + c - 1)
        if _first_miss(masks, bmask & ~bit) is None:
            return False
    return True


def private_witnesses(B: PositionSet, limit: int = DEFAULT_ORDER_LIMIT) -> dict[tuple[int, int], Permutation | None]:
    """For each cell, the lexicographically first avoider meeting B only there."""
    masks = avoider_masks(B.n, limit)
    perms = _avoiders(B.n, limit)
    bmask = B.mask()
    n = B.n
    out: dict[tuple[int, int], Permutation | None] = {cell: None for cell in B.sorted_cells()}
    remaining = len(out)
    for k, pm in enumerate(masks):
        hit = pm & bmask
        if hit and not hit & (hit - 1):
            idx = hit.bit_length() - 1
            cell = (idx // n + 1, idx % n + 1)
            if out[cell] is None:
                out[cell] = perms[k]
                remaining -= 1
                if not remaining:
                    break
    return out


def is_minimum_by_certificate(B: PositionSet, limit: int = DEFAULT_ORDER_LIMIT) -> bool:
    """Blocker where every cell owns an avoider that meets B at that cell alone."""
    if not is_blocker(B, limit).is_blocker:
        return False
    return all(w is not None for w in private_witnesses(B, limit).values())


def is_minimal(B: PositionSet, limit: int = DEFAULT_ORDER_LIMIT) -> bool:
    # no blocker has fewer than n cells, so a blocker of size n is smallest
    return len(B) == B.n and is_blocker(B, limit).is_blocker


def once_intersecting_avoiders(B: PositionSet, limit: int = DEFAULT_ORDER_LIMIT) -> list[Permutation]:
    masks = avoider_masks(B.n, limit)
    perms = _avoiders(B.n, limit)
    bmask = B.mask()
    out = []
    for k, pm in enumerate(masks):
        hit = pm & bmask
        if hit and not hit & (hit - 1):
            out.append(perms[k])
    return out


def hankel_coverage(B: PositionSet) -> list[int]:
    counts = [0] * B.n
    for r, c in B.cells:
        counts[hankel_label(B.n, r, c)] += 1
    return counts
