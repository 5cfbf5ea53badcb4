"""
Permutations in one-line notation, the 123 pattern, and the cyclic-Hankel
labelling of an n x n grid.

Everything public is 1-based: ``Permutation((2, 3, 1))`` has its 1 of row 1
in column 2. Cells are ``(row, col)`` pairs.

>>> [p.image for p in enumerate_avoiders(3)]
[(1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1)]
>>> hankel_label(6, 6, 6)
4
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NewType

from .errors import IndexOutOfRangeError, OrderTooLargeError

__all__ = [
    "Permutation", "HankelLabel", "Symmetry", "DEFAULT_ORDER_LIMIT",
    "lis_length", "contains_123", "enumerate_avoiders", "catalan",
    "hankel_label", "hankel_letter", "apply_symmetry", "register_avoiders",
]

DEFAULT_ORDER_LIMIT = 12

# 0 is the letter 'a'
HankelLabel = NewType("HankelLabel", int)


@dataclass(frozen=True, order=True)
class Permutation:
    """A permutation of {1..n}; ``image[i-1]`` is the column of row i's 1."""

    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        object.__setattr__(self, "image", image)
        if not image:
            raise ValueError("a permutation needs n >= 1")
        if sorted(image) != list(range(1, len(image) + 1)):
            raise ValueError(f"{list(image)} is not a permutation of 1..{len(image)}")

    @property
    def n(self) -> int:
        return len(self.image)

    def cells(self) -> list[tuple[int, int]]:
        return [(i, c) for i, c in enumerate(self.image, start=1)]

    def mask(self) -> int:
        """Bitmask over the n*n grid, bit (row-1)*n + (col-1)."""
        n = self.n
        m = 0
        for i, c in enumerate(self.image):
            m |= 1 << (i * n + c - 1)
        return m

    def to_list(self) -> list[int]:
        return list(self.image)


class Symmetry(str, Enum):
    TRANSPOSE = "transpose"
    HANKEL_TRANSPOSE = "hankel_transpose"
    ROT180 = "rot180"


def lis_length(p: Permutation) -> int:
    """Length of the longest strictly increasing subsequence (patience sorting)."""
    tails: list[int] = []
    for v in p.image:
        k = bisect.bisect_left(tails, v)
        if k == len(tails):
            tails.append(v)
        else:
            tails[k] = v
    return len(tails)


def contains_123(p: Permutation) -> bool:
    return lis_length(p) >= 3


def catalan(n: int) -> int:
    c = 1
    for k in range(n):
        c = c * 2 * (2 * k + 1) // (k + 2)
    return c


# n -> avoiders in lexicographic order; filled lazily or by register_avoiders
_AVOIDERS: dict[int, tuple[Permutation, ...]] = {}


def _backtrack_avoiders(n: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    prefix: list[int] = []
    used = [False] * (n + 2)

    # low: smallest value placed so far
    # pair_low: smallest value that ends an increasing pair so far;
    # a value above pair_low would complete a 123
    def extend(low: int, pair_low: int) -> None:
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for v in range(1, min(n, pair_low) + 1):
            if used[v]:
                continue
            used[v] = True
            prefix.append(v)
            if v > low:
                extend(low, min(pair_low, v))
            else:
                extend(v, pair_low)
            prefix.pop()
            used[v] = False

    extend(n + 1, n + 1)
    return out


def enumerate_avoiders(n: int, limit: int = DEFAULT_ORDER_LIMIT) -> tuple[Permutation, ...]:
    """All 123-avoiding permutations of order n, in lexicographic order.

    Backtracking over rows in order, pruned as soon as the prefix holds an
    increasing triple. The result is memoised per n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > limit:
        raise OrderTooLargeError(n, limit)
    perms = _AVOIDERS.get(n)
    if perms is None:
        perms = tuple(Permutation(img) for img in _backtrack_avoiders(n))
        _AVOIDERS[n] = perms
    return perms


def register_avoiders(n: int, images: Iterable[Iterable[int]]) -> bool:
    """Seed the in-memory avoider table from an external cache.

    The list is accepted only if it has Catalan(n) strictly increasing
    entries that all avoid 123; otherwise it is ignored and False returned.
    """
    try:
        perms = tuple(Permutation(tuple(img)) for img in images)
    except (ValueError, TypeError):
        return False
    if len(perms) != catalan(n) or any(p.n != n or contains_123(p) for p in perms):
        return False
    if any(a.image >= b.image for a, b in zip(perms, perms[1:])):
        return False
    _AVOIDERS[n] = perms
    return True


def _check_cell(n: int, row: int, col: int) -> None:
    if not (1 <= row <= n and 1 <= col <= n):
        raise IndexOutOfRangeError(f"cell ({row}, {col}) outside a {n}x{n} grid")


def hankel_label(n: int, row: int, col: int) -> HankelLabel:
    _check_cell(n, row, col)
    return HankelLabel((row + col - 2) % n)


def hankel_letter(label: int, n: int) -> str:
    # letters only make sense up to 26 labels
    if n <= 26:
        return chr(ord("a") + label)
    return str(label)


_SYMMETRY_MAPS = {
    Symmetry.TRANSPOSE: lambda n, i, j: (j, i),
    Symmetry.HANKEL_TRANSPOSE: lambda n, i, j: (n + 1 - j, n + 1 - i),
    Symmetry.ROT180: lambda n, i, j: (n + 1 - i, n + 1 - j),
}


def apply_symmetry(n: int, cells: Iterable[tuple[int, int]], sym: Symmetry | str) -> frozenset[tuple[int, int]]:
    """Image of a cell set under one of the three grid symmetries that
    preserve 123-avoidance."""
    f = _SYMMETRY_MAPS[Symmetry(sym)]
    out = set()
    for i, j in cells:
        _check_cell(n, i, j)
        out.add(f(n, i, j))
    return frozenset(out)
