"""
Position sets on an n x n grid and the blocker shapes built from them.

A flag-shaped blocker B_n(m, t) is a pole in column m (rows 1..n-t) plus a
flag occupying rows 1..n-m+1 and columns m-t..m-1. With m = n it is the
L-shaped corner blocker.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import IndexOutOfRangeError, InvalidSpecError, OrderMismatchError
from .perm_core import Symmetry, apply_symmetry

__all__ = [
    "PositionSet", "FlagSpec", "flag_positions", "l_shape_positions",
    "corner_forbidden_region", "cardinality", "valid_flag_specs", "match_flag",
    "parse_position_set", "parse_grid",
]

Cell = tuple[int, int]


@dataclass(frozen=True)
class PositionSet:
    n: int
    cells: frozenset[Cell]

    def __init__(self, n: int, cells: Iterable[Iterable[int]] = ()):
        if n < 1:
            raise ValueError("n must be >= 1")
        frozen = frozenset((int(r), int(c)) for r, c in cells)
        for r, c in frozen:
            if not (1 <= r <= n and 1 <= c <= n):
                raise IndexOutOfRangeError(f"cell ({r}, {c}) outside a {n}x{n} grid")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "cells", frozen)

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[Cell]:
        return iter(self.sorted_cells())

    def __contains__(self, cell) -> bool:
        return tuple(cell) in self.cells

    def sorted_cells(self) -> list[Cell]:
        return sorted(self.cells)

    def mask(self) -> int:
        n = self.n
        m = 0
        for r, c in self.cells:
            m |= 1 << ((r - 1) * n + c - 1)
        return m

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "PositionSet":
        cells = []
        k = 0
        while mask:
            if mask & 1:
                cells.append((k // n + 1, k % n + 1))
            mask >>= 1
            k += 1
        return cls(n, cells)

    def _same_order(self, other: "PositionSet") -> None:
        if self.n != other.n:
            raise OrderMismatchError(f"order {self.n} vs {other.n}")

    def union(self, other: "PositionSet") -> "PositionSet":
        self._same_order(other)
        return PositionSet(self.n, self.cells | other.cells)

    def difference(self, other: "PositionSet") -> "PositionSet":
        self._same_order(other)
        return PositionSet(self.n, self.cells - other.cells)

    def isdisjoint(self, other: "PositionSet") -> bool:
        self._same_order(other)
        return self.cells.isdisjoint(other.cells)

    def without(self, cell: Cell) -> "PositionSet":
        return PositionSet(self.n, self.cells - {tuple(cell)})

    def apply(self, sym: Symmetry | str) -> "PositionSet":
        return PositionSet(self.n, apply_symmetry(self.n, self.cells, sym))

    def to_dict(self) -> dict:
        return {"n": self.n, "cells": [list(c) for c in self.sorted_cells()]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_grid(self) -> str:
        rows = []
        for r in range(1, self.n + 1):
            rows.append("".join("X" if (r, c) in self.cells else "." for c in range(1, self.n + 1)))
        return "\n".join(rows)


@dataclass(frozen=True)
class FlagSpec:
    n: int
    m: int
    t: int

    def __post_init__(self):
        if self.n < 1 or not (1 <= self.m <= self.n) or not (0 <= self.t <= self.m - 1):
            raise InvalidSpecError(
                f"B_n(m,t) needs 1 <= m <= n and 0 <= t <= m-1; got n={self.n}, m={self.m}, t={self.t}"
            )

    @property
    def is_rectangular(self) -> bool:
        return self.t == self.m - 1

    def expected_cardinality(self) -> int:
        return self.n + self.t * (self.n - self.m)


def valid_flag_specs(n: int) -> list[FlagSpec]:
    return [FlagSpec(n, m, t) for m in range(1, n + 1) for t in range(m)]


def flag_positions(spec: FlagSpec) -> PositionSet:
    n, m, t = spec.n, spec.m, spec.t
    pole = {(i, m) for i in range(1, n - t + 1)}
    flag = {(i, j) for i in range(1, n - m + 2) for j in range(m - t, m)}
    return PositionSet(n, pole | flag)


def l_shape_positions(n: int, s: int, r: int) -> PositionSet:
    """L_n(s, r): width s along row 1, height r down column n."""
    if s < 1 or r < 1 or r + s != n + 1:
        raise InvalidSpecError(f"L_n(s,r) needs s, r >= 1 and r + s = n + 1; got n={n}, s={s}, r={r}")
    return flag_positions(FlagSpec(n, n, s - 1))


def corner_forbidden_region(spec: FlagSpec) -> PositionSet:
    n, m, t = spec.n, spec.m, spec.t
    return PositionSet(n, [(i, j) for i in range(n - t + 1, n + 1) for j in range(m + 1, n + 1)])


def cardinality(ps: PositionSet) -> int:
    return len(ps.cells)


def match_flag(ps: PositionSet) -> FlagSpec | None:
    """The upright FlagSpec whose cells are exactly ``ps``, if any."""
    for spec in valid_flag_specs(ps.n):
        if spec.expected_cardinality() == len(ps) and flag_positions(spec).cells == ps.cells:
            return spec
    return None


def parse_grid(text: str) -> PositionSet:
    """Read n lines of n characters; 'X' marks a cell, '.' an empty one."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    n = len(lines)
    if n == 0:
        raise ValueError("empty grid")
    cells = []
    for r, line in enumerate(lines, start=1):
        if len(line) != n:
            raise ValueError(f"grid row {r} has {len(line)} characters, expected {n}")
        for c, ch in enumerate(line, start=1):
            if ch in "Xx":
                cells.append((r, c))
            elif ch != ".":
                raise ValueError(f"unexpected character {ch!r} in grid row {r}")
    return PositionSet(n, cells)


def parse_position_set(text: str) -> PositionSet:
    """JSON ``{"n": .., "cells": [[r, c], ..]}`` when the text starts with '{',
    otherwise the '.'/'X' grid format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        try:
            return PositionSet(int(data["n"]), [tuple(c) for c in data["cells"]])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed position set JSON: {exc}") from exc
    return parse_grid(text)
