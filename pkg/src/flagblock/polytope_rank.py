"""
Linear rank of permutation matrices and the face rank of a blocker.

Matrices are flattened to 0/1 vectors of length n*n and reduced with
fraction-free integer elimination; rows are divided by their content after
every step so entries stay small. No floating point is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .blocker_model import FlagSpec, PositionSet, corner_forbidden_region, flag_positions, match_flag
from .errors import OrderMismatchError
from .oracle import once_intersecting_avoiders
from .perm_core import DEFAULT_ORDER_LIMIT, Permutation

__all__ = [
    "FaceReport", "integer_rank", "rank_of_matrices", "ambient_rank",
    "upper_bound", "lower_bound", "face_rank", "check_forbidden_corner",
    "CSV_HEADER",
]

CSV_HEADER = "n,m,t,once_count,rank,lower,upper,meets_upper,within_bounds"


def _content(row: list[int]) -> int:
    g = 0
    for x in row:
        if x:
            g = math.gcd(g, x)
            if g == 1:
                break
    return g


def integer_rank(rows: Iterable[Sequence[int]]) -> int:
    """Rank over Q of integer row vectors.

    Each incoming row is reduced against an echelon basis keyed by pivot
    column using ``v <- a*v - b*row`` (no division); the surviving row is
    made primitive and joins the basis.
    """
    basis: dict[int, list[int]] = {}
    for raw in rows:
        v = list(raw)
        for col in sorted(basis):
            b = v[col]
            if not b:
                continue
            row = basis[col]
            a = row[col]
            v = [a * x - b * y for x, y in zip(v, row)]
            g = _content(v)
            if g > 1:
                v = [x // g for x in v]
        pivot = next((k for k, x in enumerate(v) if x), None)
        if pivot is not None:
            basis[pivot] = v
    return len(basis)


def _vector(p: Permutation) -> list[int]:
    n = p.n
    v = [0] * (n * n)
    for i, c in enumerate(p.image):
        v[i * n + c - 1] = 1
    return v


def rank_of_matrices(perms: Iterable[Permutation], n: int) -> int:
    vecs = []
    for p in perms:
        if p.n != n:
            raise OrderMismatchError(f"permutation of order {p.n} in a rank computation of order {n}")
        vecs.append(_vector(p))
    return integer_rank(vecs)


def ambient_rank(n: int) -> int:
    """Linear rank of all n x n permutation matrices."""
    return (n - 1) ** 2 + 1


def upper_bound(spec: FlagSpec) -> int:
    return ambient_rank(spec.n) - spec.t * (spec.n - spec.m)


def lower_bound(spec: FlagSpec) -> int:
    return ambient_rank(spec.n) - (spec.t + 2) * (spec.n - spec.m)


@dataclass(frozen=True)
class FaceReport:
    n: int
    spec: FlagSpec | None
    rank: int
    once_count: int
    upper_bound: int | None = None
    lower_bound: int | None = None
    meets_upper: bool | None = None
    within_bounds: bool | None = None

    @property
    def affine_dimension(self) -> int:
        # informational only; the bounds use the linear normalisation
        return self.rank - 1

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "spec": None if self.spec is None else {"n": self.spec.n, "m": self.spec.m, "t": self.spec.t},
            "rank": self.rank,
            "affine_dimension": self.affine_dimension,
            "once_count": self.once_count,
            "ambient_linear_rank": ambient_rank(self.n),
            "ambient_affine_dimension": (self.n - 1) ** 2,
            "upper_bound": self.upper_bound,
            "lower_bound": self.lower_bound,
            "meets_upper": self.meets_upper,
            "within_bounds": self.within_bounds,
        }

    def csv_row(self) -> str:
        if self.spec is None:
            raise ValueError("CSV rows are defined for flag blockers only")
        s = self.spec
        fields = [s.n, s.m, s.t, self.once_count, self.rank, self.lower_bound, self.upper_bound,
                  str(self.meets_upper).lower(), str(self.within_bounds).lower()]
        return ",".join(str(f) for f in fields)


def face_rank(B: PositionSet, spec: FlagSpec | None = None, limit: int = DEFAULT_ORDER_LIMIT) -> FaceReport:
    """Rank of the avoiders meeting B exactly once, with the flag bounds
    attached when B is (or is declared to be) an upright flag blocker."""
    once = once_intersecting_avoiders(B, limit)
    rank = rank_of_matrices(once, B.n)
    if spec is None:
        spec = match_flag(B)
    elif spec.n != B.n:
        raise OrderMismatchError(f"spec of order {spec.n} for a set of order {B.n}")
    if spec is None:
        return FaceReport(B.n, None, rank, len(once))
    hi, lo = upper_bound(spec), lower_bound(spec)
    return FaceReport(
        n=B.n, spec=spec, rank=rank, once_count=len(once),
        upper_bound=hi, lower_bound=lo,
        meets_upper=rank == hi, within_bounds=lo <= rank <= hi,
    )


def flag_face_rank(spec: FlagSpec, limit: int = DEFAULT_ORDER_LIMIT) -> FaceReport:
    return face_rank(flag_positions(spec), spec=spec, limit=limit)


def check_forbidden_corner(spec: FlagSpec, limit: int = DEFAULT_ORDER_LIMIT) -> bool:
    corner = corner_forbidden_region(spec).cells
    if not corner:
        return True
    for p in once_intersecting_avoiders(flag_positions(spec), limit):
        if any(cell in corner for cell in p.cells()):
            return False
    return True
