"""
Exhaustive enumeration of minimum (irredundant) blockers.

A minimum blocker is a hitting set H of the family {cells(p) : p avoids 123}
in which every cell h has a private avoider, one meeting H only at h. The
search is the classic minimal-transversal recursion: pick an uncovered
avoider with the fewest candidate cells, branch on those cells, and keep a
per-cell "critical" bitmask of privately-hit avoiders; a branch dies as soon
as some chosen cell's critical set empties or the cardinality cap is hit.

Cells and avoiders are both bitmask-indexed so each step is a handful of
big-int operations.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from .blocker_model import PositionSet
from .cardinality import max_cardinality
from .errors import BudgetExhaustedError, OrderTooLargeError
from .oracle import avoider_masks, is_minimum, private_witnesses
from .perm_core import Permutation, Symmetry, apply_symmetry

__all__ = [
    "SearchConfig", "SearchResult", "SearchOutcome", "ConjectureReport",
    "EXHAUSTIVE_LIMIT", "conjecture_target", "canonical_form",
    "run_search", "enumerate_minimum_blockers", "conjecture_probe",
]

# above this order a budget is mandatory
EXHAUSTIVE_LIMIT = 6
HARD_LIMIT = 7


def conjecture_target(n: int) -> int:
    """r*s with r + s = n + 1 and |r - s| <= 1."""
    r = (n + 1) // 2
    return r * (n + 1 - r)


@dataclass(frozen=True)
class SearchConfig:
    n: int
    max_cardinality: int | None = None
    dedup_symmetry: bool = True
    budget: int | None = None
    limit: int = EXHAUSTIVE_LIMIT

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("search needs n >= 2")
        if self.max_cardinality is not None and self.max_cardinality < self.n:
            raise ValueError(f"cardinality cap {self.max_cardinality} is below n={self.n}")
        if self.n > self.limit or self.n > HARD_LIMIT:
            raise OrderTooLargeError(self.n, min(self.limit, HARD_LIMIT))
        if self.n > EXHAUSTIVE_LIMIT and self.budget is None:
            raise ValueError(f"n={self.n} requires an explicit node budget")

    @property
    def cap(self) -> int:
        return max_cardinality(self.n) if self.max_cardinality is None else self.max_cardinality


@dataclass(frozen=True)
class SearchResult:
    blocker: PositionSet
    cardinality: int
    is_verified_minimum: bool
    private_witnesses: dict[tuple[int, int], Permutation]
    symmetry_class_size: int

    def to_dict(self) -> dict:
        return {
            "n": self.blocker.n,
            "cells": [list(c) for c in self.blocker.sorted_cells()],
            "cardinality": self.cardinality,
            "is_verified_minimum": self.is_verified_minimum,
            "private_witnesses": [
                {"cell": list(c), "permutation": self.private_witnesses[c].to_list()}
                for c in sorted(self.private_witnesses)
            ],
            "symmetry_class_size": self.symmetry_class_size,
        }


@dataclass
class SearchOutcome:
    config: SearchConfig
    results: list[SearchResult]
    complete: bool
    nodes: int

    @property
    def max_found(self) -> int:
        return max((r.cardinality for r in self.results), default=0)


_GROUP = (None, Symmetry.TRANSPOSE, Symmetry.HANKEL_TRANSPOSE, Symmetry.ROT180)


def _orbit(n: int, cells: frozenset) -> set[tuple]:
    return {tuple(sorted(cells if s is None else apply_symmetry(n, cells, s))) for s in _GROUP}


def canonical_form(ps: PositionSet) -> PositionSet:
    """Least row-major serialisation over the four-element symmetry group."""
    return PositionSet(ps.n, min(_orbit(ps.n, ps.cells)))


class _Hypergraph:
    """Avoider cell masks plus, per cell, the mask of avoiders through it."""

    def __init__(self, n: int):
        self.n = n
        self.edges = avoider_masks(n, limit=max(n, HARD_LIMIT))
        ncells = n * n
        through = [0] * ncells
        for k, em in enumerate(self.edges):
            while em:
                low = em & -em
                through[low.bit_length() - 1] |= 1 << k
                em ^= low
        self.through = through
        self.all_edges = (1 << len(self.edges)) - 1
        self.all_cells = (1 << ncells) - 1


class _Stop(Exception):
    pass


def _pick_edge(g: _Hypergraph, uncov: int, cand: int) -> int | None:
    """Candidate cells of the uncovered avoider with fewest candidates, or None
    when some uncovered avoider has no candidate left (dead branch)."""
    best = None
    best_count = 0
    u = uncov
    while u:
        low = u & -u
        u ^= low
        c = g.edges[low.bit_length() - 1] & cand
        if not c:
            return None
        count = c.bit_count()
        if best is None or count < best_count:
            best, best_count = c, count
            if count == 1:
                break
    return best


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


class _Searcher:
    def __init__(self, g: _Hypergraph, cap: int, budget: int | None):
        self.g = g
        self.cap = cap
        self.budget = budget
        self.nodes = 0
        self.found: list[int] = []

    def tick(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _Stop

    def root_branches(self) -> tuple[list[int], int]:
        g = self.g
        choice = _pick_edge(g, g.all_edges, g.all_cells)
        cells = _bits(choice)
        return cells, g.all_cells & ~choice

    def run_root_branch(self, index: int) -> None:
        cells, cand = self.root_branches()
        for c in cells[:index]:
            cand |= 1 << c
        c = cells[index]
        self.tick()
        g = self.g
        self._recurse(1 << c, [c], [g.through[c]], g.all_edges & ~g.through[c], cand)

    def _recurse(self, smask: int, chosen: list[int], crit: list[int], uncov: int, cand: int) -> None:
        if not uncov:
            self.found.append(smask)
            return
        if len(chosen) >= self.cap:
            return
        g = self.g
        choice = _pick_edge(g, uncov, cand)
        if choice is None:
            return
        cand &= ~choice
        for c in _bits(choice):
            self.tick()
            through = g.through[c]
            new_crit = [x & ~through for x in crit]
            if all(new_crit):
                new_crit.append(through & uncov)
                chosen.append(c)
                self._recurse(smask | (1 << c), chosen, new_crit, uncov & ~through, cand)
                chosen.pop()
            cand |= 1 << c


def _branch_worker(args):
    n, cap, index = args
    s = _Searcher(_Hypergraph(n), cap, None)
    s.run_root_branch(index)
    return index, s.found, s.nodes


def _load_checkpoint(path, cfg: SearchConfig):
    if path is None or not os.path.exists(path):
        return 0, [], 0
    with open(path) as fh:
        data = json.load(fh)
    if (data.get("n"), data.get("cap")) != (cfg.n, cfg.cap):
        raise ValueError(f"checkpoint {path} belongs to a different search")
    return int(data["completed_branches"]), [int(m) for m in data["masks"]], int(data["nodes"])


def _save_checkpoint(path, cfg: SearchConfig, completed: int, masks: list[int], nodes: int) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump({"n": cfg.n, "cap": cfg.cap, "completed_branches": completed,
                   "masks": [str(m) for m in masks], "nodes": nodes}, fh)
    os.replace(tmp, path)


def _raw_search(cfg: SearchConfig, threads: int = 1, checkpoint: str | None = None) -> tuple[list[int], bool, int]:
    g = _Hypergraph(cfg.n)
    probe = _Searcher(g, cfg.cap, None)
    cells, _ = probe.root_branches()
    start, masks, nodes = _load_checkpoint(checkpoint, cfg)
    pending = list(range(start, len(cells)))

    if threads > 1 and cfg.budget is None and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            done = {}
            for index, found, used in pool.map(_branch_worker, [(cfg.n, cfg.cap, i) for i in pending]):
                done[index] = (found, used)
                # checkpoint only the contiguous finished prefix
                while start in done:
                    found, used = done.pop(start)
                    masks.extend(found)
                    nodes += used
                    start += 1
                    if checkpoint:
                        _save_checkpoint(checkpoint, cfg, start, masks, nodes)
        return masks, True, nodes

    for index in pending:
        remaining = None if cfg.budget is None else cfg.budget - nodes
        s = _Searcher(g, cfg.cap, remaining)
        try:
            s.run_root_branch(index)
        except _Stop:
            return masks + s.found, False, nodes + s.nodes
        masks.extend(s.found)
        nodes += s.nodes
        if checkpoint:
            _save_checkpoint(checkpoint, cfg, index + 1, masks, nodes)
    return masks, True, nodes


def _sort_key(ps: PositionSet):
    return (len(ps), ps.sorted_cells())


def run_search(cfg: SearchConfig, threads: int = 1, checkpoint: str | None = None) -> SearchOutcome:
    """Run the search to completion (or budget) and return verified records
    in emission order: by cardinality, then row-major serialisation."""
    masks, complete, nodes = _raw_search(cfg, threads=threads, checkpoint=checkpoint)
    sets = [PositionSet.from_mask(cfg.n, m) for m in set(masks)]
    records = []
    for ps in sorted(sets, key=_sort_key):
        orbit = _orbit(cfg.n, ps.cells)
        if cfg.dedup_symmetry and tuple(ps.sorted_cells()) != min(orbit):
            continue
        verified = is_minimum(ps, limit=cfg.n)
        witnesses = private_witnesses(ps, limit=cfg.n)
        if not verified or any(w is None for w in witnesses.values()):
            raise AssertionError(f"search produced a set the oracle rejects: {ps.sorted_cells()}")
        records.append(SearchResult(ps, len(ps), verified, witnesses, len(orbit)))
    return SearchOutcome(cfg, records, complete, nodes)


def enumerate_minimum_blockers(cfg: SearchConfig, threads: int = 1) -> Iterator[SearchResult]:
    """Yield every minimum blocker within the cap.

    On budget exhaustion the verified partial records are yielded first and
    BudgetExhaustedError is raised afterwards.
    """
    outcome = run_search(cfg, threads=threads)
    yield from outcome.results
    if not outcome.complete:
        raise BudgetExhaustedError(outcome.nodes, cfg.budget, outcome.results)


@dataclass
class ConjectureReport:
    n: int
    max_found: int
    target: int
    witness: PositionSet | None
    falsified: bool
    complete: bool = True
    nodes: int = 0
    histogram: dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "max_found": self.max_found,
            "target": self.target,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "falsified": self.falsified,
            "complete": self.complete,
            "nodes": self.nodes,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def conjecture_probe(n: int, budget: int | None = None, limit: int = EXHAUSTIVE_LIMIT,
                     threads: int = 1) -> ConjectureReport:
    """Largest minimum blocker with cardinality at most r*s + 1.

    Capping one above the target is enough to decide whether any minimum
    blocker exceeds it. Histogram counts are per symmetry class.
    """
    target = conjecture_target(n)
    cfg = SearchConfig(n, max_cardinality=max(target + 1, n), dedup_symmetry=True, budget=budget, limit=limit)
    outcome = run_search(cfg, threads=threads)
    best = outcome.max_found
    witness = next((r.blocker for r in outcome.results if r.cardinality == best), None)
    hist: dict[int, int] = {}
    for r in outcome.results:
        hist[r.cardinality] = hist.get(r.cardinality, 0) + 1
    return ConjectureReport(n, best, target, witness, best > target, outcome.complete, outcome.nodes, hist)
