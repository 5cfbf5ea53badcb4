"""
Command-line entry point.

Exit codes: 0 success with every checked property holding, 1 a property
violation (failed verification, bound violated, conjecture falsified),
2 usage or input error, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import contextlib
import sys
from pathlib import Path

from .blocker_model import (
    FlagSpec, PositionSet, flag_positions, l_shape_positions, parse_position_set, valid_flag_specs,
)
from .cardinality import audit
from .errors import BlockerError, BudgetExhaustedError
from .oracle import (
    hankel_coverage, is_blocker, is_minimal, is_minimum, once_intersecting_avoiders, private_witnesses,
)
from .perm_core import DEFAULT_ORDER_LIMIT, enumerate_avoiders, hankel_label, hankel_letter
from .polytope_rank import CSV_HEADER, check_forbidden_corner, face_rank, flag_face_rank
from .report import RunManifest, dumps, hash_file, warm_avoider_cache
from .search_engine import EXHAUSTIVE_LIMIT, SearchConfig, conjecture_probe, run_search

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p, limit=DEFAULT_ORDER_LIMIT):
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--limit", type=int, default=limit, help=f"largest order accepted (default {limit})")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--manifest", help="write a run manifest (with timestamps) to this path")
    p.add_argument("--threads", type=int, default=1, help="worker processes for the search")
    p.add_argument("--no-cache", action="store_true", help="skip the on-disk avoider cache")


def _blocker_source(p, allow_all_flags=False):
    g = p.add_argument_group("blocker")
    g.add_argument("--file", help="position set as JSON or a '.'/'X' grid")
    g.add_argument("--flag", nargs=3, type=int, metavar=("N", "M", "T"), help="use B_n(m,t)")
    if allow_all_flags:
        g.add_argument("--n", type=int)
        g.add_argument("--all-flags", action="store_true", help="scan every valid B_n(m,t)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="flagblock", description=__doc__.splitlines()[1])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("avoiders", help="list 123-avoiding permutations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    _common(p)

    p = sub.add_parser("hankel", help="cyclic-Hankel labels, optionally a set's coverage")
    p.add_argument("--n", type=int)
    p.add_argument("--file")
    _common(p)

    p = sub.add_parser("flag", help="emit B_n(m,t)")
    for name in ("--n", "--m", "--t"):
        p.add_argument(name, type=int, required=True)
    _common(p)

    p = sub.add_parser("lshape", help="emit L_n(s,r)")
    for name in ("--n", "--s", "--r"):
        p.add_argument(name, type=int, required=True)
    _common(p)

    p = sub.add_parser("verify", help="blocker / minimum / minimal checks")
    _blocker_source(p)
    p.add_argument("--minimum", action="store_true", help="also check that no cell is removable")
    p.add_argument("--minimal", action="store_true", help="also check that the size is n")
    _common(p)

    p = sub.add_parser("once", help="avoiders meeting a set exactly once")
    _blocker_source(p)
    _common(p)

    p = sub.add_parser("face-rank", help="rank of once-intersecting avoiders with flag bounds")
    _blocker_source(p, allow_all_flags=True)
    p.add_argument("--csv", action="store_true")
    _common(p)

    p = sub.add_parser("corner-check", help="forbidden lower-right corner of a flag")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--all-flags", action="store_true")
    _common(p)

    p = sub.add_parser("card-audit", help="achievable flag cardinalities against the prime/composite criterion")
    p.add_argument("--n", type=int)
    p.add_argument("--max-n", type=int, help="audit every order from 1 to this one")
    _common(p)

    p = sub.add_parser("search", help="enumerate minimum blockers")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cap", type=int, help="largest cardinality searched")
    p.add_argument("--no-dedup", action="store_true", help="emit every set, not one per symmetry class")
    p.add_argument("--budget", type=int, help="node budget; required above n=6")
    p.add_argument("--checkpoint", help="resume file recording completed root branches")
    _common(p, limit=EXHAUSTIVE_LIMIT)

    p = sub.add_parser("conjecture", help="largest minimum blocker against r*s")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int)
    _common(p, limit=EXHAUSTIVE_LIMIT)
    return parser


class _Run:
    """Per-invocation state: output buffer, exit status, manifest fields."""

    def __init__(self, args):
        self.args = args
        self.lines: list[str] = []
        self.status = EXIT_OK
        self.input_hash = None

    def emit(self, text: str) -> None:
        self.lines.append(text)

    def violation(self) -> None:
        self.status = max(self.status, EXIT_VIOLATION)

    def blocker(self) -> PositionSet:
        a = self.args
        if a.file:
            self.input_hash = hash_file(a.file)
            return parse_position_set(Path(a.file).read_text())
        if a.flag:
            return flag_positions(FlagSpec(*a.flag))
        raise ValueError("give a blocker with --file or --flag")

    def warm(self, n: int) -> None:
        if not self.args.no_cache:
            warm_avoider_cache(n, self.args.limit)


def _cmd_avoiders(run: _Run):
    a = run.args
    run.warm(a.n)
    perms = enumerate_avoiders(a.n, limit=a.limit)
    if a.json:
        out = {"n": a.n, "count": len(perms)}
        if not a.count_only:
            out["avoiders"] = [p.to_list() for p in perms]
        run.emit(dumps(out))
    elif a.count_only:
        run.emit(str(len(perms)))
    else:
        for p in perms:
            run.emit(" ".join(map(str, p.image)))


def _cmd_hankel(run: _Run):
    a = run.args
    ps = run.blocker() if a.file else None
    n = ps.n if ps is not None else a.n
    if n is None:
        raise ValueError("hankel needs --n or --file")
    if n < 1:
        raise ValueError("n must be >= 1")
    labels = [[hankel_label(n, i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]
    coverage = hankel_coverage(ps) if ps is not None else None
    if a.json:
        out = {"n": n, "labels": labels}
        if coverage is not None:
            out["coverage"] = coverage
        run.emit(dumps(out))
        return
    sep = "" if n <= 26 else " "
    for i, row in enumerate(labels, start=1):
        cells = []
        for j, lab in enumerate(row, start=1):
            ch = hankel_letter(lab, n)
            cells.append(ch.upper() if ps is not None and (i, j) in ps else ch)
        run.emit(sep.join(cells))
    if coverage is not None:
        run.emit("coverage " + " ".join(f"{hankel_letter(k, n)}={c}" for k, c in enumerate(coverage)))


def _emit_set(run: _Run, ps: PositionSet):
    run.emit(dumps(ps.to_dict()) if run.args.json else ps.to_grid())


def _cmd_flag(run: _Run):
    a = run.args
    _emit_set(run, flag_positions(FlagSpec(a.n, a.m, a.t)))


def _cmd_lshape(run: _Run):
    a = run.args
    _emit_set(run, l_shape_positions(a.n, a.s, a.r))


def _cmd_verify(run: _Run):
    a = run.args
    ps = run.blocker()
    run.warm(ps.n)
    verdict = is_blocker(ps, limit=a.limit)
    out = {"n": ps.n, "cardinality": len(ps), **verdict.to_dict()}
    ok = verdict.is_blocker
    if a.minimum:
        out["is_minimum"] = is_minimum(ps, limit=a.limit)
        ok = ok and out["is_minimum"]
        if verdict.is_blocker:
            out["private_witnesses"] = [
                {"cell": list(c), "permutation": None if w is None else w.to_list()}
                for c, w in private_witnesses(ps, limit=a.limit).items()
            ]
    if a.minimal:
        out["is_minimal"] = is_minimal(ps, limit=a.limit)
        ok = ok and out["is_minimal"]
    if not ok:
        run.violation()
    if a.json:
        run.emit(dumps(out))
        return
    run.emit(f"n={ps.n} cells={len(ps)} blocker={'yes' if verdict.is_blocker else 'no'}")
    if verdict.witness is not None:
        run.emit("witness " + " ".join(map(str, verdict.witness.image)))
    for key in ("is_minimum", "is_minimal"):
        if key in out:
            run.emit(f"{key[3:]}={'yes' if out[key] else 'no'}")
    for entry in out.get("private_witnesses", []):
        perm = entry["permutation"]
        run.emit(f"  {tuple(entry['cell'])}: {'-' if perm is None else ' '.join(map(str, perm))}")


def _cmd_once(run: _Run):
    a = run.args
    ps = run.blocker()
    run.warm(ps.n)
    perms = once_intersecting_avoiders(ps, limit=a.limit)
    if a.json:
        run.emit(dumps({"n": ps.n, "count": len(perms), "avoiders": [p.to_list() for p in perms]}))
    else:
        for p in perms:
            run.emit(" ".join(map(str, p.image)))


def _cmd_face_rank(run: _Run):
    a = run.args
    if a.all_flags:
        if a.n is None:
            raise ValueError("--all-flags needs --n")
        run.warm(a.n)
        reports = [flag_face_rank(spec, limit=a.limit) for spec in valid_flag_specs(a.n)]
    else:
        ps = run.blocker()
        run.warm(ps.n)
        reports = [face_rank(ps, limit=a.limit)]
    if any(r.within_bounds is False for r in reports):
        run.violation()
    if a.csv:
        if any(r.spec is None for r in reports):
            raise ValueError("CSV output needs flag blockers")
        run.emit(CSV_HEADER)
        for r in reports:
            run.emit(r.csv_row())
    elif a.json:
        body = [r.to_dict() for r in reports]
        run.emit(dumps(body if a.all_flags else body[0]))
    else:
        for r in reports:
            tag = "" if r.spec is None else f"B_{r.spec.n}({r.spec.m},{r.spec.t}) "
            bounds = "" if r.spec is None else (
                f" bounds=[{r.lower_bound},{r.upper_bound}] meets_upper={r.meets_upper} within={r.within_bounds}")
            run.emit(f"{tag}n={r.n} once={r.once_count} rank={r.rank}{bounds}")


def _cmd_corner_check(run: _Run):
    a = run.args
    if a.all_flags:
        specs = valid_flag_specs(a.n)
    elif a.m is not None and a.t is not None:
        specs = [FlagSpec(a.n, a.m, a.t)]
    else:
        raise ValueError("corner-check needs --m and --t, or --all-flags")
    run.warm(a.n)
    rows = [(s, check_forbidden_corner(s, limit=a.limit)) for s in specs]
    if not all(ok for _, ok in rows):
        run.violation()
    if a.json:
        run.emit(dumps([{"n": s.n, "m": s.m, "t": s.t, "corner_clear": ok} for s, ok in rows]))
    else:
        for s, ok in rows:
            run.emit(f"B_{s.n}({s.m},{s.t}) corner_clear={ok}")


def _cmd_card_audit(run: _Run):
    a = run.args
    if a.max_n is not None:
        orders = range(1, a.max_n + 1)
    elif a.n is not None:
        orders = [a.n]
    else:
        raise ValueError("card-audit needs --n or --max-n")
    audits = [audit(n) for n in orders]
    if a.json:
        body = [x.to_dict() for x in audits]
        run.emit(dumps(body if a.max_n is not None else body[0]))
    else:
        run.emit("\n\n".join(x.table() for x in audits))


def _cmd_search(run: _Run):
    a = run.args
    cfg = SearchConfig(a.n, max_cardinality=a.cap, dedup_symmetry=not a.no_dedup, budget=a.budget, limit=a.limit)
    outcome = run_search(cfg, threads=a.threads, checkpoint=a.checkpoint)
    if a.json:
        for r in outcome.results:
            run.emit(dumps(r.to_dict()))
    else:
        counts: dict[int, int] = {}
        for r in outcome.results:
            counts[r.cardinality] = counts.get(r.cardinality, 0) + 1
        run.emit(f"n={a.n} cap={cfg.cap} dedup={cfg.dedup_symmetry} complete={outcome.complete} "
                 f"found={len(outcome.results)}")
        for k in sorted(counts):
            run.emit(f"  cardinality {k}: {counts[k]}")
    if not outcome.complete:
        print(f"flagblock: budget of {a.budget} nodes exhausted; results are incomplete", file=sys.stderr)
        run.status = EXIT_BUDGET


def _cmd_conjecture(run: _Run):
    a = run.args
    rep = conjecture_probe(a.n, budget=a.budget, limit=a.limit, threads=a.threads)
    if rep.falsified:
        run.violation()
    if a.json:
        run.emit(dumps(rep.to_dict()))
    else:
        run.emit(f"n={rep.n} target={rep.target} max_found={rep.max_found} falsified={rep.falsified} "
                 f"complete={rep.complete}")
        if rep.witness is not None:
            run.emit(rep.witness.to_grid())
    if not rep.complete:
        run.status = EXIT_BUDGET


_COMMANDS = {
    "avoiders": _cmd_avoiders, "hankel": _cmd_hankel, "flag": _cmd_flag, "lshape": _cmd_lshape,
    "verify": _cmd_verify, "once": _cmd_once, "face-rank": _cmd_face_rank,
    "corner-check": _cmd_corner_check, "card-audit": _cmd_card_audit,
    "search": _cmd_search, "conjecture": _cmd_conjecture,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("command", "manifest", "out")}
    manifest = RunManifest(args.command, params)
    state = _Run(args)
    try:
        _COMMANDS[args.command](state)
        outcome = "incomplete" if state.status == EXIT_BUDGET else "success"
    except BudgetExhaustedError as exc:
        print(f"flagblock: {exc}", file=sys.stderr)
        state.status, outcome = EXIT_BUDGET, "incomplete"
    except (BlockerError, ValueError, OSError) as exc:
        print(f"flagblock: error: {exc}", file=sys.stderr)
        state.status, outcome = EXIT_USAGE, "error"
    text = "".join(line + "\n" for line in state.lines)
    if state.status != EXIT_USAGE:
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    if args.manifest:
        manifest.input_hash = state.input_hash
        manifest.finish(outcome)
        with contextlib.suppress(OSError):
            manifest.write(args.manifest)
    return state.status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
