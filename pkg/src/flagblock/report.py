"""Run manifests, the on-disk avoider cache and JSON schema access."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from . import __version__
from .perm_core import enumerate_avoiders, register_avoiders

__all__ = ["RunManifest", "cache_dir", "warm_avoider_cache", "load_schema", "dumps", "hash_file"]

CACHE_ENV = "BLOCKER_CACHE_DIR"
# below this order enumeration is faster than reading a file
_CACHE_MIN_N = 9


def dumps(obj) -> str:
    """Canonical JSON used for every report so output is byte-stable."""
    return json.dumps(obj, sort_keys=True, separators=(",", ": "))


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def hash_file(path: str | os.PathLike) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


@dataclass
class RunManifest:
    command: str
    parameters: dict
    tool_version: str = __version__
    started_at: str = field(default_factory=_now)
    finished_at: str | None = None
    input_hash: str | None = None
    outcome: str = "success"

    def finish(self, outcome: str) -> None:
        if outcome not in ("success", "incomplete", "error"):
            raise ValueError(f"unknown outcome {outcome!r}")
        self.outcome = outcome
        self.finished_at = _now()

    def write(self, path: str | os.PathLike) -> None:
        Path(path).write_text(dumps(asdict(self)) + "\n")


def cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "flagblock"


def _cache_file(n: int) -> Path:
    return cache_dir() / f"avoiders-v{__version__}-n{n}.json"


def warm_avoider_cache(n: int, limit: int) -> None:
    """Load the avoider list of order n from disk, or build and store it.

    Purely a speed-up: a missing, unreadable or corrupt file falls back to
    enumeration, and register_avoiders validates whatever it is given.
    """
    if n < _CACHE_MIN_N:
        return
    path = _cache_file(n)
    try:
        data = json.loads(path.read_text())
        if data.get("n") == n and register_avoiders(n, data["avoiders"]):
            return
    except (OSError, ValueError, KeyError, TypeError):
        pass
    perms = enumerate_avoiders(n, limit=limit)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"n": n, "avoiders": [p.to_list() for p in perms]}))
        os.replace(tmp, path)
    except OSError:
        pass


def load_schema(name: str) -> dict:
    return json.loads(resources.files("flagblock").joinpath("schemas", f"{name}.schema.json").read_text())
