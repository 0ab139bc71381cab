"""Append-only JSONL store of classification verdicts.

One record per line, each carrying a SHA-256 of its own payload so a
truncated or hand-edited line is caught on load.  The location comes from
``SIMPLEXDET_CACHE_DIR`` (default ``./.cache``).
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import time
from pathlib import Path
from typing import Dict, Iterator, Optional, Tuple

from .classifier import Verdict, check_implications, classify
from .errors import InvariantViolation

CODE_VERSION = "1"
FILENAME = "verdicts.jsonl"

Key = Tuple[int, int, str, str]


def cache_dir() -> Path:
    return Path(os.environ.get("SIMPLEXDET_CACHE_DIR", "./.cache"))


def _digest(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


class CorruptRecord(InvariantViolation):
    pass


class VerdictCache:
    """Verdicts keyed by ``(k, n, variant, code version)``; variant is ``primal`` or ``dual``."""

    def __init__(self, directory: Optional[Path] = None):
        self.directory = Path(directory) if directory is not None else cache_dir()
        self.path = self.directory / FILENAME
        self._records: Dict[Key, Verdict] = {}
        self._load()

    @staticmethod
    def key(k: int, n: int, dual: bool) -> Key:
        return (k, n, "dual" if dual else "primal", CODE_VERSION)

    def _load(self) -> None:
        if not self.path.exists():
            return
        with self.path.open() as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    payload = rec["payload"]
                except (ValueError, KeyError) as exc:
                    raise CorruptRecord(f"{self.path}:{lineno}: unreadable record") from exc
                if _digest(payload) != rec.get("sha256"):
                    raise CorruptRecord(f"{self.path}:{lineno}: checksum mismatch")
                v = Verdict(**payload["verdict"])
                self._records[tuple(payload["key"])] = v

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[Verdict]:
        return iter(self._records.values())

    def get(self, k: int, n: int, dual: bool = False) -> Optional[Verdict]:
        return self._records.get(self.key(k, n, dual))

    def put(self, v: Verdict) -> None:
        key = self.key(v.k, v.n, v.dual)
        if key in self._records:
            return
        payload = {"key": list(key), "verdict": v.as_json(), "timestamp": round(time.time(), 3)}
        line = json.dumps({"payload": payload, "sha256": _digest(payload)}, sort_keys=True)
        self.directory.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", newline="\n") as fh:
            fh.write(line + "\n")
        self._records[key] = v

    def classify(self, k: int, n: int, dual: bool = False) -> Verdict:
        hit = self.get(k, n, dual)
        if hit is not None:
            return hit
        v = classify(k, n, dual=dual)
        if v.proper is not None:
            # undecided verdicts are not worth keeping: a later run may have more budget
            self.put(v)
        return v

    def check_all(self) -> int:
        """Re-run the implication checks on every stored verdict; returns how many were checked."""
        for v in self._records.values():
            check_implications(v)
        return len(self._records)

    def reverify(self, fraction: float = 0.01, seed: int = 0) -> int:
        """Recompute a random sample of cached verdicts; raises on the first disagreement."""
        keys = sorted(self._records)
        if not keys:
            return 0
        rng = random.Random(seed)
        sample = rng.sample(keys, max(1, int(len(keys) * fraction)))
        for key in sample:
            k, n, variant, _ = key
            fresh = classify(k, n, dual=variant == "dual")
            if fresh != self._records[key]:
                raise InvariantViolation(f"cached verdict for {key} disagrees with a fresh run")
        return len(sample)
