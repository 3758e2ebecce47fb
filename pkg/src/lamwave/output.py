"""Deterministic CSV/JSON emission shared by the CLI.

CSV dialect: comma-separated, '#'-prefixed header comments, LF line endings,
floats printed with 17 significant digits so identical runs produce identical
bytes.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Iterable


def fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(path: Path, comments: list[str], header: list[str], rows: Iterable[tuple]) -> None:
    with open(path, "w", newline="\n") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def write_json(path: Path, payload) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:12]
