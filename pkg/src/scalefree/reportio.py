"""CSV and manifest emission with reproducible rendering.

All floats are rendered at 17 significant digits so re-runs can be compared
byte for byte; timestamps and wall times live only in the manifest, never in
CSV bodies.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

import mpmath as mp


def fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, mp.mpf):
        return mp.nstr(value, 17, strip_zeros=True)
    return str(value)


def write_csv(path: str | Path, header: list[str], rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def write_json(path: str | Path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def write_manifest(path: str | Path, version: str, config: dict, wall_time_s: float) -> Path:
    payload = {
        "tool_version": version,
        "created_unix": time.time(),
        "wall_time_s": wall_time_s,
        "config": {k: str(v) for k, v in sorted(config.items())},
    }
    return write_json(path, payload)
