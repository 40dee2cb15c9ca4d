"""Configuration and report serialization: JSON and CSV, round-trip exact.

Floats are written with repr (shortest round-trip form) in JSON and with 17
significant digits in CSV, so loading reproduces the stored doubles bit for
bit.  CSV errors name the offending line.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .geometry import Configuration


def config_to_json(config: Configuration) -> str:
    rows = [[float(v) for v in row] for row in config.coords]
    return json.dumps(rows)


def config_from_json(text: str) -> Configuration:
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"bad configuration JSON: {exc}") from exc
    return Configuration(np.asarray(rows, dtype=float))


def config_to_csv(config: Configuration) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([f"dim{i}" for i in range(config.r)])
    for row in config.coords:
        writer.writerow([format(v, ".17g") for v in row])
    return out.getvalue()


def config_from_csv(text: str) -> Configuration:
    lines = [ln for ln in text.splitlines()]
    if not lines:
        raise ValueError("empty configuration CSV")
    header = [h.strip() for h in lines[0].split(",")]
    expected = [f"dim{i}" for i in range(len(header))]
    if header != expected:
        raise ValueError(f"line 1: expected header {','.join(expected)!r}, got {lines[0]!r}")
    r = len(header)
    rows = []
    for idx, ln in enumerate(lines[1:], start=2):
        if not ln.strip():
            continue
        fields = ln.split(",")
        if len(fields) != r:
            raise ValueError(f"line {idx}: expected {r} fields, got {len(fields)}")
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            raise ValueError(f"line {idx}: {exc}") from exc
    if not rows:
        raise ValueError("configuration CSV has no data rows")
    return Configuration(np.asarray(rows, dtype=float))


def load_config(path: str) -> Configuration:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        return config_from_json(text)
    return config_from_csv(text)


def save_config(config: Configuration, path: str) -> None:
    text = config_to_json(config) if path.endswith(".json") else config_to_csv(config)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")


def trace_to_jsonl(trace) -> str:
    """One JSON object per accepted iterate, for offline inspection."""
    return "\n".join(json.dumps(d) for d in trace.iterate_dicts()) + "\n"


def dumps(obj) -> str:
    """Deterministic JSON for CLI output: stable key order, repr floats."""
    return json.dumps(obj, indent=2, sort_keys=False)
