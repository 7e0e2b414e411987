"""Deterministic JSON reports."""

from __future__ import annotations

import hashlib
import json
import os

from . import __version__


def file_digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def build_report(command, params, inputs, result, verdict):
    """Report dict; ``inputs`` lists file paths, recorded by base name and digest."""
    return {
        "tool": "ainfcat",
        "version": __version__,
        "command": command,
        "parameters": dict(sorted(params.items())),
        "inputs": {os.path.basename(p): file_digest(p) for p in sorted(inputs)},
        "verdict": verdict,
        "result": result,
    }


def dumps(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_report(path, report):
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(report))
