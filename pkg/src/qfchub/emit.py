"""Deterministic CSV/JSON file emitters.

CSV files carry a versioned ``# schema=N`` comment line ahead of the header
so downstream plot scripts break loudly when the layout changes. All rows
are pre-formatted strings, which keeps byte-identical output across runs
and worker counts.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

CSV_SCHEMA = 1


def render_csv(columns: Sequence[str], rows: Iterable[Sequence[str]],
               schema: int = CSV_SCHEMA) -> str:
    lines = [f"# schema={schema}", ",".join(columns)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def write_csv(path: str | Path, columns: Sequence[str],
              rows: Iterable[Sequence[str]], schema: int = CSV_SCHEMA) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_csv(columns, rows, schema), newline="\n")
    return path


def write_json(path: str | Path, payload) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n", newline="\n")
    return path


def read_two_column_csv(path: str | Path) -> tuple[list[float], list[float]]:
    """Read (x, y) pairs, skipping comment lines and an optional header row."""
    xs: list[float] = []
    ys: list[float] = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) < 2:
            continue
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            continue  # header row
        xs.append(x)
        ys.append(y)
    return xs, ys
