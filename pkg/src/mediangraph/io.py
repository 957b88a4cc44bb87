"""CSV datasets and JSON manifests."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import DataError, DimensionMismatch, EmptyInput
from .graph import DatasetCollection


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_dataset_csv(path) -> tuple[np.ndarray, list[str] | None]:
    """Read an ``n x d`` numeric table.

    The first line is taken as a header when none of its cells is a
    number; a partly numeric first line is data. Empty cells, ``NA``,
    ``NaN`` and other non-numeric cells abort with a :class:`DataError`
    naming the file, line and column. Blank lines are skipped.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [(i + 1, row) for i, row in enumerate(csv.reader(fh)) if any(c.strip() for c in row)]
    if not rows:
        raise EmptyInput(f"{path}: no data")
    header = None
    if not any(_is_number(c.strip()) for c in rows[0][1]):
        header = [c.strip() for c in rows[0][1]]
        rows = rows[1:]
    if not rows:
        raise EmptyInput(f"{path}: header only, no observations")
    width = len(header) if header else len(rows[0][1])
    out = np.empty((len(rows), width))
    for i, (line, row) in enumerate(rows):
        if len(row) != width:
            raise DimensionMismatch(f"{path}: line {line} has {len(row)} fields, expected {width}")
        for j, cell in enumerate(row):
            text = cell.strip()
            try:
                value = float(text)
            except ValueError:
                value = math.nan
            if not math.isfinite(value):
                raise DataError(f"{path}: missing or non-numeric value {text!r} at line {line}, column {j + 1}")
            out[i, j] = value
    return out, header


def write_dataset_csv(data, path, header=None) -> None:
    data = np.asarray(data, dtype=float)
    header = header or [f"V{j + 1}" for j in range(data.shape[1])]
    lines = [",".join(header)]
    lines.extend(",".join(f"{v:.17g}" for v in row) for row in data)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_datasets(paths) -> DatasetCollection:
    paths = [Path(p) for p in paths]
    if not paths:
        raise EmptyInput("no input files")
    arrays = []
    for p in paths:
        arrays.append(read_dataset_csv(p)[0])
    return DatasetCollection(tuple(arrays), [p.stem for p in paths])


def dump_json(obj, path) -> None:
    """Deterministic JSON: sorted keys, two-space indent, floats via ``repr``."""
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_json(path):
    with Path(path).open(encoding="utf-8") as fh:
        return json.load(fh)
