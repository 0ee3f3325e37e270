"""Delimited-text ingestion, result emission and run manifests."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError
from .simulation import make_sample

SCHEMAS: dict[str, tuple[str, ...]] = {
    "plain": ("x", "y"),
    "case_control": ("x", "y", "s"),
    "x_truncated": ("x", "y"),
    "left_truncated": ("x", "t", "y"),
    "ltrc": ("x", "t", "z", "delta"),
    "right_truncated": ("x", "y", "c"),
    "double_truncated": ("x", "t", "y", "c"),
    "current_status": ("x", "c", "delta"),
}

_BINARY = {
    "plain": ("y",),
    "case_control": ("y", "s"),
    "x_truncated": ("y",),
    "ltrc": ("delta",),
    "current_status": ("delta",),
}

# row-wise sampling condition per design, as (description, predicate on a dict row)
_CONDITIONS = {
    "left_truncated": ("t <= y", lambda r: r["t"] <= r["y"]),
    "ltrc": ("t <= z", lambda r: r["t"] <= r["z"]),
    "right_truncated": ("y <= c", lambda r: r["y"] <= r["c"]),
    "double_truncated": ("t <= y <= c", lambda r: r["t"] <= r["y"] <= r["c"]),
}

MANIFEST_SCHEMA_VERSION = 1


def schema_text(design: str) -> str:
    if design not in SCHEMAS:
        raise DataError(f"unknown design {design!r}; expected one of {sorted(SCHEMAS)}")
    cols = ",".join(SCHEMAS[design])
    extra = ""
    if design in _BINARY:
        extra += f"; binary columns: {', '.join(_BINARY[design])}"
    if design in _CONDITIONS:
        extra += f"; each row must satisfy {_CONDITIONS[design][0]}"
    return f"{design}: header {cols}{extra}"


@dataclass
class Dataset:
    """Typed columns of one design plus the ingestion reject log."""

    design: str
    columns: dict[str, np.ndarray]
    source: str = ""
    rejects: list[tuple[int, str]] = field(default_factory=list)

    def __len__(self):
        return len(next(iter(self.columns.values())))

    def sample(self):
        return make_sample(self.design, self.columns)


def ingest(path, design: str) -> Dataset:
    """Read a comma-separated file with a header row into a :class:`Dataset`.

    Rows with the wrong number of fields, unparsable or non-finite values,
    non-binary indicators or a violated sampling condition are rejected
    and logged with their line number.  A missing required column or an
    empty result raises :class:`DataError`.
    """
    required = SCHEMAS.get(design)
    if required is None:
        raise DataError(f"unknown design {design!r}; expected one of {sorted(SCHEMAS)}")
    path = Path(path)
    rejects: list[tuple[int, str]] = []
    values: dict[str, list[float]] = {c: [] for c in required}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty file; expected {schema_text(design)}")
        header = [h.strip() for h in header]
        missing = [c for c in required if c not in header]
        if missing:
            raise DataError(f"{path}: missing columns {missing}; expected {schema_text(design)}")
        idx = {c: header.index(c) for c in required}
        binary = _BINARY.get(design, ())
        cond = _CONDITIONS.get(design)
        for line, fields in enumerate(reader, start=2):
            if not fields or all(not f.strip() for f in fields):
                continue
            if len(fields) != len(header):
                rejects.append((line, f"expected {len(header)} fields, got {len(fields)}"))
                continue
            try:
                row = {c: float(fields[i]) for c, i in idx.items()}
            except ValueError as exc:
                rejects.append((line, f"unparsable value ({exc})"))
                continue
            if not all(math.isfinite(v) for v in row.values()):
                rejects.append((line, "non-finite value"))
                continue
            bad = [c for c in binary if row[c] not in (0.0, 1.0)]
            if bad:
                rejects.append((line, f"non-binary {', '.join(bad)}"))
                continue
            if cond is not None and not cond[1](row):
                rejects.append((line, f"violates {cond[0]}"))
                continue
            for c in required:
                values[c].append(row[c])
    if not values[required[0]]:
        raise DataError(f"{path}: no valid records ({len(rejects)} rejected)")
    cols = {c: np.asarray(v, dtype=float) for c, v in values.items()}
    return Dataset(design, cols, str(path), rejects)


def fmt(v) -> str:
    """Shortest lossless text for a number (17 significant digits)."""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def write_table(path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def sample_columns(design: str, sample) -> dict[str, np.ndarray]:
    return {c: np.asarray(getattr(sample, c)) for c in SCHEMAS[design]}


def write_dataset(path, design: str, sample) -> None:
    cols = sample_columns(design, sample)
    names = list(SCHEMAS[design])
    write_table(path, names, zip(*(cols[c] for c in names)))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    return obj


def config_hash(config: dict) -> str:
    text = json.dumps(_jsonable(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def write_manifest(path, manifest: dict) -> None:
    payload = {"schema_version": MANIFEST_SCHEMA_VERSION, **_jsonable(manifest)}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")
