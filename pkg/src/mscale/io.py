"""CSV reading and writing for signals, profiles and summaries.

Files are comma-separated with ``.`` decimals. Lines starting with ``#`` carry
the run manifest as ``# key: value`` pairs, followed by a single header row.
Floats are written with 17 significant digits so they parse back exactly.
"""

from __future__ import annotations

import csv
import glob
import json
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

__all__ = ["RunManifest", "fmt", "read_signal_csv", "write_csv", "write_signal_csv"]


def fmt(value) -> str:
    """Locale-independent cell text; NaN/None become an empty cell."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isnan(v):
        return ""
    return format(v + 0.0, ".17g")


@dataclass
class RunManifest:
    command: str
    version: str
    config: dict = field(default_factory=dict)
    seeds: list[int] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    def header_lines(self) -> list[str]:
        # wall-clock timings live only in the sidecar so the CSV stays reproducible
        lines = [
            f"mscale: {self.version}",
            f"command: {self.command}",
            f"config: {json.dumps(self.config, sort_keys=True)}",
        ]
        if self.seeds:
            lines.append("seeds: " + " ".join(str(s) for s in self.seeds))
        return lines

    def write_sidecar(self, csv_path: Path) -> Path:
        path = Path(str(csv_path) + ".manifest.json")
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")
        return path


def write_csv(
    path, columns: Sequence[str], rows: Iterable[Sequence], manifest: RunManifest | None = None
) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        raise InputError(f"output directory {path.parent} does not exist")
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            if manifest is not None:
                for line in manifest.header_lines():
                    fh.write(f"# {line}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns)
            for row in rows:
                w.writerow([fmt(v) for v in row])
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc
    if manifest is not None:
        manifest.write_sidecar(path)


def write_signal_csv(path, samples, manifest: RunManifest | None = None) -> None:
    write_csv(path, ["sample"], ([v] for v in samples), manifest)


def read_csv_table(path) -> tuple[list[str], list[list[str]], dict[str, str]]:
    """Return (header, data rows, manifest key/values) of a manifest CSV."""
    path = Path(path)
    if not path.is_file():
        raise InputError(f"{path}: no such file")
    meta: dict[str, str] = {}
    body = []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            for line in fh:
                if line.startswith("#"):
                    key, sep, value = line[1:].strip().partition(":")
                    if sep:
                        meta[key.strip()] = value.strip()
                elif line.strip():
                    body.append(line)
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    rows = list(csv.reader(body))
    if not rows:
        raise InputError(f"{path}: no data")
    return rows[0], rows[1:], meta


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_signal_csv(path, column: str | None = None) -> tuple[np.ndarray, dict[str, str]]:
    """Load one signal column from a CSV file.

    The header row is optional. Without ``column`` the ``sample`` column is used
    when present, otherwise the first one.
    """
    path = Path(path)
    header, rows, meta = read_csv_table(path)
    if all(_is_number(c) for c in header):
        rows = [header] + rows
        header = []
    names = [h.strip() for h in header]
    if column is not None:
        if column not in names:
            raise InputError(f"{path}: no column named {column!r}")
        idx = names.index(column)
    else:
        idx = names.index("sample") if "sample" in names else 0
    try:
        x = np.array([float(r[idx]) for r in rows], dtype=np.float64)
    except (ValueError, IndexError) as exc:
        raise InputError(f"{path}: malformed data row ({exc})") from exc
    if x.size == 0:
        raise InputError(f"{path}: no samples")
    if not np.all(np.isfinite(x)):
        raise InputError(f"{path}: non-finite sample")
    return x, meta


def expand_glob(pattern: str) -> list[Path]:
    return [Path(p) for p in sorted(glob.glob(os.path.expanduser(pattern)))]
