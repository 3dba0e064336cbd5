"""CSV tables and flat ``key=value`` records.

Floats are written with 17 significant digits so tables round-trip exactly.
"""

from __future__ import annotations

import csv
import hashlib
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from a2decouple.errors import ConfigurationError


def format_value(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    if hasattr(value, "dtype"):  # numpy scalars
        return format_value(value.item())
    if isinstance(value, (list, tuple)):
        return ",".join(format_value(v) for v in value)
    return str(value)


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


def read_csv(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def write_record(path: str | Path, record: Mapping[str, object]) -> Path:
    path = Path(path)
    lines = [f"{key}={format_value(value)}" for key, value in record.items()]
    path.write_text("\n".join(lines) + "\n")
    return path


def parse_record(text: str) -> dict[str, str]:
    """Parse flat ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigurationError(f"line {lineno}: empty key")
        out[key] = value.strip()
    return out


def read_record(path: str | Path) -> dict[str, str]:
    return parse_record(Path(path).read_text())


def sha256sum(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
