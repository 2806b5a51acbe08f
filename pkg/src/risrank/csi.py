"""Plain-text CSI capture format.

One record per line::

    <subcarrier>,<z_11>,<z_12>,...,<z_RT>,<timestamp>

with ``N_R * N_T`` complex literals in row-major order written as
``re+imj`` (``i`` is accepted in place of ``j``). Blank lines and lines
starting with ``#`` are ignored. The timestamp is opaque and may not
contain commas.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = ["CsiRecord", "CsiParseError", "format_complex", "ingest_csi", "write_csi"]


class CsiParseError(ValueError):
    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


@dataclass(frozen=True, eq=False)
class CsiRecord:
    subcarrier: int
    matrix: np.ndarray
    timestamp: str = ""


def format_complex(z: complex) -> str:
    """Shortest round-tripping literal, e.g. ``1.5-0.25j``."""
    re, im = float(z.real), float(z.imag)
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"{re!r}{sign}{abs(im)!r}j"


def _parse_complex(text, line_number):
    t = text.strip().replace(" ", "")
    if t.endswith("i"):
        t = t[:-1] + "j"
    try:
        z = complex(t)
    except ValueError:
        raise CsiParseError(f"bad complex literal {text!r}", line_number) from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise CsiParseError(f"non-finite entry {text!r}", line_number)
    return z


def ingest_csi(path, n_rx: int = 3, n_tx: int = 3) -> list[CsiRecord]:
    """Read every record of a capture file, in file order."""
    want = n_rx * n_tx
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split(",")
            if len(fields) < 3:
                raise CsiParseError("expected subcarrier, entries and timestamp", lineno)
            try:
                sub = int(fields[0])
            except ValueError:
                raise CsiParseError(f"bad subcarrier index {fields[0]!r}", lineno) from None
            entries = fields[1:-1]
            if len(entries) != want:
                raise CsiParseError(
                    f"expected {want} entries for a {n_rx}x{n_tx} channel, got {len(entries)}",
                    lineno,
                )
            m = np.array([_parse_complex(e, lineno) for e in entries]).reshape(n_rx, n_tx)
            records.append(CsiRecord(sub, m, fields[-1].strip()))
    return records


def write_csi(path, records) -> None:
    lines = []
    for rec in records:
        entries = ",".join(format_complex(z) for z in np.asarray(rec.matrix).ravel())
        lines.append(f"{rec.subcarrier},{entries},{rec.timestamp}\n")
    Path(path).write_text("".join(lines), encoding="utf-8")
