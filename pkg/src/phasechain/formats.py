"""On-disk formats: shifts.csv, chain.csv, trajectory.json, metrics.json.

All writers are byte-deterministic and go through temp-file-and-rename.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

from .chaincode import ChainRecord, iscc_string
from .correlation import ShiftEstimate
from .errors import FormatError
from .trajectory import Point

SHIFTS_HEADER = ["pair_index", "dx", "dy", "peak_response"]
CHAIN_HEADER = ["pair_index", "mscc", "iscc", "dx"]


def atomic_write(path: str | os.PathLike, data: str | bytes) -> None:
    path = Path(path)
    raw = data.encode("utf-8") if isinstance(data, str) else data
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(raw)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def shifts_csv(shifts: Iterable[ShiftEstimate]) -> str:
    return _csv_text(
        SHIFTS_HEADER,
        ([s.pair_index, s.dx, s.dy, f"{s.peak_response:.9f}"] for s in shifts),
    )


def chain_csv(records: Iterable[ChainRecord]) -> str:
    return _csv_text(CHAIN_HEADER, ([r.pair_index, r.mscc, r.iscc, r.dx] for r in records))


def _read_rows(path: Path, header: list[str]) -> list[list[str]]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror or exc}") from exc
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise FormatError(f"{path}: line 1: empty file")
    if [c.strip() for c in rows[0]] != header:
        raise FormatError(f"{path}: line 1: expected header {','.join(header)}")
    body = rows[1:]
    if not body:
        raise FormatError(f"{path}: line 2: no data rows")
    for n, row in enumerate(body, start=2):
        if len(row) != len(header):
            raise FormatError(f"{path}: line {n}: expected {len(header)} fields, got {len(row)}")
    return body


def _int(path: Path, line: int, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise FormatError(f"{path}: line {line}: not an integer: {value!r}") from None


def read_shifts_csv(path: str | os.PathLike) -> list[ShiftEstimate]:
    path = Path(path)
    out = []
    for n, row in enumerate(_read_rows(path, SHIFTS_HEADER), start=2):
        try:
            peak = float(row[3])
        except ValueError:
            raise FormatError(f"{path}: line {n}: not a number: {row[3]!r}") from None
        out.append(ShiftEstimate(_int(path, n, row[1]), _int(path, n, row[2]), peak, _int(path, n, row[0])))
    return out


def read_chain_csv(path: str | os.PathLike) -> list[ChainRecord]:
    path = Path(path)
    out = []
    for n, row in enumerate(_read_rows(path, CHAIN_HEADER), start=2):
        idx, mscc, iscc, dx = (_int(path, n, v) for v in row)
        if mscc not in (0, 1, 2, 3) or iscc not in (0, 1, 2, 3):
            raise FormatError(f"{path}: line {n}: chain codes must be in 0..3")
        out.append(ChainRecord(idx, mscc, iscc, dx))
    return out


def trajectory_json(points: Sequence[Point], records: Sequence[ChainRecord]) -> str:
    doc = {"points": [[x, y] for x, y in points], "chain": iscc_string(records)}
    return json.dumps(doc, indent=2) + "\n"


def read_trajectory_json(path: str | os.PathLike) -> tuple[list[Point], str]:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    try:
        points = [(float(x), float(y)) for x, y in doc["points"]]
        chain = str(doc["chain"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: line 1: malformed trajectory document ({exc})") from exc
    if not points:
        raise FormatError(f"{path}: line 1: empty points array")
    return points, chain


def json_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
