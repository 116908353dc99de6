"""Chain code to 2D polyline, normalization, comparison and SVG rendering."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

from .chaincode import MSCC_FORWARD, ChainRecord
from .errors import ComparisonUndefined

Point = tuple[float, float]

# Unit step per heading, y pointing "forward".
HEADING_STEPS: dict[int, tuple[int, int]] = {
    0: (-1, 0),
    1: (0, 1),
    2: (1, 0),
    3: (0, -1),
}


@dataclass(frozen=True)
class TrajectoryMetrics:
    chain_accuracy: float
    endpoint_error: float
    heading_edit_distance: int
    predicted_length: int
    truth_length: int
    length_mismatch: bool

    def to_dict(self) -> dict:
        return asdict(self)


def chain_to_points(records: Sequence[ChainRecord]) -> list[Point]:
    """Integer grid polyline starting at the origin.

    Forward records (mscc 1) advance one unit along the current heading;
    turn and no-change records append nothing.
    """
    x, y = 0, 0
    points: list[Point] = [(0.0, 0.0)]
    for rec in records:
        if rec.mscc != MSCC_FORWARD:
            continue
        sx, sy = HEADING_STEPS[rec.iscc]
        x, y = x + sx, y + sy
        points.append((float(x), float(y)))
    return points


def normalize(points: Sequence[Point]) -> list[Point]:
    """Translate to the origin and scale uniformly into the unit square.

    Both axes are divided by ``max(extent_x, extent_y, 1)`` so the aspect
    ratio survives; a single point maps to (0, 0).
    """
    if not points:
        raise ValueError("cannot normalize an empty polyline")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x0, y0 = min(xs), min(ys)
    scale = max(max(xs) - x0, max(ys) - y0, 1.0)
    return [((x - x0) / scale, (y - y0) / scale) for x, y in points]


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance with unit insert/delete/substitute costs."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def compare(
    predicted: Sequence[ChainRecord],
    truth: Sequence[ChainRecord],
    predicted_points: Sequence[Point] | None = None,
    truth_points: Sequence[Point] | None = None,
) -> TrajectoryMetrics:
    """Score a predicted chain against ground truth.

    ``chain_accuracy`` counts positions where (mscc, iscc) agree, over the
    overlapping prefix when the lengths differ (``length_mismatch`` is then
    set). Polylines default to the ones implied by the chains; either way
    they are normalized before the endpoint distance is taken.
    """
    if not predicted and not truth:
        raise ComparisonUndefined("both chains are empty")
    overlap = min(len(predicted), len(truth))
    if overlap:
        hits = sum(
            (p.mscc, p.iscc) == (t.mscc, t.iscc) for p, t in zip(predicted, truth)
        )
        accuracy = hits / overlap
    else:
        accuracy = 0.0

    pp = normalize(predicted_points if predicted_points is not None else chain_to_points(predicted))
    tp = normalize(truth_points if truth_points is not None else chain_to_points(truth))
    endpoint = math.dist(pp[-1], tp[-1])

    heads_p = "".join(str(r.iscc) for r in predicted)
    heads_t = "".join(str(r.iscc) for r in truth)
    return TrajectoryMetrics(
        chain_accuracy=accuracy,
        endpoint_error=endpoint,
        heading_edit_distance=edit_distance(heads_p, heads_t),
        predicted_length=len(predicted),
        truth_length=len(truth),
        length_mismatch=len(predicted) != len(truth),
    )


def simplify(points: Sequence[Point]) -> list[Point]:
    """Drop repeated points and interior points of collinear runs."""
    out: list[Point] = []
    for p in points:
        if out and p == out[-1]:
            continue
        if len(out) >= 2:
            (ax, ay), (bx, by) = out[-2], out[-1]
            cross = (bx - ax) * (p[1] - by) - (by - ay) * (p[0] - bx)
            same_way = (bx - ax) * (p[0] - bx) + (by - ay) * (p[1] - by) > 0
            if cross == 0 and same_way:
                out[-1] = p
                continue
        out.append(p)
    return out


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def render_svg(
    points: Sequence[Point],
    stroke_width: float = 2.0,
    canvas: int = 512,
    margin: int = 16,
) -> str:
    """SVG 1.1 document drawing a normalized polyline, forward pointing up.

    The path is simplified to its corners and closed with ``Z`` when it ends
    where it started. The start point gets a circle marker.
    """
    span = canvas - 2 * margin

    def xy(p: Point) -> tuple[str, str]:
        return _fmt(margin + p[0] * span), _fmt(margin + (1.0 - p[1]) * span)

    pts = simplify(points)
    closed = len(pts) > 2 and pts[0] == pts[-1]
    if closed:
        pts = pts[:-1]
    cmds = []
    for i, p in enumerate(pts):
        x, y = xy(p)
        cmds.append(f"{'M' if i == 0 else 'L'}{x},{y}")
    if closed:
        cmds.append("Z")
    sx, sy = xy(points[0])
    marker_r = _fmt(max(2.0 * stroke_width, 3.0))
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{canvas}" height="{canvas}" viewBox="0 0 {canvas} {canvas}">\n'
        f'  <rect x="0" y="0" width="{canvas}" height="{canvas}" fill="white"/>\n'
        f'  <path d="{" ".join(cmds)}" fill="none" stroke="black" '
        f'stroke-width="{_fmt(stroke_width)}" stroke-linejoin="round" stroke-linecap="round"/>\n'
        f'  <circle class="start" cx="{sx}" cy="{sy}" r="{marker_r}" fill="red"/>\n'
        "</svg>\n"
    )
