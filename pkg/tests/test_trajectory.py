import math
import re
import xml.dom.minidom
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import levenshtein, walk
from phasechain.chaincode import ChainConfig, ChainRecord, fold_dx
from phasechain.errors import ComparisonUndefined
from phasechain.trajectory import (
    chain_to_points,
    compare,
    edit_distance,
    normalize,
    render_svg,
)

GOLDEN = Path(__file__).parent / "golden"
RECTANGLE_DX = [0, 0, 0] + [80, 0, 0, 0] * 3 + [80]


def recs(msccs, isccs):
    return [ChainRecord(i, m, h, 0) for i, (m, h) in enumerate(zip(msccs, isccs))]


def forward(n):
    return recs([1] * n, [1] * n)


random_chains = st.lists(st.integers(-120, 120), min_size=1, max_size=80).map(
    lambda dxs: fold_dx(dxs, ChainConfig(30))
)


class TestChainToPoints:
    def test_straight(self):
        pts = chain_to_points(forward(6))
        assert pts[0] == (0, 0) and pts[-1] == (0, 6) and len(pts) == 7

    def test_f_l_f(self):
        assert chain_to_points(recs([1, 0, 1], [1, 0, 0])) == [(0, 0), (0, 1), (-1, 1)]

    def test_empty(self):
        assert chain_to_points([]) == [(0.0, 0.0)]

    def test_rectangle_closes(self):
        pts = chain_to_points(fold_dx(RECTANGLE_DX, ChainConfig()))
        assert pts[-1] == pts[0]
        assert {p for p in pts} == {
            (0, 0), (0, 1), (0, 2), (0, 3), (-1, 3), (-2, 3), (-3, 3),
            (-3, 2), (-3, 1), (-3, 0), (-2, 0), (-1, 0),
        }  # fmt: skip

    @given(random_chains)
    def test_matches_compass_walk(self, chain):
        pts = chain_to_points(chain)
        assert pts == walk([(r.mscc, r.iscc) for r in chain])
        assert len(pts) == 1 + sum(r.mscc == 1 for r in chain)
        for (ax, ay), (bx, by) in zip(pts, pts[1:]):
            assert abs(ax - bx) + abs(ay - by) == 1


class TestNormalize:
    def test_line(self):
        assert normalize([(0, 0), (0, 10)]) == [(0, 0), (0, 1)]

    def test_single_point(self):
        assert normalize([(3.0, -2.0)]) == [(0, 0)]

    def test_l_shape(self):
        assert normalize([(0, 0), (0, 4), (-2, 4)]) == [(0.5, 0), (0.5, 1), (0, 1)]

    @given(random_chains)
    def test_invariants(self, chain):
        raw = chain_to_points(chain)
        pts = normalize(raw)
        assert all(0 <= x <= 1 and 0 <= y <= 1 for x, y in pts)
        assert normalize(pts) == pts
        if len(raw) > 1:
            scale = max(max(p[0] for p in raw) - min(p[0] for p in raw),
                        max(p[1] for p in raw) - min(p[1] for p in raw), 1.0)  # fmt: skip
            for (a, b), (c, d) in zip(zip(raw, raw[1:]), zip(pts, pts[1:])):
                assert math.dist(c, d) * scale == pytest.approx(math.dist(a, b), abs=1e-12)


class TestCompare:
    def test_identical(self):
        chain = fold_dx(RECTANGLE_DX, ChainConfig())
        m = compare(chain, chain)
        assert (m.chain_accuracy, m.endpoint_error, m.heading_edit_distance) == (1.0, 0.0, 0)
        assert not m.length_mismatch

    @given(random_chains)
    def test_self_is_perfect(self, chain):
        m = compare(chain, chain)
        assert (m.chain_accuracy, m.endpoint_error, m.heading_edit_distance) == (1.0, 0.0, 0)

    def test_one_wrong_mscc(self):
        truth = forward(10)
        pred = list(truth)
        pred[4] = ChainRecord(4, 3, 1, 0)
        assert compare(pred, truth).chain_accuracy == pytest.approx(0.9)

    def test_heading_edit_distance(self):
        pred = recs([1, 1, 1, 1], [1, 1, 0, 0])
        truth = recs([1, 1, 1, 1], [1, 0, 0, 0])
        assert compare(pred, truth).heading_edit_distance == 1

    def test_overlap(self):
        truth = forward(10)
        m = compare(truth[:9], truth)
        assert m.chain_accuracy == 1.0 and m.length_mismatch
        assert (m.predicted_length, m.truth_length) == (9, 10)

    def test_endpoint_range(self):
        pred = forward(5)
        truth = recs([1, 1, 0, 1, 1], [1, 1, 2, 2, 2])
        m = compare(pred, truth)
        assert 0 <= m.endpoint_error <= math.sqrt(2)
        # pred ends at (0, 1); truth (0,0)->(0,2)->(2,2) normalizes to end at (1, 1).
        assert m.endpoint_error == pytest.approx(1.0)

    def test_both_empty(self):
        with pytest.raises(ComparisonUndefined):
            compare([], [])

    @given(st.text("0123", max_size=8), st.text("0123", max_size=8))
    def test_edit_distance_oracle(self, a, b):
        assert edit_distance(a, b) == levenshtein(a, b)


class TestRenderSvg:
    def test_single_point(self):
        svg = render_svg([(0.0, 0.0)])
        xml.dom.minidom.parseString(svg)
        d = re.search(r'<path d="([^"]*)"', svg).group(1)
        assert d.startswith("M") and "L" not in d
        assert 'class="start"' in svg

    def test_straight_line_single_vertical_segment(self):
        svg = render_svg(normalize(chain_to_points(forward(7))))
        d = re.search(r'<path d="([^"]*)"', svg).group(1)
        (x0, y0), (x1, y1) = [tuple(map(float, c[1:].split(","))) for c in d.split()]
        assert x0 == x1 and y1 < y0  # forward renders upward

    def test_rectangle_golden(self):
        pts = normalize(chain_to_points(fold_dx(RECTANGLE_DX, ChainConfig())))
        svg = render_svg(pts)
        assert svg.encode() == (GOLDEN / "rectangle.svg").read_bytes()
        d = re.search(r'<path d="([^"]*)"', svg).group(1)
        assert d.count("L") == 3 and d.endswith("Z")
        assert svg.count("<path") == 1

    def test_deterministic(self):
        pts = normalize(chain_to_points(fold_dx([0, 80, 0, 0, -80, 0, 0], ChainConfig())))
        assert render_svg(pts) == render_svg(list(pts))
