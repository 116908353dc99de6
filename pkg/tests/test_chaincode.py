import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from phasechain.chaincode import (
    ChainConfig,
    ChainRecord,
    ChainState,
    MotionClass,
    classify_motion,
    fold_chain,
    fold_dx,
    rotate_left,
    rotate_right,
    step,
)
from phasechain.correlation import ShiftEstimate
from phasechain.errors import EmptySequence, InvalidConfig

CFG = ChainConfig(threshold=30)
MIRROR = {0: 2, 1: 1, 2: 0, 3: 3}

dx_lists = st.lists(st.integers(-127, 127), min_size=1, max_size=60)


class TestClassify:
    def test_forward_band(self):
        assert classify_motion(5, CFG) is MotionClass.FORWARD
        assert classify_motion(0, ChainConfig(threshold=1)) is MotionClass.FORWARD
        assert classify_motion(29, CFG) is MotionClass.FORWARD
        assert classify_motion(-29, CFG) is MotionClass.FORWARD

    def test_band_edges_are_turns(self):
        assert classify_motion(30, CFG) is MotionClass.LEFT
        assert classify_motion(-30, CFG) is MotionClass.RIGHT

    def test_invert(self):
        assert classify_motion(70, CFG) is MotionClass.LEFT
        assert classify_motion(70, ChainConfig(30, invert_turn_sign=True)) is MotionClass.RIGHT

    @pytest.mark.parametrize("bad", [0, -4, 2.5, True])
    def test_bad_threshold(self, bad):
        with pytest.raises(InvalidConfig):
            ChainConfig(threshold=bad)

    def test_width_validation(self):
        ChainConfig(30).validate_for_width(61)
        with pytest.raises(InvalidConfig):
            ChainConfig(30).validate_for_width(60)


class TestRotations:
    def test_examples(self):
        assert rotate_left(0) == 3
        assert rotate_left(1) == 0
        assert rotate_left(2) == 1
        assert rotate_right(3) == 0
        assert rotate_right(1) == 2

    def test_left_cycle(self):
        seen, h = [], 1
        for _ in range(4):
            h = rotate_left(h)
            seen.append(h)
        assert seen == [0, 3, 2, 1]

    @pytest.mark.parametrize("x", range(4))
    def test_group_laws(self, x):
        l4 = r4 = x
        for _ in range(4):
            l4, r4 = rotate_left(l4), rotate_right(r4)
        assert l4 == r4 == x
        assert rotate_right(rotate_left(x)) == rotate_left(rotate_right(x)) == x


class TestStep:
    def test_left_from_heading_0(self):
        state, rec = step(ChainState(iscc=0), 80, 5, CFG)
        assert (rec.mscc, rec.iscc) == (0, 3)
        assert state == ChainState(3, True)

    def test_forward_keeps_heading(self):
        state, rec = step(ChainState(), 0, 1, CFG)
        assert (rec.mscc, rec.iscc) == (1, 1)
        assert state == ChainState()

    def test_right(self):
        state, rec = step(ChainState(), -80, 1, CFG)
        assert (rec.mscc, rec.iscc, state.in_turn) == (2, 2, True)

    def test_in_turn_sign_flip_is_no_change(self):
        state, rec = step(ChainState(0, True), -80, 3, CFG)
        assert (rec.mscc, rec.iscc) == (3, 0) and state.in_turn

    def test_in_turn_forward_rearms(self):
        state, rec = step(ChainState(0, True), 3, 3, CFG)
        assert (rec.mscc, rec.iscc) == (1, 0) and not state.in_turn

    def test_trace(self):
        recs = fold_dx([0, 80, 80, 80, 0], CFG)
        assert [r.mscc for r in recs] == [1, 0, 3, 3, 1]
        assert recs[-1].iscc == 0


class TestFold:
    def test_first_record_forced(self):
        assert fold_dx([200], CFG) == [ChainRecord(0, 1, 1, 200)]

    def test_all_forward(self):
        recs = fold_dx([3, -7, 0, 12, -29] * 4, CFG)
        assert all((r.mscc, r.iscc) == (1, 1) for r in recs)
        assert len(recs) == 20

    def test_four_lefts_full_circle(self):
        recs = fold_dx([0] + [80, 0] * 4, CFG)
        assert recs[-1].iscc == 1
        assert [r.iscc for r in recs if r.mscc == 0] == [0, 3, 2, 1]

    def test_empty(self):
        with pytest.raises(EmptySequence):
            fold_chain([], CFG)

    def test_from_shift_estimates(self):
        shifts = [ShiftEstimate(dx, 0, 1.0, i + 7) for i, dx in enumerate([0, 80, 0])]
        recs = fold_chain(shifts, CFG)
        assert [r.pair_index for r in recs] == [7, 8, 9]
        assert [r.mscc for r in recs] == [1, 0, 1]

    def test_gap_rejected(self):
        shifts = [ShiftEstimate(0, 0, 1.0, 0), ShiftEstimate(0, 0, 1.0, 2)]
        with pytest.raises(ValueError):
            fold_chain(shifts, CFG)


class TestFoldProperties:
    @given(dx_lists)
    def test_heading_changes_only_on_turns(self, dxs):
        recs = fold_dx(dxs, CFG)
        prev = 1
        for r in recs:
            assert r.mscc in (0, 1, 2, 3) and r.iscc in (0, 1, 2, 3)
            assert (r.iscc != prev) == (r.mscc in (0, 2))
            prev = r.iscc

    @given(dx_lists)
    def test_one_turn_per_excursion(self, dxs):
        recs = fold_dx(dxs, CFG)
        turning = [abs(d) >= CFG.threshold for d in dxs]
        # Excursions after the forced first pair, counted as rising edges.
        runs = sum(
            1 for i in range(1, len(dxs)) if turning[i] and (i == 1 or not turning[i - 1])
        )
        assert sum(r.mscc in (0, 2) for r in recs) == runs

    @given(dx_lists)
    def test_no_change_only_inside_turn(self, dxs):
        state = ChainState()
        recs = fold_dx(dxs, CFG)
        for i, r in enumerate(recs[1:], start=1):
            if r.mscc == 3:
                assert state.in_turn
            state, _ = step(state, dxs[i], i, CFG)

    @given(dx_lists)
    def test_invert_is_mirror(self, dxs):
        a = fold_dx(dxs, ChainConfig(30, False))
        b = fold_dx(dxs, ChainConfig(30, True))
        for ra, rb in zip(a, b):
            assert rb.mscc == MIRROR[ra.mscc]
            assert rb.iscc == MIRROR[ra.iscc]

    @given(
        st.lists(
            st.one_of(st.integers(-11, 11), st.integers(61, 200), st.integers(-200, -61)),
            min_size=1,
            max_size=40,
        )
    )
    def test_threshold_plateau(self, dxs):
        ref = fold_dx(dxs, ChainConfig(12))
        for t in range(13, 61):
            assert fold_dx(dxs, ChainConfig(t)) == ref

    def test_exhaustive_short_sequences_match_truth_walk(self):
        from phasechain.synthetic import truth_chain

        label_of = {0: "F", 80: "L", -80: "R"}
        for seq in itertools.product([0, 80, -80], repeat=6):
            expected = truth_chain([label_of[d] for d in seq], list(seq))
            assert fold_dx(list(seq), CFG) == expected
