"""Dynamic 4-connectivity chain code built from per-pair horizontal shifts.

Two codes are emitted for every frame pair:

* ``iscc`` -- absolute heading: 0 left/west, 1 forward/north, 2 right/east,
  3 reverse/south.
* ``mscc`` -- relative movement: 0 left turn, 1 forward, 2 right turn,
  3 no change (inside a turn that was already registered).

A run of consecutive above-threshold shifts counts as one 90 degree turn,
registered on its first pair; the machine re-arms only when the shift falls
back inside the forward band.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EmptySequence, InvalidConfig

LEFT, FORWARD, RIGHT, REVERSE = 0, 1, 2, 3
MSCC_LEFT, MSCC_FORWARD, MSCC_RIGHT, MSCC_NO_CHANGE = 0, 1, 2, 3

DEFAULT_THRESHOLD = 30
TYPICAL_THRESHOLD_BAND = (12, 60)


class MotionClass(enum.Enum):
    FORWARD = "forward"
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class ChainConfig:
    threshold: int = DEFAULT_THRESHOLD
    invert_turn_sign: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.threshold, bool) or int(self.threshold) != self.threshold:
            raise InvalidConfig(f"threshold must be an integer, got {self.threshold!r}")
        if self.threshold < 1:
            raise InvalidConfig(f"threshold must be >= 1, got {self.threshold}")

    def validate_for_width(self, width: int) -> None:
        """Threshold has to fit the range of wraparound-resolved shifts."""
        if not self.threshold < width / 2:
            raise InvalidConfig(
                f"threshold {self.threshold} must be below half the frame width ({width / 2:g})"
            )

    @property
    def in_typical_band(self) -> bool:
        lo, hi = TYPICAL_THRESHOLD_BAND
        return lo <= self.threshold <= hi


@dataclass(frozen=True)
class ChainState:
    iscc: int = FORWARD
    in_turn: bool = False

    def __post_init__(self) -> None:
        if self.iscc not in (0, 1, 2, 3):
            raise ValueError(f"iscc must be in 0..3, got {self.iscc}")


@dataclass(frozen=True)
class ChainRecord:
    pair_index: int
    mscc: int
    iscc: int
    dx: int


def classify_motion(dx: int, config: ChainConfig) -> MotionClass:
    """Forward inside (-threshold, threshold); positive dx beyond it is a left turn.

    When the vehicle yaws left the scene sweeps rightward across the image,
    which gives positive dx. ``invert_turn_sign`` swaps the two turn classes.
    """
    if abs(dx) < config.threshold:
        return MotionClass.FORWARD
    left = dx > 0
    if config.invert_turn_sign:
        left = not left
    return MotionClass.LEFT if left else MotionClass.RIGHT


def rotate_left(iscc: int) -> int:
    """Quarter turn counterclockwise: 1 -> 0 -> 3 -> 2 -> 1."""
    return (iscc + 3) % 4


def rotate_right(iscc: int) -> int:
    """Quarter turn clockwise, the inverse of rotate_left."""
    return (iscc + 1) % 4


def step(
    state: ChainState, dx: int, pair_index: int, config: ChainConfig
) -> tuple[ChainState, ChainRecord]:
    motion = classify_motion(dx, config)
    if state.in_turn:
        if motion is MotionClass.FORWARD:
            return ChainState(state.iscc, False), ChainRecord(pair_index, MSCC_FORWARD, state.iscc, dx)
        # Still turning (a sign flip included): the turn was already counted.
        return state, ChainRecord(pair_index, MSCC_NO_CHANGE, state.iscc, dx)

    if motion is MotionClass.FORWARD:
        return state, ChainRecord(pair_index, MSCC_FORWARD, state.iscc, dx)
    if motion is MotionClass.LEFT:
        iscc = rotate_left(state.iscc)
        return ChainState(iscc, True), ChainRecord(pair_index, MSCC_LEFT, iscc, dx)
    iscc = rotate_right(state.iscc)
    return ChainState(iscc, True), ChainRecord(pair_index, MSCC_RIGHT, iscc, dx)


def fold_dx(
    dxs: Sequence[int], config: ChainConfig | None = None, first_index: int = 0
) -> list[ChainRecord]:
    """Run the state machine over a plain list of x-shifts.

    The first pair is always recorded as forward motion with heading 1, whatever
    its shift; the machine state is left untouched by it.
    """
    config = config or ChainConfig()
    if len(dxs) == 0:
        raise EmptySequence("no shifts to fold")
    state = ChainState()
    records = [ChainRecord(first_index, MSCC_FORWARD, state.iscc, int(dxs[0]))]
    for i, dx in enumerate(dxs[1:], start=first_index + 1):
        state, rec = step(state, int(dx), i, config)
        records.append(rec)
    return records


def fold_chain(shifts: Iterable, config: ChainConfig | None = None) -> list[ChainRecord]:
    """Fold ordered ShiftEstimates (anything with ``dx`` and ``pair_index``) into records."""
    shifts = list(shifts)
    if not shifts:
        raise EmptySequence("no shifts to fold")
    first = shifts[0].pair_index
    for i, s in enumerate(shifts):
        if s.pair_index != first + i:
            raise ValueError(f"shift pair indices are not ordered and gap-free at position {i}")
    return fold_dx([s.dx for s in shifts], config, first_index=first)


def iscc_string(records: Iterable[ChainRecord]) -> str:
    return "".join(str(r.iscc) for r in records)


def mscc_string(records: Iterable[ChainRecord]) -> str:
    return "".join(str(r.mscc) for r in records)
