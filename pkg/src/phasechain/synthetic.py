"""Synthetic frame sequences with known shifts and chain codes.

Frames are circular shifts of a periodic random texture, which makes phase
correlation exact in the absence of noise. Scripted drives (``F``, ``L(k)``,
``R(k)``) map to per-pair shifts, and the expected chain code is derived
from the script by a run-based walk that does not share code with
:mod:`phasechain.chaincode`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import ndimage

from .chaincode import ChainRecord
from .correlation import ShiftEstimate
from .errors import EmptySequence, InvalidConfig, InvalidShift, ScriptParseError
from .formats import atomic_write, chain_csv, shifts_csv, trajectory_json
from .frames import Frame, write_pgm
from .trajectory import chain_to_points, normalize

TOKEN_RE = re.compile(r"^([FLR])(?:\((\d+)\))?$")


@dataclass(frozen=True)
class DriveScript:
    moves: tuple[tuple[str, int], ...]
    forward_dx_bound: int = 8
    turn_dx: int = 80
    noise_sigma: float = 0.0
    seed: int = 0
    dy_bound: int = 2

    def __post_init__(self) -> None:
        if not self.turn_dx > self.forward_dx_bound:
            raise InvalidConfig(
                f"turn_dx {self.turn_dx} must exceed forward_dx_bound {self.forward_dx_bound}"
            )
        if not 0.0 <= self.noise_sigma <= 0.5:
            raise InvalidConfig(f"noise_sigma must be in [0, 0.5], got {self.noise_sigma}")
        for sym, k in self.moves:
            if sym not in "FLR" or k < 1 or (sym == "F" and k != 1):
                raise InvalidConfig(f"bad move {sym}({k})")

    @property
    def n_pairs(self) -> int:
        return sum(k for _, k in self.moves)

    def text(self) -> str:
        return " ".join(s if s == "F" else f"{s}({k})" for s, k in self.moves)


def parse_script(text: str) -> tuple[tuple[str, int], ...]:
    """Parse ``"F L(3) F R"`` into ``(("F", 1), ("L", 3), ("F", 1), ("R", 1))``."""
    moves = []
    for tok in text.split():
        m = TOKEN_RE.match(tok)
        if m is None:
            raise ScriptParseError(f"malformed token {tok!r}")
        sym, k = m.group(1), m.group(2)
        if sym == "F" and k is not None:
            raise ScriptParseError(f"malformed token {tok!r}: F takes no count")
        k = 1 if k is None else int(k)
        if k < 1:
            raise ScriptParseError(f"malformed token {tok!r}: count must be >= 1")
        moves.append((sym, k))
    return tuple(moves)


def textured_base(
    width: int, height: int, seed: int = 0, smoothing: float = 1.5, grain: float = 0.05
) -> Frame:
    """Periodic smoothed-noise texture scaled to [0, 1].

    A weak white ``grain`` keeps every Fourier coefficient well away from
    zero; Gaussian smoothing alone leaves high frequencies near 1e-6.
    """
    if width < 32 or height < 32:
        raise InvalidConfig(f"texture must be at least 32x32, got {width}x{height}")
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal((height, width))
    tex = ndimage.gaussian_filter(noise, smoothing, mode="wrap")
    tex += grain * rng.standard_normal((height, width))
    lo, hi = tex.min(), tex.max()
    return Frame((tex - lo) / (hi - lo), 0)


def shifted_sequence(
    base: Frame,
    shifts: Sequence[tuple[int, int]],
    noise_sigma: float = 0.0,
    seed: int = 0,
) -> list[Frame]:
    """Frame i+1 is frame i circularly shifted by ``shifts[i] = (dx, dy)``.

    Shifts accumulate on the clean texture; noise is drawn independently for
    every frame and the result clipped to [0, 1].
    """
    h, w = base.shape
    for dx, dy in shifts:
        if not (abs(dx) < w / 2 and abs(dy) < h / 2):
            raise InvalidShift(f"shift ({dx}, {dy}) out of range for {w}x{h} frames")
    rng = np.random.default_rng(seed)
    offsets = [(0, 0)]
    for dx, dy in shifts:
        ox, oy = offsets[-1]
        offsets.append(((ox + dx) % w, (oy + dy) % h))
    frames = []
    for i, (ox, oy) in enumerate(offsets):
        px = np.roll(base.pixels, (oy, ox), axis=(0, 1))
        if noise_sigma > 0:
            px = np.clip(px + rng.normal(0.0, noise_sigma, px.shape), 0.0, 1.0)
        frames.append(Frame(px, i))
    return frames


# Heading after a quarter turn, written out rather than computed.
_LEFT_OF = {1: 0, 0: 3, 3: 2, 2: 1}
_RIGHT_OF = {1: 2, 2: 3, 3: 0, 0: 1}


def truth_chain(labels: Sequence[str], dxs: Sequence[int] | None = None) -> list[ChainRecord]:
    """Expected chain records for per-pair motion labels ("F", "L" or "R").

    The first pair is recorded as forward. After it, every maximal run of
    turn pairs is one turn whose direction is set by the run's first pair.
    """
    if not labels:
        raise EmptySequence("no frame pairs in script")
    dxs = list(dxs) if dxs is not None else [0] * len(labels)
    heading = 1
    out = [ChainRecord(0, 1, 1, dxs[0])]
    i, n = 1, len(labels)
    while i < n:
        if labels[i] == "F":
            out.append(ChainRecord(i, 1, heading, dxs[i]))
            i += 1
            continue
        j = i
        while j < n and labels[j] != "F":
            j += 1
        if labels[i] == "L":
            heading, code = _LEFT_OF[heading], 0
        else:
            heading, code = _RIGHT_OF[heading], 2
        out.append(ChainRecord(i, code, heading, dxs[i]))
        out.extend(ChainRecord(m, 3, heading, dxs[m]) for m in range(i + 1, j))
        i = j
    return out


@dataclass
class SyntheticDrive:
    frames: list[Frame]
    shifts: list[ShiftEstimate]
    records: list[ChainRecord] = field(default_factory=list)


def script_to_frames(script: DriveScript, base: Frame) -> SyntheticDrive:
    """Render a drive script into frames plus ground-truth shifts and chain."""
    if not script.moves:
        raise EmptySequence("empty drive script")
    if not script.turn_dx < base.width / 2:
        raise InvalidConfig(f"turn_dx {script.turn_dx} must be below half the width {base.width}")
    rng = np.random.default_rng(script.seed)
    labels: list[str] = []
    shifts: list[tuple[int, int]] = []
    b, dyb = script.forward_dx_bound, script.dy_bound
    for sym, k in script.moves:
        for _ in range(k):
            if sym == "F":
                dx = int(rng.integers(-b, b + 1))
            else:
                dx = script.turn_dx if sym == "L" else -script.turn_dx
            dy = int(rng.integers(-dyb, dyb + 1))
            labels.append(sym)
            shifts.append((dx, dy))
    frames = shifted_sequence(base, shifts, script.noise_sigma, seed=script.seed + 1)
    truth = [ShiftEstimate(dx, dy, 1.0, i) for i, (dx, dy) in enumerate(shifts)]
    records = truth_chain(labels, [dx for dx, _ in shifts])
    return SyntheticDrive(frames, truth, records)


def write_drive(out_dir: str | Path, drive: SyntheticDrive) -> Path:
    """Write frames/ (16-bit PGM) and the truth_* files under ``out_dir``."""
    out = Path(out_dir)
    frames_dir = out / "frames"
    frames_dir.mkdir(parents=True, exist_ok=True)
    for f in drive.frames:
        write_pgm(frames_dir / f"frame_{f.index:05d}.pgm", f)
    atomic_write(out / "truth_shifts.csv", shifts_csv(drive.shifts))
    atomic_write(out / "truth_chain.csv", chain_csv(drive.records))
    points = normalize(chain_to_points(drive.records))
    atomic_write(out / "truth_trajectory.json", trajectory_json(points, drive.records))
    return frames_dir
