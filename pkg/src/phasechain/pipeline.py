"""End-to-end run: frames -> shifts -> chain code -> trajectory files."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import __version__
from .chaincode import ChainConfig, ChainRecord, fold_chain
from .correlation import DEFAULT_EPS, CorrelationConfig, ShiftEstimate, estimate_sequence
from .errors import FormatError, InvalidConfig
from .formats import (
    atomic_write,
    chain_csv,
    json_text,
    read_chain_csv,
    read_trajectory_json,
    shifts_csv,
    trajectory_json,
)
from .frames import IngestOptions, load_sequence
from .trajectory import Point, TrajectoryMetrics, chain_to_points, compare, normalize, render_svg

log = logging.getLogger(__name__)

RUN_OUTPUTS = ("shifts.csv", "chain.csv", "trajectory.json", "trajectory.svg", "run_manifest.json")


@dataclass(frozen=True)
class PipelineConfig:
    input: str
    output: str
    threshold: int = 30
    window: str = "none"
    downscale: int = 1
    invert_turn_sign: bool = False
    eps: float = DEFAULT_EPS
    workers: int = 1

    def __post_init__(self) -> None:
        if self.window not in ("none", "hann"):
            raise InvalidConfig(f"window must be none or hann, got {self.window!r}")
        if not isinstance(self.downscale, int) or self.downscale < 1:
            raise InvalidConfig(f"downscale must be an integer >= 1, got {self.downscale!r}")
        if not self.eps > 0:
            raise InvalidConfig(f"eps must be positive, got {self.eps!r}")
        if self.workers < 1:
            raise InvalidConfig(f"workers must be >= 1, got {self.workers!r}")
        self.chain_config()

    def chain_config(self) -> ChainConfig:
        return ChainConfig(self.threshold, self.invert_turn_sign)

    def correlation_config(self) -> CorrelationConfig:
        return CorrelationConfig(self.window, self.eps)  # type: ignore[arg-type]

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> PipelineConfig:
        names = {f.name for f in fields(cls)}
        unknown = set(doc) - names
        if unknown:
            raise InvalidConfig(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**doc)


@dataclass
class RunResult:
    shifts: list[ShiftEstimate]
    records: list[ChainRecord]
    points: list[Point]


def process(config: PipelineConfig) -> RunResult:
    frames = load_sequence(config.input, IngestOptions(config.downscale, config.workers))
    chain_cfg = config.chain_config()
    chain_cfg.validate_for_width(frames[0].width)
    if not chain_cfg.in_typical_band:
        log.warning("threshold %d is outside the usual 12-60 px band", config.threshold)
    shifts = estimate_sequence(frames, config.correlation_config(), config.workers)
    for s in shifts:
        log.debug("pair %d: dx=%d dy=%d peak=%.4f", s.pair_index, s.dx, s.dy, s.peak_response)
    records = fold_chain(shifts, chain_cfg)
    points = normalize(chain_to_points(records))
    return RunResult(shifts, records, points)


def run(config: PipelineConfig) -> RunResult:
    """Process the input and write every run artifact into ``config.output``.

    Nothing is written unless processing succeeds; if a write fails midway
    the files already written by this run are removed.
    """
    result = process(config)
    out = Path(config.output)
    out.mkdir(parents=True, exist_ok=True)
    manifest = {"version": __version__, "config": config.to_dict(), "outputs": list(RUN_OUTPUTS[:-1])}
    payload = {
        "shifts.csv": shifts_csv(result.shifts),
        "chain.csv": chain_csv(result.records),
        "trajectory.json": trajectory_json(result.points, result.records),
        "trajectory.svg": render_svg(result.points),
        "run_manifest.json": json_text(manifest),
    }
    written = []
    try:
        for name in RUN_OUTPUTS:
            atomic_write(out / name, payload[name])
            written.append(out / name)
    except BaseException:
        for p in written:
            if p.exists():
                os.unlink(p)
        raise
    return result


def load_manifest(path: str | os.PathLike) -> PipelineConfig:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    try:
        return PipelineConfig.from_dict(doc["config"])
    except (KeyError, TypeError) as exc:
        raise FormatError(f"{path}: line 1: not a run manifest ({exc})") from exc


def _first_existing(directory: Path, names: tuple[str, ...]) -> Path | None:
    for name in names:
        if (directory / name).is_file():
            return directory / name
    return None


def evaluate(predicted_dir: str | os.PathLike, truth_dir: str | os.PathLike, out_dir: str | os.PathLike) -> TrajectoryMetrics:
    """Compare a run directory against a truth directory and write metrics.json.

    Each side needs ``chain.csv`` or ``truth_chain.csv``; a trajectory JSON
    next to it is used for the endpoint metric when present, otherwise the
    polyline is rebuilt from the chain.
    """
    sides = []
    for d in (Path(predicted_dir), Path(truth_dir)):
        if not d.is_dir():
            raise FormatError(f"{d}: no such directory")
        chain_path = _first_existing(d, ("chain.csv", "truth_chain.csv"))
        if chain_path is None:
            raise FormatError(f"{d}: no chain.csv or truth_chain.csv")
        records = read_chain_csv(chain_path)
        traj_path = _first_existing(d, ("trajectory.json", "truth_trajectory.json"))
        points = read_trajectory_json(traj_path)[0] if traj_path else None
        sides.append((records, points))
    (pred, pred_pts), (truth, truth_pts) = sides
    metrics = compare(pred, truth, pred_pts, truth_pts)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    atomic_write(out / "metrics.json", json_text(metrics.to_dict()))
    return metrics
