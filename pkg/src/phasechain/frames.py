"""Frame ingestion: image sequences to normalized grayscale frames."""

from __future__ import annotations

import glob
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Sequence

import numpy as np
from PIL import Image

from .errors import (
    DownscaleTooAggressive,
    InconsistentDimensions,
    IngestFailure,
    InvalidFrame,
    SequenceTooShort,
)

MIN_DIM = 8
IMAGE_SUFFIXES = (".pgm", ".png", ".ppm", ".pnm")
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])

WindowKind = Literal["none", "hann"]


@dataclass(frozen=True, eq=False)
class Frame:
    """A grayscale frame with luminance in [0, 1].

    ``pixels`` is a read-only float64 array of shape (height, width).
    """

    pixels: np.ndarray
    index: int = 0

    def __post_init__(self) -> None:
        px = np.array(self.pixels, dtype=np.float64)
        if px.ndim != 2:
            raise InvalidFrame(f"expected a 2D array, got shape {px.shape}")
        h, w = px.shape
        if h < MIN_DIM or w < MIN_DIM:
            raise InvalidFrame(f"frame {w}x{h} is smaller than {MIN_DIM}x{MIN_DIM}")
        if not np.all(np.isfinite(px)):
            raise InvalidFrame("non-finite luminance value")
        if px.min() < 0.0 or px.max() > 1.0:
            raise InvalidFrame("luminance outside [0, 1]")
        if self.index < 0:
            raise InvalidFrame(f"negative frame index {self.index}")
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return self.index == other.index and np.array_equal(self.pixels, other.pixels)

    def with_pixels(self, pixels: np.ndarray) -> Frame:
        return Frame(pixels, self.index)


@dataclass(frozen=True)
class IngestOptions:
    downscale: int = 1
    workers: int = 1


def luminance(rgb: np.ndarray) -> np.ndarray:
    """BT.601 luma of an (..., 3) array of 0-255 channel values, scaled to [0, 1]."""
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.shape[-1] != 3:
        raise InvalidFrame(f"expected 3 color channels, got shape {rgb.shape}")
    return np.clip(rgb @ LUMA_WEIGHTS / 255.0, 0.0, 1.0)


def to_grayscale(rgb: np.ndarray, index: int = 0) -> Frame:
    """Convert an (H, W, 3) color image with 0-255 channels into a Frame."""
    return Frame(luminance(rgb), index)


def block_mean(pixels: np.ndarray, factor: int) -> np.ndarray:
    """Mean over non-overlapping factor x factor blocks; trailing rows/cols are dropped."""
    if factor < 1:
        raise DownscaleTooAggressive(f"factor must be >= 1, got {factor}")
    pixels = np.asarray(pixels, dtype=np.float64)
    if factor == 1:
        return pixels.copy()
    h, w = pixels.shape
    oh, ow = h // factor, w // factor
    trimmed = pixels[: oh * factor, : ow * factor]
    return trimmed.reshape(oh, factor, ow, factor).mean(axis=(1, 3))


def downscale(frame: Frame, factor: int) -> Frame:
    if factor < 1:
        raise DownscaleTooAggressive(f"factor must be >= 1, got {factor}")
    if factor == 1:
        return frame
    if frame.width < MIN_DIM * factor or frame.height < MIN_DIM * factor:
        raise DownscaleTooAggressive(
            f"{frame.width}x{frame.height} frame cannot be downscaled by {factor}"
        )
    # Block means of [0, 1] data can overshoot by an ulp.
    return frame.with_pixels(np.clip(block_mean(frame.pixels, factor), 0.0, 1.0))


def hann_weights(height: int, width: int) -> np.ndarray:
    # np.hanning(n)[i] == 0.5 - 0.5*cos(2*pi*i/(n-1))
    return np.outer(np.hanning(height), np.hanning(width))


def apply_window(frame: Frame, kind: WindowKind = "none") -> Frame:
    if kind == "none":
        return frame
    if kind == "hann":
        return frame.with_pixels(frame.pixels * hann_weights(frame.height, frame.width))
    raise ValueError(f"unknown window kind {kind!r}")


def read_image(path: str | os.PathLike, index: int = 0) -> Frame:
    """Read one PGM/PNG file (8 or 16 bit, gray or RGB) as a Frame."""
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode in ("RGB", "RGBA", "P", "LA", "CMYK", "YCbCr"):
                arr = luminance(np.asarray(im.convert("RGB")))
            elif mode in ("L", "1"):
                arr = np.asarray(im.convert("L"), dtype=np.float64) / 255.0
            elif mode.startswith("I"):
                # Pillow rescales 16-bit PGM of any maxval to 0..65535.
                arr = np.asarray(im, dtype=np.float64) / 65535.0
            else:
                raise IngestFailure(f"{path}: unsupported image mode {mode}")
    except IngestFailure:
        raise
    except (OSError, ValueError) as exc:
        raise IngestFailure(f"{path}: {exc}") from exc
    try:
        return Frame(np.clip(arr, 0.0, 1.0), index)
    except InvalidFrame as exc:
        raise IngestFailure(f"{path}: {exc}") from exc


def write_pgm(path: str | os.PathLike, frame: Frame | np.ndarray, bits: int = 16) -> None:
    """Write luminance in [0, 1] as a binary (P5) PGM with 8- or 16-bit samples."""
    px = frame.pixels if isinstance(frame, Frame) else np.asarray(frame)
    if bits == 16:
        data = np.round(np.clip(px, 0.0, 1.0) * 65535.0).astype(np.uint16)
    elif bits == 8:
        data = np.round(np.clip(px, 0.0, 1.0) * 255.0).astype(np.uint8)
    else:
        raise ValueError(f"bits must be 8 or 16, got {bits}")
    Image.fromarray(data).save(path, format="PPM")


def list_images(source: str | os.PathLike) -> list[Path]:
    """Image files named by a directory or a glob pattern, in lexicographic order."""
    src = str(source)
    if os.path.isdir(src):
        paths = [p for p in Path(src).iterdir() if p.is_file()]
    elif glob.has_magic(src):
        paths = [Path(p) for p in glob.glob(src) if os.path.isfile(p)]
    elif os.path.exists(src):
        raise IngestFailure(f"{src}: expected a directory or glob pattern")
    else:
        raise IngestFailure(f"{src}: no such directory")
    paths = [p for p in paths if p.suffix.lower() in IMAGE_SUFFIXES]
    return sorted(paths, key=lambda p: p.name)


def load_sequence(source: str | os.PathLike, options: IngestOptions | None = None) -> list[Frame]:
    """Load an ordered frame sequence from a directory or glob.

    Files are ordered by filename and indexed 0..N-1. Downscaling from
    ``options`` is applied per frame before the dimension check.
    """
    options = options or IngestOptions()
    paths = list_images(source)
    if len(paths) < 2:
        raise SequenceTooShort(f"{source}: found {len(paths)} image(s), need at least 2")

    def load(item: tuple[int, Path]) -> Frame:
        i, p = item
        return downscale(read_image(p, i), options.downscale)

    if options.workers > 1:
        with ThreadPoolExecutor(options.workers) as pool:
            frames = list(pool.map(load, enumerate(paths)))
    else:
        frames = [load(item) for item in enumerate(paths)]

    check_sequence(frames, names=[p.name for p in paths])
    return frames


def check_sequence(frames: Sequence[Frame], names: Sequence[str] | None = None) -> None:
    if len(frames) < 2:
        raise SequenceTooShort(f"got {len(frames)} frame(s), need at least 2")
    shape = frames[0].shape
    for i, f in enumerate(frames):
        if f.shape != shape:
            who = names[i] if names else f"frame {f.index}"
            raise InconsistentDimensions(
                f"{who} is {f.width}x{f.height}, expected {shape[1]}x{shape[0]}"
            )
        if f.index != frames[0].index + i:
            raise InvalidFrame(f"frame indices are not gap-free at position {i}")
