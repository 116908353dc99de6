"""Integer translation between two frames by FFT phase correlation.

Shift convention: ``estimate_shift(a, b)`` returns the displacement of image
content from ``a`` to ``b``. If ``b == np.roll(a, (dy, dx), axis=(0, 1))``
the result is ``(dx, dy)``. Positive ``dx`` means content moved toward
larger column indices (rightward).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DegenerateSurface, NumericInstability, SpectrumMismatch
from .frames import Frame, WindowKind, check_sequence, hann_weights

DEFAULT_EPS = 1e-12
IMAG_TOLERANCE = 1e-6

ArrayOrFrame = Union[Frame, np.ndarray]


@dataclass(frozen=True)
class ShiftEstimate:
    dx: int
    dy: int
    peak_response: float
    pair_index: int = 0


@dataclass(frozen=True)
class CorrelationConfig:
    window: WindowKind = "none"
    eps: float = DEFAULT_EPS

    def __post_init__(self) -> None:
        if self.window not in ("none", "hann"):
            raise ValueError(f"unknown window kind {self.window!r}")
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")


def _pixels(x: ArrayOrFrame) -> np.ndarray:
    return x.pixels if isinstance(x, Frame) else np.asarray(x, dtype=np.float64)


def forward_transform(frame: ArrayOrFrame) -> np.ndarray:
    """Unscaled 2D DFT at the frame's exact dimensions (no padding)."""
    return np.fft.fft2(_pixels(frame))


def cross_power_spectrum(
    Ga: np.ndarray, Gb: np.ndarray, eps: float = DEFAULT_EPS
) -> np.ndarray:
    """Element-wise ``Ga * conj(Gb) / max(|Ga * conj(Gb)|, eps)``.

    Cells whose cross-power magnitude falls below ``eps`` are scaled by
    ``1/eps`` instead of normalized, so exact zeros stay zero.
    """
    if Ga.shape != Gb.shape:
        raise SpectrumMismatch(f"spectra have shapes {Ga.shape} and {Gb.shape}")
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    cross = Ga * np.conj(Gb)
    return cross / np.maximum(np.abs(cross), eps)


def correlation_surface(R: np.ndarray) -> np.ndarray:
    """Real part of the 1/(W*H)-scaled inverse DFT of a cross-power spectrum."""
    r = np.fft.ifft2(R)
    residue = float(np.max(np.abs(r.imag))) if r.size else 0.0
    if residue >= IMAG_TOLERANCE:
        raise NumericInstability(f"imaginary residue {residue:.3g} in correlation surface")
    surface = r.real
    if not np.all(np.isfinite(surface)):
        raise NumericInstability("non-finite value in correlation surface")
    return surface


def wrap_shift(p: int, n: int) -> int:
    """Map a cell index on a circular axis of length n to a signed offset in [-n/2, n/2)."""
    return p if p < n / 2 else p - n


def peak_shift(surface: np.ndarray, pair_index: int = 0) -> ShiftEstimate:
    """Signed shift at the surface maximum.

    Ties go to the smallest row-major index (``np.argmax`` semantics).
    """
    if not np.all(np.isfinite(surface)):
        raise NumericInstability("non-finite value in correlation surface")
    flat = int(np.argmax(surface))
    peak = float(surface.flat[flat])
    if peak == float(surface.min()):
        raise DegenerateSurface(
            f"constant correlation surface (value {peak:.6g}); frames carry no usable texture",
            peak_response=peak,
        )
    py, px = divmod(flat, surface.shape[1])
    h, w = surface.shape
    return ShiftEstimate(wrap_shift(px, w), wrap_shift(py, h), peak, pair_index)


def estimate_shift(
    a: ArrayOrFrame,
    b: ArrayOrFrame,
    config: CorrelationConfig | None = None,
    pair_index: int | None = None,
) -> ShiftEstimate:
    config = config or CorrelationConfig()
    pa, pb = _pixels(a), _pixels(b)
    if pa.shape != pb.shape:
        raise SpectrumMismatch(f"frames have shapes {pa.shape} and {pb.shape}")
    if config.window == "hann":
        wts = hann_weights(*pa.shape)
        pa, pb = pa * wts, pb * wts
    if pair_index is None:
        pair_index = a.index if isinstance(a, Frame) else 0
    Ga = forward_transform(pa)
    Gb = forward_transform(pb)
    # Later frame first: the peak then sits at the content displacement a -> b.
    R = cross_power_spectrum(Gb, Ga, config.eps)
    return peak_shift(correlation_surface(R), pair_index)


def estimate_sequence(
    frames: Sequence[Frame],
    config: CorrelationConfig | None = None,
    workers: int = 1,
) -> list[ShiftEstimate]:
    """Shift estimates for every consecutive pair, ordered by pair index."""
    check_sequence(frames)
    config = config or CorrelationConfig()
    pairs = list(zip(frames[:-1], frames[1:]))

    def one(pair: tuple[Frame, Frame]) -> ShiftEstimate:
        return estimate_shift(pair[0], pair[1], config)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            out = list(pool.map(one, pairs))
    else:
        out = [one(p) for p in pairs]
    return sorted(out, key=lambda s: s.pair_index)
