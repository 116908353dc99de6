"""Camera trajectory from video frames via phase correlation and a dynamic chain code."""

__version__ = "0.1.0"

from .chaincode import (
    ChainConfig,
    ChainRecord,
    ChainState,
    MotionClass,
    classify_motion,
    fold_chain,
    rotate_left,
    rotate_right,
    step,
)
from .correlation import (
    CorrelationConfig,
    ShiftEstimate,
    correlation_surface,
    cross_power_spectrum,
    estimate_sequence,
    estimate_shift,
    forward_transform,
    peak_shift,
)
from .errors import PhaseChainError
from .frames import Frame, IngestOptions, apply_window, downscale, load_sequence, to_grayscale
from .trajectory import TrajectoryMetrics, chain_to_points, compare, normalize, render_svg

__all__ = [
    "ChainConfig",
    "ChainRecord",
    "ChainState",
    "CorrelationConfig",
    "Frame",
    "IngestOptions",
    "MotionClass",
    "PhaseChainError",
    "ShiftEstimate",
    "TrajectoryMetrics",
    "apply_window",
    "chain_to_points",
    "classify_motion",
    "compare",
    "correlation_surface",
    "cross_power_spectrum",
    "downscale",
    "estimate_sequence",
    "estimate_shift",
    "fold_chain",
    "forward_transform",
    "load_sequence",
    "normalize",
    "peak_shift",
    "render_svg",
    "rotate_left",
    "rotate_right",
    "step",
    "to_grayscale",
]
