"""Exception hierarchy.

Every error carries a stable kebab-case ``name`` that the CLI prints on
failure, and an ``exit_code`` used as the process status.
"""

from __future__ import annotations


class PhaseChainError(Exception):
    name = "phasechain-error"
    exit_code = 2

    def __str__(self) -> str:
        msg = super().__str__()
        return f"{self.name}: {msg}" if msg else self.name


class SequenceTooShort(PhaseChainError):
    name = "sequence-too-short"


class InconsistentDimensions(PhaseChainError):
    name = "inconsistent-dimensions"


class IngestFailure(PhaseChainError):
    name = "ingest-failure"


class InvalidFrame(PhaseChainError):
    name = "invalid-frame"


class DownscaleTooAggressive(PhaseChainError):
    name = "downscale-too-aggressive"


class SpectrumMismatch(PhaseChainError):
    name = "spectrum-mismatch"


class NumericInstability(PhaseChainError):
    name = "numeric-instability"
    exit_code = 3


class DegenerateSurface(PhaseChainError):
    name = "degenerate-surface"
    exit_code = 3

    def __init__(self, message: str, peak_response: float) -> None:
        super().__init__(message)
        self.peak_response = peak_response


class EmptySequence(PhaseChainError):
    name = "empty-sequence"


class InvalidConfig(PhaseChainError):
    name = "invalid-config"
    exit_code = 1


class ComparisonUndefined(PhaseChainError):
    name = "comparison-undefined"


class InvalidShift(PhaseChainError):
    name = "invalid-shift"


class ScriptParseError(PhaseChainError):
    name = "script-parse-error"
    exit_code = 1


class FormatError(PhaseChainError):
    name = "format-error"
