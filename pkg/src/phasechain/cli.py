"""Command-line entry point.

    phasechain synth --script "F L(3) F" --out data/drive
    phasechain run --frames data/drive/frames --out runs/drive
    phasechain eval --predicted runs/drive --truth data/drive --out runs/drive

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import re
import sys
from pathlib import Path

from .correlation import DEFAULT_EPS
from .errors import PhaseChainError
from .pipeline import PipelineConfig, evaluate, load_manifest, run
from .synthetic import DriveScript, parse_script, script_to_frames, textured_base, write_drive

log = logging.getLogger("phasechain")

EXIT_USAGE = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _size(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)[xX](\d+)", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="phasechain", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="estimate shifts, chain code and trajectory for a frame sequence")
    p.add_argument("--frames", help="directory of frames or a glob pattern")
    p.add_argument("--out", help="output directory")
    p.add_argument("--threshold", type=int, default=30, help="forward band half-width in pixels")
    p.add_argument("--window", choices=("none", "hann"), default="none")
    p.add_argument("--downscale", type=int, default=1)
    p.add_argument("--invert-turn-sign", action="store_true")
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p.add_argument("--workers", type=int, default=1, help="threads for loading and correlation")
    p.add_argument("--manifest", help="rerun from a run_manifest.json (other options ignored)")

    p = sub.add_parser("synth", help="generate a synthetic drive with ground truth")
    p.add_argument("--script", required=True, help='tokens F, L(k), R(k), e.g. "F L(3) F"')
    p.add_argument("--size", type=_size, default=(256, 256), help="frame size WxH")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--forward-dx", type=int, default=8, help="max |dx| of forward pairs")
    p.add_argument("--turn-dx", type=int, default=80, help="|dx| of turn pairs")
    p.add_argument("--out", required=True)

    p = sub.add_parser("eval", help="score a run against ground truth")
    p.add_argument("--predicted", required=True, help="run output directory")
    p.add_argument("--truth", required=True, help="directory with truth_chain.csv")
    p.add_argument("--out", required=True)
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    if args.manifest:
        config = load_manifest(args.manifest)
    else:
        if not args.frames or not args.out:
            raise _UsageError("run needs --frames and --out (or --manifest)")
        config = PipelineConfig(
            input=args.frames,
            output=args.out,
            threshold=args.threshold,
            window=args.window,
            downscale=args.downscale,
            invert_turn_sign=args.invert_turn_sign,
            eps=args.eps,
            workers=args.workers,
        )
    result = run(config)
    turns = sum(r.mscc in (0, 2) for r in result.records)
    print(f"{len(result.records)} frame pairs, {turns} turns, final heading {result.records[-1].iscc}")
    print(f"wrote {Path(config.output)}")
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    w, h = args.size
    script = DriveScript(
        parse_script(args.script),
        forward_dx_bound=args.forward_dx,
        turn_dx=args.turn_dx,
        noise_sigma=args.noise_sigma,
        seed=args.seed,
    )
    base = textured_base(w, h, seed=args.seed)
    drive = script_to_frames(script, base)
    frames_dir = write_drive(args.out, drive)
    print(f"script: {script.text()}")
    print(f"{len(drive.frames)} frames -> {frames_dir}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    m = evaluate(args.predicted, args.truth, args.out)
    print(f"chain accuracy:        {m.chain_accuracy:.4f}")
    print(f"endpoint error:        {m.endpoint_error:.4f}")
    print(f"heading edit distance: {m.heading_edit_distance}")
    if m.length_mismatch:
        print(
            f"length mismatch: predicted {m.predicted_length}, truth {m.truth_length}; "
            "accuracy is over the overlap"
        )
    return 0


class _UsageError(Exception):
    pass


COMMANDS = {"run": _cmd_run, "synth": _cmd_synth, "eval": _cmd_eval}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"phasechain: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PhaseChainError as exc:
        print(f"phasechain: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
