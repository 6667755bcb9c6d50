"""Command line interface.

Subcommands:
  reconstruct  dataset manifest -> plan JSON (optionally SVG)
  eval         predicted plan vs reference plan -> metrics JSON
  synth        floor spec JSON -> synthetic dataset directory
  render       plan JSON -> SVG drawing

Exit codes: 0 success, 1 bad input, 2 geometry/pipeline failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import planio
from .errors import GeometryError, InputError
from .ingest import parse_manifest
from .metrics import evaluate_plan
from .pipeline import WALL_FIT_MODES, ReconstructOptions, reconstruct
from .render_svg import write_svg
from .synth import generate


class _Parser(argparse.ArgumentParser):
    """Report usage problems as input errors instead of exiting with 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise InputError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="planforge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    rec = sub.add_parser("reconstruct", help="reconstruct a plan from a dataset")
    rec.add_argument("manifest", type=Path, help="dataset manifest JSON")
    rec.add_argument("-o", "--output", type=Path, default=Path("plan.json"),
                     help="plan JSON output path (default: plan.json)")
    rec.add_argument("--svg", type=Path, default=None,
                     help="also write an SVG drawing to this path")
    rec.add_argument("--seed", type=int, default=0,
                     help="seed for clustering initialization (default: 0)")
    rec.add_argument("--snap-dist", type=float, default=0.3, metavar="M",
                     help="boundary snap distance in meters (default: 0.3)")
    rec.add_argument("--snap-angle-deg", type=float, default=5.0, metavar="DEG",
                     help="near-straight turn tolerance in degrees (default: 5)")
    rec.add_argument("--max-points", type=int, default=50_000,
                     help="per-capture plan point cap (default: 50000)")
    rec.add_argument("--hull-band", type=float, default=0.2, metavar="M",
                     help="hull shell half-width in meters (default: 0.2)")
    rec.add_argument("--wall-fit", choices=WALL_FIT_MODES, default="lsq",
                     help="wall fit: total-least-squares arm lines or cluster"
                          " means (default: lsq)")
    rec.add_argument("--gap-tol", type=float, default=0.3, metavar="M",
                     help="shared-wall reconciliation distance (default: 0.3)")
    rec.add_argument("--threads", type=int, default=None,
                     help="worker threads for capture processing")
    rec.add_argument("--keep-intermediates", action="store_true",
                     help="dump per-capture clouds and wedges next to the plan")

    ev = sub.add_parser("eval", help="compare a plan against a reference plan")
    ev.add_argument("predicted", type=Path, help="reconstructed plan JSON")
    ev.add_argument("truth", type=Path, help="reference plan JSON")
    ev.add_argument("-o", "--output", type=Path, default=None,
                    help="also write the metrics JSON to this path")

    sy = sub.add_parser("synth", help="generate a synthetic dataset")
    sy.add_argument("spec", type=Path, help="floor spec JSON")
    sy.add_argument("out_dir", type=Path, help="dataset output directory")
    sy.add_argument("--seed", type=int, default=None,
                    help="override the seed stored in the floor spec")

    rd = sub.add_parser("render", help="render a plan JSON to SVG")
    rd.add_argument("plan", type=Path, help="plan JSON")
    rd.add_argument("-o", "--output", type=Path, default=None,
                    help="SVG output path (default: plan path with .svg)")

    return parser


def _cmd_reconstruct(args: argparse.Namespace) -> int:
    manifest = parse_manifest(args.manifest)
    options = ReconstructOptions(
        seed=args.seed,
        snap_dist=args.snap_dist,
        snap_angle_deg=args.snap_angle_deg,
        max_points=args.max_points,
        hull_band=args.hull_band,
        wall_fit=args.wall_fit,
        gap_tol=args.gap_tol,
        keep_intermediates=args.keep_intermediates,
        threads=args.threads,
    )
    debug_dir = None
    if args.keep_intermediates:
        debug_dir = args.output.parent / (args.output.stem + "_intermediates")
    plan = reconstruct(manifest, options, debug_dir=debug_dir)
    planio.write_plan(plan, args.output)
    for room in sorted(plan.rooms, key=lambda r: r.room_id):
        print(f"room {room.room_id}: area {room.area():.3f} m^2,"
              f" aspect {room.aspect_ratio():.3f},"
              f" corners {len(room.vertices)}")
    print(f"wrote {args.output}")
    if args.svg is not None:
        write_svg(plan, args.svg)
        print(f"wrote {args.svg}")
    if debug_dir is not None:
        print(f"intermediates in {debug_dir}")
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    predicted = planio.read_plan(args.predicted)
    truth = planio.read_plan(args.truth)
    report = evaluate_plan(predicted, truth)
    text = planio.write_metrics(report, args.output)
    sys.stdout.write(text)
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    spec = planio.read_floor_spec(args.spec)
    if args.seed is not None:
        spec = dataclasses.replace(spec, seed=args.seed)
    manifest, truth = generate(spec, args.out_dir)
    n_caps = sum(len(r.captures) for r in manifest.rooms)
    print(f"wrote {n_caps} captures for {len(manifest.rooms)} room(s)"
          f" to {args.out_dir}")
    print(f"ground truth: {args.out_dir / 'ground_truth.json'}")
    _ = truth
    return 0


def _cmd_render(args: argparse.Namespace) -> int:
    plan = planio.read_plan(args.plan)
    out = args.output if args.output is not None else args.plan.with_suffix(".svg")
    write_svg(plan, out)
    print(f"wrote {out}")
    return 0


_COMMANDS = {
    "reconstruct": _cmd_reconstruct,
    "eval": _cmd_eval,
    "synth": _cmd_synth,
    "render": _cmd_render,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except InputError as e:
        print(f"planforge: input error: {e}", file=sys.stderr)
        return 1
    except GeometryError as e:
        print(f"planforge: geometry error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
