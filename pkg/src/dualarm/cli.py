"""Command-line entry points.

  dualarm run <scenario> [--out-dir DIR]
  dualarm serve [--config PATH] [--port N] [--time-scale X] [--static DIR]
  dualarm solve-ik --pose X Y Z ROLL PITCH YAW [--arm left|right|both]
  dualarm match <utterance> [--threshold T]

Exit codes: 0 success; 2 config/scenario parse or validation error;
3 command not understood (match); 1 unexpected failure.
"""

import argparse
import json
import sys

import numpy as np

from .geometry import Transform
from .kinematics import KinematicsError, inverse_kinematics
from .matching import NoMatchError, build_index, match_command
from .gateway import (
    ConfigError,
    Runtime,
    create_app,
    load_config,
    run_scenario,
)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_NO_MATCH = 3


def build_parser():
    parser = argparse.ArgumentParser(prog="dualarm",
                                     description="dual-arm manipulator control stack")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario file and write reports")
    p_run.add_argument("scenario", help="path to a scenario YAML file")
    p_run.add_argument("--out-dir", default="reports", help="report output directory")

    p_serve = sub.add_parser("serve", help="start the network service")
    p_serve.add_argument("--config", default="default", help="config path or 'default'")
    p_serve.add_argument("--port", type=int, default=None, help="override service port")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--time-scale", type=float, default=None,
                         help="simulated seconds per wall second (0 = free-run)")
    p_serve.add_argument("--static", default=None,
                         help="serve this directory (an operator console build) at /")

    p_ik = sub.add_parser("solve-ik", help="solve inverse kinematics for a pose")
    p_ik.add_argument("--pose", nargs=6, type=float, required=True,
                      metavar=("X", "Y", "Z", "ROLL", "PITCH", "YAW"),
                      help="robot-frame pose, meters and radians")
    p_ik.add_argument("--arm", choices=["left", "right", "both"], default="both")
    p_ik.add_argument("--config", default="default")

    p_match = sub.add_parser("match", help="match an utterance against the lexicon")
    p_match.add_argument("utterance")
    p_match.add_argument("--config", default="default")
    p_match.add_argument("--threshold", type=float, default=None)

    return parser


def cmd_run(args):
    run = run_scenario(args.scenario, args.out_dir)
    print(run.table_path.read_text(), end="")
    failed = [row for row in run.rows if row.failure]
    print(f"reports: {run.table_path} {run.log_path}")
    if failed:
        print(f"{len(failed)} of {len(run.rows)} trials failed "
              f"({', '.join(sorted({row.failure for row in failed}))})")
    return EXIT_OK


def cmd_serve(args):
    import uvicorn

    config = load_config(args.config)
    runtime = Runtime(config, time_scale=args.time_scale)
    app = create_app(runtime)
    if args.static:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=args.static, html=True), name="console")
    port = args.port if args.port is not None else config.service.port
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return EXIT_OK


def cmd_solve_ik(args):
    config = load_config(args.config)
    x, y, z, roll, pitch, yaw = args.pose
    target = Transform.from_xyz_rpy(x, y, z, roll, pitch, yaw)
    sides = ["left", "right"] if args.arm == "both" else [args.arm]
    output = {}
    for side in sides:
        try:
            solutions = inverse_kinematics(config.arms[side], target)
            output[side] = [
                {
                    "q": [round(float(v), 9) for v in sol.q],
                    "branch": sol.branch,
                    "valid": sol.valid,
                    "position_residual_m": sol.position_residual,
                    "rotation_residual_rad": sol.rotation_residual,
                }
                for sol in solutions.solutions
            ]
        except KinematicsError as exc:
            output[side] = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(output, indent=2))
    return EXIT_OK


def cmd_match(args):
    config = load_config(args.config)
    threshold = args.threshold if args.threshold is not None else config.match_threshold
    index = build_index(config.lexicon)
    try:
        result = match_command(index, config.lexicon, args.utterance, threshold)
    except NoMatchError as exc:
        best = exc.best
        print(json.dumps({
            "accepted": False,
            "error": "NoMatch",
            "best_template": best.entry.template if best else None,
            "best_score": best.score if best else 0.0,
            "threshold": threshold,
        }, indent=2))
        return EXIT_NO_MATCH
    print(json.dumps({
        "accepted": True,
        "template": result.entry.template,
        "action": result.entry.action.value,
        "object_label": result.entry.object_label,
        "score": result.score,
        "threshold": threshold,
    }, indent=2))
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    handlers = {"run": cmd_run, "serve": cmd_serve,
                "solve-ik": cmd_solve_ik, "match": cmd_match}
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyboardInterrupt:
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
