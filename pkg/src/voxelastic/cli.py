"""Command-line surface for headless runs and scripting.

State that would live in an interactive session (loaded world, property
overrides, the tracked special block, the last result) persists in a JSON
session file between invocations.  The default session path is
``.voxelastic_session.json`` in the working directory; the
``VOXELASTIC_SESSION`` environment variable overrides it and ``--session``
overrides both.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .engine import run
from .errors import VoxelasticError
from .heatmap import MODES, colorize
from .properties import PropertyRegistry
from .scenario import (
    load_scenario,
    save_result,
    save_timeseries_csv,
)
from .world import Coord

DEFAULT_SESSION = ".voxelastic_session.json"
SESSION_ENV = "VOXELASTIC_SESSION"


def session_path(arg: Optional[str]) -> Path:
    if arg:
        return Path(arg)
    return Path(os.environ.get(SESSION_ENV, DEFAULT_SESSION))


def load_session(path: Path) -> dict:
    if path.exists():
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            print(f"warning: ignoring corrupt session file {path}", file=sys.stderr)
    return {"world": None, "special_block": None, "properties": {}, "last_result": None}


def save_session(path: Path, session: dict) -> None:
    path.write_text(json.dumps(session, indent=2) + "\n", encoding="utf-8")


def parse_coord(text: str) -> Coord:
    parts = text.replace(",", " ").split()
    if len(parts) != 3:
        raise ValueError(f"expected x,y,z, got {text!r}")
    return tuple(int(p) for p in parts)  # type: ignore[return-value]


def session_registry(session: dict, scenario_properties: Optional[dict] = None) -> PropertyRegistry:
    """Defaults, then scenario overrides, then explicit session settings."""
    reg = PropertyRegistry()
    for name, value in (scenario_properties or {}).items():
        reg.set(name, value)
    for name, value in session.get("properties", {}).items():
        reg.set(name, value)
    return reg


def print_properties(reg: PropertyRegistry, only: Optional[str] = None) -> None:
    rows = reg.describe()
    if only is not None:
        rows = [r for r in rows if r["name"] == only]
    width = max(len(r["name"]) for r in rows)
    for r in rows:
        auto = " (auto)" if r["auto"] else ""
        print(f"{r['name']:<{width}}  {r['value']:.6g} {r['unit']}{auto}  [{r['doc']}]")


def cmd_info(args: argparse.Namespace) -> int:
    session = load_session(session_path(args.session))
    print(f"voxelastic {__version__} - voxel elasticity workbench")
    print("mesh-free solid mechanics on unit-block lattices with heat-map output")
    print(f"session: {session_path(args.session)}")
    if session.get("world"):
        print(f"world: {session['world']}")
    if session.get("special_block"):
        print(f"special block: {tuple(session['special_block'])}")
    print("properties:")
    print_properties(session_registry(session))
    return 0


def cmd_properties(args: argparse.Namespace) -> int:
    path = session_path(args.session)
    session = load_session(path)
    reg = session_registry(session)
    if args.name is None:
        print_properties(reg)
        return 0
    if args.value is None:
        print_properties(reg, only=args.name)
        return 0
    value: object = args.value
    if isinstance(value, str) and value.lower() != "auto":
        try:
            value = float(value)
        except ValueError:
            print(f"error: {args.name}: expected a number or 'auto', got {value!r}", file=sys.stderr)
            return 2
    reg.set(args.name, value)
    stored = reg.get(args.name)
    session.setdefault("properties", {})[args.name] = stored
    save_session(path, session)
    print_properties(reg, only=args.name)
    return 0


def cmd_set_special_block(args: argparse.Namespace) -> int:
    path = session_path(args.session)
    session = load_session(path)
    coord = parse_coord(" ".join(args.coord))
    session["special_block"] = list(coord)
    save_session(path, session)
    print(f"special block set to {coord}")
    return 0


def cmd_reset(args: argparse.Namespace) -> int:
    path = session_path(args.session)
    session = load_session(path)
    session["last_result"] = None
    save_session(path, session)
    print("result state cleared")
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    path = session_path(args.session)
    session = load_session(path)

    world_arg = args.world or session.get("world")
    if not world_arg:
        print("error: no world file (pass --world or load one into the session)", file=sys.stderr)
        return 2
    scenario = load_scenario(world_arg)
    preset = scenario.preset(args.run_preset) if (scenario.runs or args.run_preset) else None

    mode = args.mode or args.mode_pos or (preset.mode if preset else None) or "stress"
    if mode not in MODES:
        print(f"error: mode must be one of {MODES}, got {mode!r}", file=sys.stderr)
        return 2
    radius = args.radius if args.radius is not None else args.radius_pos
    if radius is None and preset is not None:
        radius = preset.radius
    if radius is None:
        print("error: no radius (pass --radius or a positional radius)", file=sys.stderr)
        return 2
    if radius < 1:
        print("error: radius must be at least 1", file=sys.stderr)
        return 2
    seed = args.seed or (preset.seed if preset else None)
    if seed is None:
        print("error: no seed coordinate (pass --seed x,y,z)", file=sys.stderr)
        return 2

    special = session.get("special_block")
    if special is not None:
        special = tuple(special)
    elif preset is not None and preset.special_block is not None:
        special = preset.special_block

    reg = session_registry(session, scenario.properties)
    config = reg.sim_config(record_every=scenario.record_every, special_block=special)

    result = run(scenario.world, seed, radius, reg.material(), reg.kernel(), config)
    heatmap = colorize(result, mode, ult_stress=reg.resolve("ult_stress"))

    u = result.tracked_deflection
    print(f"deflection: ({u[0]:.9g}, {u[1]:.9g}, {u[2]:.9g}) m")
    print(f"max von Mises: {result.max_von_mises:.9g} Pa")
    over = int(heatmap.exceeds_ultimate.sum())
    if over:
        print(f"{over} block(s) exceed the ultimate stress ({reg.resolve('ult_stress'):.6g} Pa)")
    for note in result.diagnostics:
        print(f"note: {note}")

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = scenario.name or Path(str(world_arg)).stem
    result_path = out_dir / f"{stem}_result.json"
    csv_path = Path(args.csv) if args.csv else out_dir / f"{stem}_timeseries.csv"
    save_result(result, heatmap, result_path)
    save_timeseries_csv(result, csv_path)
    print(f"wrote {result_path}")
    print(f"wrote {csv_path}")

    session["world"] = str(world_arg)
    session["last_result"] = {"result": str(result_path), "csv": str(csv_path), "mode": mode}
    save_session(path, session)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voxelastic", description="voxel elasticity workbench"
    )
    parser.add_argument("--version", action="version", version=f"voxelastic {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_info = sub.add_parser("info", help="print version, session, and property values")
    p_info.add_argument("--session", default=None)
    p_info.set_defaults(func=cmd_info)

    p_run = sub.add_parser("run", help="run the solver on a world or scenario file")
    p_run.add_argument("mode_pos", nargs="?", default=None, metavar="MODE",
                       help="stress or position (positional compatibility)")
    p_run.add_argument("radius_pos", nargs="?", type=int, default=None, metavar="RADIUS")
    p_run.add_argument("--mode", default=None, help="stress or position")
    p_run.add_argument("--radius", type=int, default=None, help="scan radius in blocks")
    p_run.add_argument("--seed", type=parse_coord, default=None, help="seed coordinate x,y,z")
    p_run.add_argument("--world", default=None, help="world or scenario JSON file")
    p_run.add_argument("--run-preset", default=None, help="named run preset from the scenario")
    p_run.add_argument("--out", default=".", help="output directory (default: current)")
    p_run.add_argument("--csv", default=None, help="time-series CSV path override")
    p_run.add_argument("--session", default=None)
    p_run.set_defaults(func=cmd_run)

    p_props = sub.add_parser("properties", help="list or set simulation properties")
    p_props.add_argument("name", nargs="?", default=None)
    p_props.add_argument("value", nargs="?", default=None)
    p_props.add_argument("--session", default=None)
    p_props.set_defaults(func=cmd_properties)

    p_special = sub.add_parser("set-special-block", help="track this block's deflection")
    p_special.add_argument("coord", nargs="+", help="x,y,z or three integers")
    p_special.add_argument("--session", default=None)
    p_special.set_defaults(func=cmd_set_special_block)

    p_reset = sub.add_parser("reset", help="clear the last result and heat-map state")
    p_reset.add_argument("--session", default=None)
    p_reset.set_defaults(func=cmd_reset)

    p_serve = sub.add_parser("serve", help="start the HTTP service for the editor")
    p_serve.add_argument("--port", type=int, default=8420)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except VoxelasticError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
