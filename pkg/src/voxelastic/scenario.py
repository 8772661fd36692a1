"""Scenario and result files.

A scenario document bundles a world with property overrides and named
run presets, so a challenge ships as one self-contained JSON file:

    {
      "name": "...",
      "world": {"ground_level": 0, "blocks": [{"x":0,"y":0,"z":0,"kind":"structural"}]},
      "properties": {"ult_stress": 15000.0},
      "config": {"record_every": 100},
      "runs": [{"name": "span", "mode": "stress", "seed": [0,1,0], "radius": 30,
                "special_block": null}]
    }

A bare world document (top-level ``blocks``/``ground_level``) is accepted
anywhere a scenario is, with no overrides and no presets.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .engine import SimulationResult
from .errors import WorldFormatError
from .heatmap import MODES, HeatMap
from .properties import PropertyRegistry
from .world import Coord, World

PathLike = Union[str, Path]


@dataclass(frozen=True)
class RunPreset:
    """Default arguments for one solver run stored with a scenario."""

    name: str
    mode: str = "stress"
    seed: Coord = (0, 0, 0)
    radius: int = 30
    special_block: Optional[Coord] = None


@dataclass
class Scenario:
    world: World
    name: str = ""
    description: str = ""
    properties: dict = field(default_factory=dict)
    record_every: int = 100
    runs: list[RunPreset] = field(default_factory=list)

    def registry(self, base: Optional[PropertyRegistry] = None) -> PropertyRegistry:
        """Base defaults with this scenario's overrides applied."""
        reg = base.copy() if base is not None else PropertyRegistry()
        for name, value in self.properties.items():
            reg.set(name, value)
        return reg

    def preset(self, name: Optional[str] = None) -> Optional[RunPreset]:
        if not self.runs:
            return None
        if name is None:
            return self.runs[0]
        for preset in self.runs:
            if preset.name == name:
                return preset
        raise WorldFormatError(f"scenario has no run preset named {name!r}")


def _coord(value, context: str) -> Coord:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 3
        or any(isinstance(v, bool) or not isinstance(v, int) for v in value)
    ):
        raise WorldFormatError(f"{context}: expected [x, y, z] integers, got {value!r}")
    return (value[0], value[1], value[2])


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise WorldFormatError("scenario document must be a JSON object")
    if "world" not in doc:
        # bare world document
        return Scenario(world=World.from_dict(doc))
    world = World.from_dict(doc["world"])
    properties = doc.get("properties", {})
    if not isinstance(properties, dict):
        raise WorldFormatError("'properties' must be an object")
    config = doc.get("config", {})
    if not isinstance(config, dict):
        raise WorldFormatError("'config' must be an object")
    record_every = config.get("record_every", 100)
    if not isinstance(record_every, int) or record_every < 1:
        raise WorldFormatError("config.record_every must be a positive integer")
    runs = []
    for idx, entry in enumerate(doc.get("runs", [])):
        if not isinstance(entry, dict):
            raise WorldFormatError(f"runs[{idx}] must be an object")
        mode = entry.get("mode", "stress")
        if mode not in MODES:
            raise WorldFormatError(f"runs[{idx}].mode: expected one of {MODES}, got {mode!r}")
        radius = entry.get("radius", 30)
        if not isinstance(radius, int) or radius < 1:
            raise WorldFormatError(f"runs[{idx}].radius must be a positive integer")
        special = entry.get("special_block")
        runs.append(
            RunPreset(
                name=str(entry.get("name", f"run{idx}")),
                mode=mode,
                seed=_coord(entry.get("seed", [0, 0, 0]), f"runs[{idx}].seed"),
                radius=radius,
                special_block=None if special is None else _coord(special, f"runs[{idx}].special_block"),
            )
        )
    return Scenario(
        world=world,
        name=str(doc.get("name", "")),
        description=str(doc.get("description", "")),
        properties=dict(properties),
        record_every=record_every,
        runs=runs,
    )


def load_scenario(path: PathLike) -> Scenario:
    """Parse a scenario (or bare world) file; errors carry file context."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorldFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return scenario_from_dict(doc)
    except WorldFormatError as exc:
        raise WorldFormatError(f"{path}: {exc}") from None


def load_world(path: PathLike) -> World:
    return load_scenario(path).world


def save_world(world: World, path: PathLike) -> None:
    Path(path).write_text(json.dumps(world.to_dict(), indent=2) + "\n", encoding="utf-8")


# -- bundled scenarios ---------------------------------------------------------

def bundled_scenario_names() -> list[str]:
    root = resources.files("voxelastic") / "scenarios"
    return sorted(p.name.removesuffix(".json") for p in root.iterdir() if p.name.endswith(".json"))


def bundled_scenario(name: str) -> Scenario:
    ref = resources.files("voxelastic") / "scenarios" / f"{name}.json"
    try:
        text = ref.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise WorldFormatError(
            f"no bundled scenario {name!r}; available: {', '.join(bundled_scenario_names())}"
        ) from None
    return scenario_from_dict(json.loads(text))


# -- results ---------------------------------------------------------------

def result_document(result: SimulationResult, heatmap: HeatMap) -> dict:
    """JSON-ready summary of a finished run.

    ``particles`` carries the lattice coordinate of each row so heat-map
    consumers can color blocks without re-discovering the structure.
    """
    return {
        "particles": result.structure.coords.tolist(),
        "displacements": result.displacements.tolist(),
        "von_mises": result.von_mises.tolist(),
        "bins": heatmap.bins.tolist(),
        "max_von_mises": float(result.max_von_mises),
        "tracked_deflection": result.tracked_deflection.tolist(),
        "exceeds_ultimate": heatmap.exceeds_ultimate.tolist(),
        "diagnostics": list(result.diagnostics),
        "mode": heatmap.mode,
        "scale_max": float(heatmap.scale_max),
    }


def save_result(result: SimulationResult, heatmap: HeatMap, path: PathLike) -> None:
    Path(path).write_text(
        json.dumps(result_document(result, heatmap), indent=2) + "\n", encoding="utf-8"
    )


CSV_HEADER = "step,time,ux,uy,uz,von_mises"


def _g9(x: float) -> str:
    return format(float(x), ".9g")


def timeseries_csv(result: SimulationResult) -> str:
    """Sampled tracked-particle series; 9 significant digits, LF endings."""
    lines = [CSV_HEADER]
    for sample in result.time_series:
        u = np.asarray(sample.u, dtype=float)
        lines.append(
            f"{sample.step},{_g9(sample.time)},{_g9(u[0])},{_g9(u[1])},{_g9(u[2])},{_g9(sample.von_mises)}"
        )
    return "\n".join(lines) + "\n"


def save_timeseries_csv(result: SimulationResult, path: PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(timeseries_csv(result))
