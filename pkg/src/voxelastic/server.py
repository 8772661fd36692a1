"""HTTP facade for the browser editor.

One app instance owns one editing session: a world document, a property
registry, and a table of run jobs.  Runs execute one at a time on a
background thread; submitting while a run is pending or running is
rejected with 409, and clients poll ``GET /runs/{id}`` for progress.
Solver preconditions (structure discovery, special-block lookup) are
checked synchronously at submission so bad requests fail fast with 422.
"""
from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .engine import run
from .errors import VoxelasticError, WorldFormatError
from .heatmap import MODES, bin_values, colorize
from .properties import PropertyRegistry
from .scenario import (
    bundled_scenario,
    bundled_scenario_names,
    result_document,
    timeseries_csv,
)
from .world import Coord, World, discover_structure

PENDING, RUNNING, DONE, FAILED = "pending", "running", "done", "failed"


@dataclass
class Job:
    id: str
    mode: str
    status: str = PENDING
    progress: float = 0.0
    error: Optional[str] = None
    result: Optional[dict] = None
    csv: Optional[str] = None
    frames: Optional[list[dict]] = None

    def summary(self) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "progress": self.progress,
            "error": self.error,
            "result": self.result if self.status == DONE else None,
        }


@dataclass
class SessionState:
    world: Optional[World] = None
    registry: PropertyRegistry = field(default_factory=PropertyRegistry)
    special_block: Optional[Coord] = None
    jobs: dict[str, Job] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def active_job(self) -> Optional[Job]:
        for job in self.jobs.values():
            if job.status in (PENDING, RUNNING):
                return job
        return None


def canonical_world_bytes(world: World) -> bytes:
    return json.dumps(world.to_dict(), sort_keys=True, separators=(",", ":")).encode("utf-8")


def _error(status_code: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status_code, content={"detail": message})


def create_app() -> FastAPI:
    app = FastAPI(title="voxelastic", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],  # local editor origins vary by dev setup
        allow_methods=["*"],
        allow_headers=["*"],
    )
    state = SessionState()
    app.state.session = state

    # -- world document ------------------------------------------------------
    @app.put("/world", status_code=204)
    async def put_world(request: Request):
        try:
            doc = json.loads(await request.body())
        except json.JSONDecodeError as exc:
            return _error(400, f"malformed JSON: {exc.msg}")
        try:
            world = World.from_dict(doc)
        except WorldFormatError as exc:
            return _error(400, str(exc))
        with state.lock:
            state.world = world
        return Response(status_code=204)

    @app.get("/world")
    def get_world():
        with state.lock:
            world = state.world
        if world is None:
            return _error(404, "no world loaded")
        return Response(content=canonical_world_bytes(world), media_type="application/json")

    # -- properties ------------------------------------------------------------
    @app.get("/properties")
    def get_properties():
        with state.lock:
            return {"properties": state.registry.describe()}

    @app.patch("/properties")
    def patch_properties(values: dict):
        with state.lock:
            trial = state.registry.copy()
            try:
                for name, value in values.items():
                    trial.set(name, value)
            except VoxelasticError as exc:
                return _error(422, str(exc))
            state.registry = trial
            return {"properties": state.registry.describe()}

    @app.put("/special-block")
    def put_special_block(body: dict):
        coord = body.get("coord")
        with state.lock:
            if coord is None:
                state.special_block = None
            else:
                if not (isinstance(coord, list) and len(coord) == 3):
                    return _error(400, "coord must be [x, y, z] or null")
                state.special_block = tuple(int(v) for v in coord)
            return {"special_block": state.special_block}

    # -- bundled scenarios (read-only presets for the editor) -------------------
    @app.get("/scenarios")
    def get_scenarios():
        return {"scenarios": bundled_scenario_names()}

    @app.get("/scenarios/{name}")
    def get_scenario(name: str):
        try:
            scenario = bundled_scenario(name)
        except WorldFormatError as exc:
            return _error(404, str(exc))
        return {
            "name": scenario.name,
            "description": scenario.description,
            "world": scenario.world.to_dict(),
            "properties": scenario.properties,
            "record_every": scenario.record_every,
            "runs": [
                {
                    "name": p.name,
                    "mode": p.mode,
                    "seed": list(p.seed),
                    "radius": p.radius,
                    "special_block": list(p.special_block) if p.special_block else None,
                }
                for p in scenario.runs
            ],
        }

    # -- runs -----------------------------------------------------------------
    @app.post("/runs", status_code=202)
    def post_run(body: dict):
        mode = body.get("mode", "stress")
        if mode not in MODES:
            return _error(400, f"mode must be one of {MODES}")
        radius = body.get("radius", 30)
        if not isinstance(radius, int) or radius < 1:
            return _error(400, "radius must be a positive integer")
        seed_raw = body.get("seed")
        if not (isinstance(seed_raw, list) and len(seed_raw) == 3):
            return _error(400, "seed must be [x, y, z]")
        seed: Coord = tuple(int(v) for v in seed_raw)
        record_frames = bool(body.get("record_frames", False))
        record_every = body.get("record_every", 100)
        if not isinstance(record_every, int) or record_every < 1:
            return _error(400, "record_every must be a positive integer")

        with state.lock:
            if state.world is None:
                return _error(422, "no world loaded")
            if state.active_job() is not None:
                return _error(409, "a run is already in progress for this session")
            world = state.world
            registry = state.registry.copy()
            special = state.special_block

        config = registry.sim_config(record_every=record_every, special_block=special)
        try:
            # fail fast on discovery/tracking problems before accepting the job
            structure = discover_structure(world, seed, radius, h=registry.resolve("h"))
            if special is not None and structure.index_of(special) is None:
                raise VoxelasticError(f"special block {special} is not part of the structure")
        except VoxelasticError as exc:
            return _error(422, str(exc))

        job = Job(id=uuid.uuid4().hex[:12], mode=mode)
        with state.lock:
            state.jobs[job.id] = job

        ult = registry.resolve("ult_stress")

        def execute():
            with state.lock:
                job.status = RUNNING
            frames: Optional[list[dict]] = [] if record_frames else None
            rest = structure.rest_positions

            def hook(step, time, displacements, vm_field):
                with state.lock:
                    job.progress = step / config.num_steps
                if frames is None:
                    return
                if mode == "stress":
                    bins = bin_values(vm_field, float(vm_field.max()))
                else:
                    norms = np.linalg.norm(displacements, axis=1)
                    bins = bin_values(norms, float(norms.max()))
                positions = np.round(rest + displacements, 3)
                frames.append(
                    {
                        "step": int(step),
                        "time": float(time),
                        "positions": positions.tolist(),
                        "bins": bins.tolist(),
                    }
                )

            try:
                result = run(
                    world,
                    seed,
                    radius,
                    registry.material(),
                    registry.kernel(),
                    config,
                    sample_hook=hook,
                )
                heatmap = colorize(result, mode, ult_stress=ult)
                doc = result_document(result, heatmap)
                doc["time_series"] = [
                    {
                        "step": s.step,
                        "time": s.time,
                        "u": [float(c) for c in s.u],
                        "von_mises": s.von_mises,
                    }
                    for s in result.time_series
                ]
                doc["ult_stress"] = ult
                with state.lock:
                    job.result = doc
                    job.csv = timeseries_csv(result)
                    job.frames = frames
                    job.progress = 1.0
                    job.status = DONE
            except VoxelasticError as exc:
                with state.lock:
                    job.error = str(exc)
                    job.status = FAILED

        threading.Thread(target=execute, daemon=True).start()
        return {"id": job.id}

    @app.get("/runs/{job_id}")
    def get_run(job_id: str):
        with state.lock:
            job = state.jobs.get(job_id)
            if job is None:
                return _error(404, f"unknown job {job_id!r}")
            return job.summary()

    @app.get("/runs/{job_id}/frames")
    def get_frames(job_id: str):
        with state.lock:
            job = state.jobs.get(job_id)
            if job is None:
                return _error(404, f"unknown job {job_id!r}")
            return {"frames": job.frames or []}

    @app.get("/runs/{job_id}/timeseries.csv")
    def get_csv(job_id: str):
        with state.lock:
            job = state.jobs.get(job_id)
            if job is None:
                return _error(404, f"unknown job {job_id!r}")
            if job.csv is None:
                return _error(404, "run has no time series yet")
            return PlainTextResponse(job.csv, media_type="text/csv")

    @app.post("/reset", status_code=204)
    def post_reset():
        with state.lock:
            state.jobs = {
                jid: job for jid, job in state.jobs.items() if job.status in (PENDING, RUNNING)
            }
        return Response(status_code=204)

    return app
