"""Acceptance suite: one test per shipped guarantee, each printing a
PASS/FAIL line (run with ``pytest -s tests/test_acceptance.py`` to see
them).  Budgets are wall-clock on the development machine; the compiled
step loop is warmed up once before any timed section.
"""
import json
import time
from dataclasses import replace
from importlib import resources

import numpy as np
import pytest

from voxelastic.cli import main as cli_main
from voxelastic.engine import SimConfig, Simulation, run
from voxelastic.kernel import KernelParams
from voxelastic.mechanics import MaterialParams, green_lagrange, second_pk, von_mises
from voxelastic.properties import PropertyRegistry
from voxelastic.scenario import CSV_HEADER, bundled_scenario
from voxelastic.world import (
    BlockKind,
    Structure,
    World,
    brute_force_neighbors,
    discover_structure,
    hashed_neighbors,
)

S = BlockKind.STRUCTURAL
F = BlockKind.FIXED
KP = KernelParams(h=2.0)
MAT = MaterialParams(youngs_modulus=1e9, poisson_ratio=0.4)

# tip deflections of the bundled cantilevers, frozen from the implementation
GOLDEN_TIP_MM = {
    "square": -2.5236,
    "box": -1.9536,
    "i_beam": -1.6475,
    "h_beam": -2.7774,
}
GOLDEN_ORDER = ["h_beam", "square", "box", "i_beam"]  # most deflection first


def report(name: str, passed: bool, detail: str = "") -> None:
    print(f"[ACCEPTANCE] {name}: {'PASS' if passed else 'FAIL'} {detail}".rstrip(), flush=True)
    assert passed, f"{name}: {detail}"


@pytest.fixture(scope="module", autouse=True)
def warm_up_compiled_kernels():
    world = World(blocks={(0, 1, 0): S, (1, 1, 0): S}, ground_level=0)
    run(world, (0, 1, 0), 3, MAT, KP, SimConfig(dt=1e-4, num_steps=2, record_every=1))


def cube_structure(n=5):
    blocks = {(x, y, z): S for x in range(n) for y in range(1, n + 1) for z in range(n)}
    return discover_structure(World(blocks=blocks, ground_level=0), (0, 1, 0), 3 * n)


def test_kernel_consistency_affine_reproduction():
    t0 = time.monotonic()
    structure = cube_structure(5)
    sim = Simulation(structure, MAT, KP, SimConfig(dt=1e-4, self_weight_enabled=False))
    X = structure.rest_positions
    interior = np.all((X >= [1, 2, 1]) & (X <= [3, 4, 3]), axis=1)
    assert interior.sum() == 27

    rng = np.random.default_rng(2024)
    worst = 0.0
    checked = 0
    while checked < 200:
        F0 = rng.uniform(-2.0, 2.0, size=(3, 3))
        if np.linalg.det(F0) <= 0.05:
            continue
        checked += 1
        b = rng.uniform(-1.0, 1.0, size=3)
        u = X @ (F0 - np.eye(3)).T + b
        sim._accelerations(u, np.zeros_like(u))
        err = np.max(np.abs(sim._F[interior] - F0))
        worst = max(worst, err)
    elapsed = time.monotonic() - t0
    report(
        "kernel-consistency",
        worst < 1e-9 and elapsed < 5.0,
        f"(max |F - F0| = {worst:.3e} over 200 maps, {elapsed:.2f}s)",
    )


def test_rest_equilibrium_of_bundled_scenarios():
    t0 = time.monotonic()
    worst_disp = 0.0
    worst_vm = 0.0
    for name in ("desert_bridge", "desert_bridge_supported", "cross_sections"):
        scenario = bundled_scenario(name)
        reg = scenario.registry()
        reg.set("gravity_toggle", 0)
        reg.set("num_steps", 100)
        config = replace(reg.sim_config(record_every=10), load_force=(0.0, 0.0, 0.0))
        for preset in scenario.runs:
            result = run(scenario.world, preset.seed, preset.radius, reg.material(), reg.kernel(), config)
            worst_disp = max(worst_disp, float(np.abs(result.displacements).max()))
            worst_vm = max(worst_vm, float(result.max_von_mises))
    elapsed = time.monotonic() - t0
    report(
        "rest-equilibrium",
        worst_disp < 1e-9 and worst_vm < 1e-6 and elapsed < 10.0,
        f"(max |u| = {worst_disp:.3e} m, max vm = {worst_vm:.3e} Pa, {elapsed:.2f}s)",
    )


def random_rotation(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def test_objectivity_under_rigid_rotation():
    t0 = time.monotonic()
    structure = cube_structure(5)
    sim = Simulation(structure, MAT, KP, SimConfig(dt=1e-4, self_weight_enabled=False))
    X = structure.rest_positions
    rng = np.random.default_rng(77)
    worst_strain = 0.0
    worst_vm = 0.0
    for _ in range(500):
        Q = random_rotation(rng)
        u = X @ Q.T - X
        sim._accelerations(u, np.zeros_like(u))
        E = green_lagrange(sim._F)
        worst_strain = max(worst_strain, float(np.abs(E).max()))
        worst_vm = max(worst_vm, float(von_mises(sim._F, sim._S).max()))
    elapsed = time.monotonic() - t0
    report(
        "objectivity",
        worst_strain < 1e-9 and worst_vm < 1e-3 and elapsed < 5.0,
        f"(max |E| = {worst_strain:.3e}, max vm = {worst_vm:.3e} Pa, {elapsed:.2f}s)",
    )


def run_scenario_preset(scenario, preset, registry=None):
    reg = scenario.registry() if registry is None else registry
    config = reg.sim_config(
        record_every=scenario.record_every, special_block=preset.special_block
    )
    return run(scenario.world, preset.seed, preset.radius, reg.material(), reg.kernel(), config)


def test_desert_bridge_reproduction():
    t0 = time.monotonic()
    plain = bundled_scenario("desert_bridge")
    supported = bundled_scenario("desert_bridge_supported")
    res_plain = run_scenario_preset(plain, plain.preset())
    res_supported = run_scenario_preset(supported, supported.preset())
    elapsed = time.monotonic() - t0
    over_limit = res_plain.max_von_mises > 15000.0
    ordered = res_supported.max_von_mises < res_plain.max_von_mises
    report(
        "desert-bridge",
        over_limit and ordered and elapsed < 60.0,
        f"(unsupported {res_plain.max_von_mises:.0f} Pa > 15000 Pa, "
        f"supported {res_supported.max_von_mises:.0f} Pa, {elapsed:.1f}s)",
    )


@pytest.fixture(scope="module")
def cantilever_runs():
    scenario = bundled_scenario("cross_sections")
    t0 = time.monotonic()
    results = {p.name: run_scenario_preset(scenario, p) for p in scenario.runs}
    return results, time.monotonic() - t0


def test_cross_section_ordering_and_golden_values(cantilever_runs):
    results, elapsed = cantilever_runs
    tips = {name: float(r.tracked_deflection[1]) for name, r in results.items()}
    order = sorted(tips, key=lambda k: tips[k])
    h_largest = order[0] == "h_beam" and tips["h_beam"] < min(
        v for k, v in tips.items() if k != "h_beam"
    )
    golden_ok = all(
        tips[name] == pytest.approx(GOLDEN_TIP_MM[name] * 1e-3, rel=1e-3) for name in tips
    )
    detail = ", ".join(f"{k}={tips[k] * 1000:.4f}mm" for k in order)
    report(
        "cross-section-ordering",
        h_largest and order == GOLDEN_ORDER and golden_ok and elapsed < 120.0,
        f"({detail}, {elapsed:.1f}s)",
    )


def test_damped_convergence_and_overshoot(cantilever_runs):
    results, _ = cantilever_runs
    ok = True
    details = []
    for name, result in results.items():
        ke = np.array(result.kinetic_energy)
        running_max = np.maximum.accumulate(ke)
        ke_ratio = ke[-1] / running_max[-1]
        uy = np.array([s.u[1] for s in result.time_series])
        overshoot = uy.min() < uy[-1] and int(np.argmin(uy)) < len(uy) - 1
        ok = ok and ke_ratio < 0.01 and overshoot
        details.append(f"{name}: KE {ke_ratio:.1e}, overshoot x{uy.min() / uy[-1]:.2f}")
    report("damped-convergence", ok, "(" + "; ".join(details) + ")")


def test_load_linearity():
    blocks = {}
    for x in range(0, 7):
        kind = F if x == 0 else S
        for y in (1, 2):
            for z in (0, 1):
                blocks[(x, y, z)] = kind
    blocks[(6, 3, 0)] = BlockKind.LOAD
    world = World(blocks=blocks, ground_level=0)
    mat = MaterialParams(youngs_modulus=1e9, poisson_ratio=0.4, eta=5.7e4)

    def tip_deflection(load_scale):
        config = SimConfig(
            dt=1e-4,
            num_steps=40000,
            record_every=100,
            load_force=(0.0, -900.0 * load_scale, 0.0),
            self_weight_enabled=False,
            special_block=(6, 1, 0),
        )
        result = run(world, (1, 1, 0), 15, mat, KP, config)
        return float(result.tracked_deflection[1])

    single = tip_deflection(1.0)
    double = tip_deflection(2.0)
    ratio = double / single
    report(
        "load-linearity",
        abs(ratio - 2.0) <= 0.1,
        f"(tip {single * 1000:.4f} mm -> {double * 1000:.4f} mm, ratio {ratio:.4f})",
    )


def test_neighbor_oracle_equivalence():
    t0 = time.monotonic()
    rng = np.random.default_rng(4242)
    sets_equal = True
    forces_identical = True
    for _ in range(50):
        coords = set()
        while len(coords) < 200:
            c = rng.integers(0, 8, size=3)
            coords.add((int(c[0]), int(c[1]) + 1, int(c[2])))
        ordered = sorted(coords)
        coord_arr = np.array(ordered, dtype=int)
        positions = coord_arr.astype(float)

        fast = hashed_neighbors(positions, KP.h)
        slow = brute_force_neighbors(positions, KP.h)
        sets_equal = sets_equal and all(np.array_equal(a, b) for a, b in zip(fast, slow))

        def structure_with(neighbors):
            return Structure(
                coords=coord_arr,
                kinds=[S] * len(ordered),
                fixed=np.zeros(len(ordered), dtype=bool),
                rest_positions=positions,
                neighbors=neighbors,
            )

        config = SimConfig(dt=1e-4, num_steps=1, record_every=1)
        sims = [
            Simulation(structure_with(nbrs), MAT, KP, config) for nbrs in (fast, slow)
        ]
        for sim in sims:
            sim.step()
        forces_identical = (
            forces_identical
            and np.array_equal(sims[0].a, sims[1].a)
            and np.array_equal(sims[0].u, sims[1].u)
            and np.array_equal(sims[0].v, sims[1].v)
        )
    elapsed = time.monotonic() - t0
    report(
        "oracle-equivalence",
        sets_equal and forces_identical and elapsed < 10.0,
        f"(50 structures, {elapsed:.2f}s)",
    )


def test_cli_contract(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("VOXELASTIC_SESSION", raising=False)
    scenario_path = str(resources.files("voxelastic") / "scenarios" / "desert_bridge.json")
    session = tmp_path / "session.json"

    code = cli_main(
        [
            "run",
            "--mode",
            "stress",
            "--radius",
            "30",
            "--seed",
            "0,0,0",
            "--world",
            scenario_path,
            "--out",
            str(tmp_path),
            "--session",
            str(session),
        ]
    )
    out = capsys.readouterr().out
    run_ok = (
        code == 0
        and "deflection: (" in out
        and "max von Mises: " in out
        and " Pa" in out
        and (tmp_path / "desert_bridge_result.json").exists()
        and (tmp_path / "desert_bridge_timeseries.csv").exists()
    )
    csv_first_line = (tmp_path / "desert_bridge_timeseries.csv").read_text().splitlines()[0]
    csv_ok = csv_first_line == CSV_HEADER == "step,time,ux,uy,uz,von_mises"

    code2 = cli_main(["properties", "ult_stress", "4000", "--session", str(session)])
    out2 = capsys.readouterr().out
    props_ok = code2 == 0 and "ult_stress" in out2 and "4000" in out2 and "Pa" in out2
    props_ok = props_ok and json.loads(session.read_text())["properties"]["ult_stress"] == 4000.0

    code3 = cli_main(
        [
            "run",
            "--mode",
            "elevation",
            "--radius",
            "30",
            "--seed",
            "0,0,0",
            "--world",
            scenario_path,
            "--session",
            str(session),
        ]
    )
    err3 = capsys.readouterr().err
    usage_ok = code3 != 0 and "mode" in err3

    report(
        "cli-contract",
        run_ok and csv_ok and props_ok and usage_ok,
        f"(run exit {code}, properties exit {code2}, bad-mode exit {code3})",
    )
