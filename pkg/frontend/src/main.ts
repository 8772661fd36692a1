/**
 * Wires the editor state, the 3D scene, and the solver API into the
 * build -> solve -> redesign loop. Physics never runs in the browser;
 * every number displayed comes from the service.
 */
import { ApiError, SolverApi } from "./api";
import { drawDeflectionChart } from "./chart";
import { EditorState } from "./editor";
import { pollJob } from "./poll";
import { VoxelScene } from "./scene";
import type { Frame, RunMode, Tool } from "./types";
import { WorldModel } from "./worldDoc";

const api = new SolverApi("");
const editor = new EditorState();

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const scene = new VoxelScene(canvas, editor);
const chartCanvas = document.getElementById("chart") as HTMLCanvasElement;
const statusEl = document.getElementById("status")!;
const bannerEl = document.getElementById("banner")!;
const diagnosticsEl = document.getElementById("diagnostics")!;
const progressEl = document.getElementById("progress") as HTMLProgressElement;
const playbackEl = document.getElementById("playback") as HTMLInputElement;

let pollAbort: AbortController | null = null;
let frames: Frame[] = [];

function setStatus(text: string): void {
  statusEl.textContent = text;
}

function setBanner(overLimit: boolean, maxVm: number | null, limit: number | null): void {
  if (maxVm === null) {
    bannerEl.className = "banner hidden";
    bannerEl.textContent = "";
  } else if (overLimit) {
    bannerEl.className = "banner over";
    bannerEl.textContent = `OVER LIMIT: max von Mises ${fmtPa(maxVm)} exceeds ${fmtPa(limit!)}`;
  } else {
    bannerEl.className = "banner ok";
    bannerEl.textContent = `within limit: max von Mises ${fmtPa(maxVm)} <= ${fmtPa(limit!)}`;
  }
}

function fmtPa(v: number): string {
  return v >= 1000 ? `${(v / 1000).toFixed(2)} kPa` : `${v.toFixed(1)} Pa`;
}

function refresh(): void {
  scene.rebuild();
  scene.render();
  setStatus(editor.statusMessage || "ready");
}

// -- tools -------------------------------------------------------------------
for (const button of document.querySelectorAll<HTMLButtonElement>("[data-tool]")) {
  button.addEventListener("click", () => {
    editor.tool = button.dataset.tool as Tool;
    document
      .querySelectorAll("[data-tool]")
      .forEach((b) => b.classList.toggle("active", b === button));
    setStatus(`tool: ${editor.tool}`);
  });
}

canvas.addEventListener("pointerdown", (e) => {
  if (e.button !== 0 || e.shiftKey) return; // left click edits, shift orbits
  const hit = scene.pick(e.clientX, e.clientY);
  if (!hit) return;
  const cell = editor.tool === "erase" || editor.tool === "inspect" ? hit.coord : hit.adjacent;
  editor.editBlock(cell[0], cell[1], cell[2]);
  refresh();
});

// -- presets -----------------------------------------------------------------
async function loadPreset(name: string): Promise<void> {
  cancelPolling();
  if (name === "sandbox") {
    editor.clearAll();
    await api.putWorld(editor.world.toDocument());
    editor.markSaved();
    refresh();
    return;
  }
  const scenario = await api.getScenario(name);
  editor.loadWorld(WorldModel.fromDocument(scenario.world));
  await api.putWorld(editor.world.toDocument());
  await api.patchProperties(scenario.properties);
  editor.markSaved();
  const preset = scenario.runs[0];
  if (preset) {
    (document.getElementById("radius") as HTMLInputElement).value = String(preset.radius);
    (document.getElementById("seed") as HTMLInputElement).value = preset.seed.join(",");
    (document.getElementById("mode") as HTMLSelectElement).value = preset.mode;
    await api.setSpecialBlock(preset.special_block);
  }
  editor.statusMessage = `loaded ${name}`;
  refresh();
}

document.getElementById("preset")!.addEventListener("change", (e) => {
  const name = (e.target as HTMLSelectElement).value;
  if (name) void loadPreset(name).catch((err) => setStatus(`error: ${errText(err)}`));
});

// -- save / run / reset --------------------------------------------------------
function errText(err: unknown): string {
  if (err instanceof ApiError) return err.message;
  return err instanceof Error ? err.message : String(err);
}

async function saveWorld(): Promise<void> {
  await api.putWorld(editor.world.toDocument());
  editor.markSaved();
  setStatus("world saved");
}

document.getElementById("save")!.addEventListener("click", () => {
  void saveWorld().catch((err) => setStatus(`error: ${errText(err)}`));
});

function cancelPolling(): void {
  pollAbort?.abort();
  pollAbort = null;
  progressEl.classList.add("hidden");
}

async function runAndDisplay(): Promise<void> {
  const mode = (document.getElementById("mode") as HTMLSelectElement).value as RunMode;
  const radius = Number((document.getElementById("radius") as HTMLInputElement).value) || 30;
  const seedText = (document.getElementById("seed") as HTMLInputElement).value.trim();
  let seed: [number, number, number] | null = null;
  if (seedText) {
    const parts = seedText.split(",").map((s) => Number(s.trim()));
    if (parts.length === 3 && parts.every(Number.isInteger)) {
      seed = parts as [number, number, number];
    } else {
      setStatus("seed must be x,y,z integers");
      return;
    }
  } else {
    seed = editor.world.defaultSeed();
  }
  if (!seed) {
    setStatus("place a structural block first");
    return;
  }

  if (editor.dirty) await saveWorld();
  const jobId = await api.submitRun({
    mode,
    radius,
    seed,
    record_frames: true,
    record_every: 100,
  });
  setStatus(`running ${jobId}...`);
  progressEl.classList.remove("hidden");
  progressEl.value = 0;

  cancelPollingOnly();
  pollAbort = new AbortController();
  const job = await pollJob(api, jobId, {
    intervalMs: 300,
    signal: pollAbort.signal,
    onProgress: (p) => (progressEl.value = p),
  });
  progressEl.classList.add("hidden");

  if (job.status === "failed" || !job.result) {
    setStatus(`solver error: ${job.error ?? "unknown"}`);
    return;
  }
  const result = job.result;
  editor.applyResult(result);
  setBanner(editor.overLimit(), result.max_von_mises, result.ult_stress);
  diagnosticsEl.textContent = result.diagnostics.join("\n");
  drawDeflectionChart(chartCanvas, result.time_series);
  frames = await api.getFrames(jobId);
  playbackEl.max = String(Math.max(frames.length - 1, 0));
  playbackEl.value = playbackEl.max;
  playbackEl.classList.toggle("hidden", frames.length === 0);
  const u = result.tracked_deflection;
  editor.statusMessage =
    `deflection (${u[0].toExponential(3)}, ${u[1].toExponential(3)}, ${u[2].toExponential(3)}) m; ` +
    `max von Mises ${fmtPa(result.max_von_mises)}`;
  refresh();
}

function cancelPollingOnly(): void {
  pollAbort?.abort();
  pollAbort = null;
}

document.getElementById("run")!.addEventListener("click", () => {
  void runAndDisplay().catch((err) => {
    progressEl.classList.add("hidden");
    if ((err as Error).name !== "AbortError") setStatus(`error: ${errText(err)}`);
  });
});

document.getElementById("reset")!.addEventListener("click", () => {
  cancelPolling();
  editor.clearResult();
  setBanner(false, null, null);
  diagnosticsEl.textContent = "";
  frames = [];
  playbackEl.classList.add("hidden");
  void api.reset().catch(() => undefined);
  editor.statusMessage = "result state cleared";
  refresh();
});

// -- deformation playback --------------------------------------------------------
playbackEl.addEventListener("input", () => {
  const frame = frames[Number(playbackEl.value)];
  if (frame) {
    scene.showFrame(frame);
    scene.render();
    setStatus(`t = ${frame.time.toFixed(3)} s`);
  }
});

document.getElementById("play")!.addEventListener("click", () => {
  if (!frames.length) return;
  let i = 0;
  const tick = () => {
    if (i >= frames.length) return;
    playbackEl.value = String(i);
    scene.showFrame(frames[i]);
    scene.render();
    i += 1;
    requestAnimationFrame(tick);
  };
  tick();
});

// -- boot ---------------------------------------------------------------------
function fitCanvas(): void {
  const rect = canvas.parentElement!.getBoundingClientRect();
  scene.resize(rect.width, rect.height);
  scene.render();
}
window.addEventListener("resize", fitCanvas);

async function boot(): Promise<void> {
  try {
    const names = await api.listScenarios();
    const select = document.getElementById("preset") as HTMLSelectElement;
    for (const name of names) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      select.appendChild(option);
    }
  } catch (err) {
    setStatus(`service unreachable: ${errText(err)}`);
  }
  try {
    editor.loadWorld(WorldModel.fromDocument(await api.getWorld()));
    editor.markSaved();
  } catch {
    /* no world on the server yet */
  }
  fitCanvas();
  refresh();
}

void boot();
