/**
 * Editor state: the block model, the active tool, the heat-map overlay,
 * and the last run's per-block coloring. Pure logic, no DOM.
 *
 * The editor never bins values itself: bins and exceedance flags come
 * from the server result verbatim, and a block's color is always
 * PALETTE[bin].
 */
import { PALETTE } from "./palette";
import type { BlockKind, Overlay, RunResult, Tool } from "./types";
import { WorldModel, key, type CoordKey } from "./worldDoc";

export interface BuildVolume {
  min: [number, number, number];
  max: [number, number, number];
}

export const DEFAULT_VOLUME: BuildVolume = { min: [-32, 0, -32], max: [32, 32, 32] };

const TOOL_KINDS: Partial<Record<Tool, BlockKind>> = {
  "place-structural": "structural",
  "place-load": "load",
};

export interface BlockVisual {
  bin: number | null; // null: no overlay value for this block
  exceeds: boolean;
}

export class EditorState {
  world: WorldModel;
  tool: Tool = "place-structural";
  overlay: Overlay = "none";
  dirty = false;
  statusMessage = "";
  volume: BuildVolume;
  private bins: Map<CoordKey, number> = new Map();
  private exceeds: Map<CoordKey, boolean> = new Map();
  lastResult: RunResult | null = null;

  constructor(volume: BuildVolume = DEFAULT_VOLUME) {
    this.world = new WorldModel(0);
    this.volume = volume;
  }

  inVolume(x: number, y: number, z: number): boolean {
    const { min, max } = this.volume;
    return (
      x >= min[0] && x <= max[0] && y >= min[1] && y <= max[1] && z >= min[2] && z <= max[2]
    );
  }

  /** Apply the active tool at a cell. Returns true when the world changed. */
  editBlock(x: number, y: number, z: number): boolean {
    if (!this.inVolume(x, y, z)) {
      this.statusMessage = `(${x}, ${y}, ${z}) is outside the build volume`;
      return false;
    }
    if (this.tool === "inspect") {
      const kind = this.world.get(x, y, z);
      const bin = this.bins.get(key(x, y, z));
      this.statusMessage = kind
        ? `(${x}, ${y}, ${z}): ${kind}${bin !== undefined ? `, bin ${bin}` : ""}`
        : `(${x}, ${y}, ${z}): empty`;
      return false;
    }
    if (this.tool === "erase") {
      const removed = this.world.remove(x, y, z);
      if (removed) {
        this.markDirty();
        this.statusMessage = `erased (${x}, ${y}, ${z})`;
      }
      return removed;
    }
    const kind = TOOL_KINDS[this.tool];
    if (!kind) return false;
    if (this.world.get(x, y, z) === kind) return false;
    this.world.set(x, y, z, kind);
    this.markDirty();
    this.statusMessage = `placed ${kind} at (${x}, ${y}, ${z})`;
    return true;
  }

  markDirty(): void {
    this.dirty = true;
  }

  /** Called once the server acknowledged the save. */
  markSaved(): void {
    this.dirty = false;
  }

  loadWorld(model: WorldModel): void {
    this.world = model;
    this.clearResult();
    this.markDirty();
  }

  clearAll(): void {
    this.world = new WorldModel(0);
    this.clearResult();
    this.markDirty();
    this.statusMessage = "sandbox cleared";
  }

  clearResult(): void {
    this.bins.clear();
    this.exceeds.clear();
    this.lastResult = null;
    this.overlay = "none";
  }

  applyResult(result: RunResult): void {
    this.lastResult = result;
    this.bins.clear();
    this.exceeds.clear();
    result.particles.forEach(([x, y, z], i) => {
      this.bins.set(key(x, y, z), result.bins[i]);
      this.exceeds.set(key(x, y, z), result.exceeds_ultimate[i]);
    });
    this.overlay = result.mode === "stress" ? "stress-bins" : "position-bins";
  }

  /** Any block above the ultimate stress in the last run. */
  overLimit(): boolean {
    for (const v of this.exceeds.values()) {
      if (v) return true;
    }
    return false;
  }

  visual(x: number, y: number, z: number): BlockVisual {
    const k = key(x, y, z);
    return {
      bin: this.overlay === "none" ? null : this.bins.get(k) ?? null,
      exceeds: this.exceeds.get(k) ?? false,
    };
  }

  /** Display color: the vendored palette indexed by the server's bin. */
  colorOf(x: number, y: number, z: number): string | null {
    const v = this.visual(x, y, z);
    return v.bin === null ? null : PALETTE[v.bin];
  }
}
