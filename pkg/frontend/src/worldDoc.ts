/**
 * Client-side world model: a sparse block map plus the canonical JSON
 * serialization that matches the server's byte-for-byte (keys sorted,
 * compact separators, blocks ordered by coordinate).
 */
import type { Block, BlockKind, WorldDocument } from "./types";

export type CoordKey = string;

export function key(x: number, y: number, z: number): CoordKey {
  return `${x},${y},${z}`;
}

export function parseKey(k: CoordKey): [number, number, number] {
  const [x, y, z] = k.split(",").map(Number);
  return [x, y, z];
}

export class WorldModel {
  groundLevel: number;
  private blocks: Map<CoordKey, BlockKind>;

  constructor(groundLevel = 0) {
    this.groundLevel = groundLevel;
    this.blocks = new Map();
  }

  static fromDocument(doc: WorldDocument): WorldModel {
    const model = new WorldModel(doc.ground_level);
    for (const b of doc.blocks) {
      model.blocks.set(key(b.x, b.y, b.z), b.kind);
    }
    return model;
  }

  get size(): number {
    return this.blocks.size;
  }

  get(x: number, y: number, z: number): BlockKind | undefined {
    return this.blocks.get(key(x, y, z));
  }

  set(x: number, y: number, z: number, kind: BlockKind): void {
    this.blocks.set(key(x, y, z), kind);
  }

  remove(x: number, y: number, z: number): boolean {
    return this.blocks.delete(key(x, y, z));
  }

  clear(): void {
    this.blocks.clear();
  }

  entries(): [CoordKey, BlockKind][] {
    return [...this.blocks.entries()];
  }

  /** Blocks sorted by (x, y, z), the order the server canonicalizes to. */
  sortedBlocks(): Block[] {
    const rows: Block[] = [];
    for (const [k, kind] of this.blocks.entries()) {
      const [x, y, z] = parseKey(k);
      rows.push({ x, y, z, kind });
    }
    rows.sort((a, b) => a.x - b.x || a.y - b.y || a.z - b.z);
    return rows;
  }

  toDocument(): WorldDocument {
    return { ground_level: this.groundLevel, blocks: this.sortedBlocks() };
  }

  /** First structural block in canonical order; a sensible default seed. */
  defaultSeed(): [number, number, number] | null {
    for (const b of this.sortedBlocks()) {
      if (b.kind === "structural") return [b.x, b.y, b.z];
    }
    return null;
  }
}

/**
 * Serialize exactly like the server does (json.dumps with sorted keys and
 * compact separators), so a save/load round trip is byte-equal.
 */
export function canonicalWorldJSON(doc: WorldDocument): string {
  const blocks = [...doc.blocks].sort((a, b) => a.x - b.x || a.y - b.y || a.z - b.z);
  const parts = blocks.map(
    (b) => `{"kind":${JSON.stringify(b.kind)},"x":${b.x},"y":${b.y},"z":${b.z}}`
  );
  return `{"blocks":[${parts.join(",")}],"ground_level":${doc.ground_level}}`;
}
