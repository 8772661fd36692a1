import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import type { WorldDocument } from "../src/types";
import { WorldModel, canonicalWorldJSON } from "../src/worldDoc";

const here = dirname(fileURLToPath(import.meta.url));
const fixture = (name: string) => readFileSync(join(here, "fixtures", name), "utf-8");

describe("WorldModel", () => {
  it("round-trips a document through the model", () => {
    const doc: WorldDocument = {
      ground_level: 0,
      blocks: [
        { x: 1, y: 0, z: 0, kind: "structural" },
        { x: 0, y: 0, z: 0, kind: "fixed" },
        { x: 0, y: 1, z: 0, kind: "load" },
      ],
    };
    const model = WorldModel.fromDocument(doc);
    expect(model.size).toBe(3);
    expect(model.get(0, 1, 0)).toBe("load");
    const out = model.toDocument();
    expect(out.blocks.map((b) => [b.x, b.y, b.z])).toEqual([
      [0, 0, 0],
      [0, 1, 0],
      [1, 0, 0],
    ]);
  });

  it("places, replaces, and erases blocks", () => {
    const model = new WorldModel(0);
    model.set(2, 3, 4, "structural");
    model.set(2, 3, 4, "load");
    expect(model.get(2, 3, 4)).toBe("load");
    expect(model.remove(2, 3, 4)).toBe(true);
    expect(model.remove(2, 3, 4)).toBe(false);
    expect(model.size).toBe(0);
  });

  it("suggests the first structural block as the seed", () => {
    const model = new WorldModel(0);
    model.set(5, 1, 0, "load");
    expect(model.defaultSeed()).toBeNull();
    model.set(7, 2, 1, "structural");
    model.set(3, 9, 9, "structural");
    expect(model.defaultSeed()).toEqual([3, 9, 9]);
  });
});

describe("canonicalWorldJSON", () => {
  it("matches the server's canonical bytes for the shared fixture", () => {
    const input = JSON.parse(fixture("world.input.json")) as WorldDocument;
    const expected = fixture("world.canonical.json").trimEnd();
    expect(canonicalWorldJSON(input)).toBe(expected);
  });

  it("is stable under round trips (save -> load -> save)", () => {
    const input = JSON.parse(fixture("world.input.json")) as WorldDocument;
    const first = canonicalWorldJSON(input);
    const reparsed = JSON.parse(first) as WorldDocument;
    expect(canonicalWorldJSON(reparsed)).toBe(first);
    const viaModel = WorldModel.fromDocument(reparsed).toDocument();
    expect(canonicalWorldJSON(viaModel)).toBe(first);
  });
});
