import { describe, expect, it, vi } from "vitest";

import { ApiError, SolverApi } from "../src/api";
import type { WorldDocument } from "../src/types";

function stubFetch(responses: Record<string, { status: number; body?: unknown; text?: string }>) {
  const calls: { url: string; init?: RequestInit }[] = [];
  const impl = vi.fn(async (url: string, init?: RequestInit) => {
    calls.push({ url, init });
    const key = `${init?.method ?? "GET"} ${url}`;
    const spec = responses[key];
    if (!spec) throw new Error(`unexpected request ${key}`);
    if (spec.status === 204) return new Response(null, { status: 204 });
    const text = spec.text ?? JSON.stringify(spec.body ?? {});
    return new Response(text, {
      status: spec.status,
      headers: { "content-type": "application/json" },
    });
  });
  return { impl, calls };
}

const world: WorldDocument = {
  ground_level: 0,
  blocks: [{ x: 0, y: 0, z: 0, kind: "structural" }],
};

describe("SolverApi", () => {
  it("saves the world in canonical form", async () => {
    const { impl, calls } = stubFetch({ "PUT /world": { status: 204, text: "" } });
    const api = new SolverApi("", impl);
    await api.putWorld(world);
    expect(calls[0].init?.body).toBe(
      '{"blocks":[{"kind":"structural","x":0,"y":0,"z":0}],"ground_level":0}'
    );
  });

  it("submits runs and returns the job id", async () => {
    const { impl, calls } = stubFetch({ "POST /runs": { status: 202, body: { id: "abc" } } });
    const api = new SolverApi("", impl);
    const id = await api.submitRun({ mode: "stress", radius: 30, seed: [0, 1, 0] });
    expect(id).toBe("abc");
    expect(JSON.parse(String(calls[0].init?.body))).toMatchObject({
      mode: "stress",
      radius: 30,
      seed: [0, 1, 0],
    });
  });

  it("surfaces the server's diagnostic detail on errors", async () => {
    const { impl } = stubFetch({
      "POST /runs": { status: 422, body: { detail: "no structural block within radius" } },
    });
    const api = new SolverApi("", impl);
    await expect(
      api.submitRun({ mode: "stress", radius: 2, seed: [9, 9, 9] })
    ).rejects.toThrow("no structural block within radius");
    await expect(
      api.submitRun({ mode: "stress", radius: 2, seed: [9, 9, 9] })
    ).rejects.toBeInstanceOf(ApiError);
  });

  it("fetches frames and scenarios from their endpoints", async () => {
    const { impl, calls } = stubFetch({
      "GET /runs/j9/frames": { status: 200, body: { frames: [{ step: 0 }] } },
      "GET /scenarios": { status: 200, body: { scenarios: ["desert_bridge"] } },
    });
    const api = new SolverApi("", impl);
    expect(await api.getFrames("j9")).toHaveLength(1);
    expect(await api.listScenarios()).toEqual(["desert_bridge"]);
    expect(calls.map((c) => c.url)).toEqual(["/runs/j9/frames", "/scenarios"]);
  });

  it("prefixes a base URL", async () => {
    const { impl, calls } = stubFetch({
      "POST http://localhost:8420/reset": { status: 204, text: "" },
    });
    const api = new SolverApi("http://localhost:8420/", impl);
    await api.reset();
    expect(calls[0].url).toBe("http://localhost:8420/reset");
  });
});
