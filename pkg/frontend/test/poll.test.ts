import { describe, expect, it, vi } from "vitest";

import type { SolverApi } from "../src/api";
import { pollJob } from "../src/poll";
import type { JobSummary } from "../src/types";

function fakeApi(sequence: (JobSummary | Error)[]): SolverApi {
  let i = 0;
  return {
    getRun: vi.fn(async () => {
      const next = sequence[Math.min(i, sequence.length - 1)];
      i += 1;
      if (next instanceof Error) throw next;
      return next;
    }),
  } as unknown as SolverApi;
}

const running = (p: number): JobSummary => ({
  id: "j1",
  status: "running",
  progress: p,
  error: null,
  result: null,
});
const done: JobSummary = { id: "j1", status: "done", progress: 1, error: null, result: null };
const failed: JobSummary = {
  id: "j1",
  status: "failed",
  progress: 0.4,
  error: "no structural block within radius 2 of (9, 9, 9)",
  result: null,
};

describe("pollJob", () => {
  it("polls until the job is done and reports progress", async () => {
    const api = fakeApi([running(0.2), running(0.7), done]);
    const seen: number[] = [];
    const job = await pollJob(api, "j1", { intervalMs: 1, onProgress: (p) => seen.push(p) });
    expect(job.status).toBe("done");
    expect(seen).toEqual([0.2, 0.7, 1]);
  });

  it("resolves failed jobs so the UI can show the diagnostic verbatim", async () => {
    const api = fakeApi([running(0.1), failed]);
    const job = await pollJob(api, "j1", { intervalMs: 1 });
    expect(job.status).toBe("failed");
    expect(job.error).toContain("no structural block");
  });

  it("rejects on transport errors", async () => {
    const api = fakeApi([new Error("connection refused")]);
    await expect(pollJob(api, "j1", { intervalMs: 1 })).rejects.toThrow("connection refused");
  });

  it("aborts when the scene is reset", async () => {
    const controller = new AbortController();
    const api = fakeApi([running(0.1), running(0.2), running(0.3)]);
    const promise = pollJob(api, "j1", { intervalMs: 5, signal: controller.signal });
    setTimeout(() => controller.abort(), 8);
    await expect(promise).rejects.toMatchObject({ name: "AbortError" });
  });

  it("rejects immediately when the signal is already aborted", async () => {
    const controller = new AbortController();
    controller.abort();
    const api = fakeApi([done]);
    await expect(
      pollJob(api, "j1", { intervalMs: 1, signal: controller.signal })
    ).rejects.toMatchObject({ name: "AbortError" });
  });
});
