/**
 * Poll a run job until it leaves the pending/running states. Resolves
 * with the final summary for both success and solver failure; rejects on
 * transport errors or when the abort signal fires (scene reset).
 */
import type { SolverApi } from "./api";
import type { JobSummary } from "./types";

export interface PollOptions {
  intervalMs?: number;
  signal?: AbortSignal;
  onProgress?: (progress: number) => void;
}

export function pollJob(
  api: SolverApi,
  jobId: string,
  options: PollOptions = {}
): Promise<JobSummary> {
  const interval = options.intervalMs ?? 250;
  return new Promise((resolve, reject) => {
    let timer: ReturnType<typeof setTimeout> | null = null;
    const onAbort = () => {
      if (timer !== null) clearTimeout(timer);
      reject(new DOMException("polling aborted", "AbortError"));
    };
    if (options.signal) {
      if (options.signal.aborted) {
        onAbort();
        return;
      }
      options.signal.addEventListener("abort", onAbort, { once: true });
    }
    const tick = async () => {
      let job: JobSummary;
      try {
        job = await api.getRun(jobId);
      } catch (err) {
        options.signal?.removeEventListener("abort", onAbort);
        reject(err);
        return;
      }
      if (options.signal?.aborted) return;
      options.onProgress?.(job.progress);
      if (job.status === "done" || job.status === "failed") {
        options.signal?.removeEventListener("abort", onAbort);
        resolve(job);
        return;
      }
      timer = setTimeout(tick, interval);
    };
    void tick();
  });
}
