/**
 * Thin client over the solver service. All numerical truth lives on the
 * server; this module only moves JSON around.
 */
import type {
  Frame,
  JobSummary,
  PropertyRow,
  RunRequest,
  ScenarioDocument,
  WorldDocument,
} from "./types";
import { canonicalWorldJSON } from "./worldDoc";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  status: number;

  constructor(status: number, detail: string) {
    super(detail);
    this.status = status;
  }
}

async function detail(resp: Response): Promise<string> {
  try {
    const body = (await resp.json()) as { detail?: string };
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    /* non-JSON error body */
  }
  return `HTTP ${resp.status}`;
}

export class SolverApi {
  private base: string;
  private fetchImpl: FetchLike;

  constructor(base = "", fetchImpl?: FetchLike) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const resp = await this.fetchImpl(this.base + path, init);
    if (!resp.ok) {
      throw new ApiError(resp.status, await detail(resp));
    }
    return resp;
  }

  async putWorld(doc: WorldDocument): Promise<void> {
    await this.request("/world", {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: canonicalWorldJSON(doc),
    });
  }

  async getWorldText(): Promise<string> {
    return (await this.request("/world")).text();
  }

  async getWorld(): Promise<WorldDocument> {
    return JSON.parse(await this.getWorldText()) as WorldDocument;
  }

  async getProperties(): Promise<PropertyRow[]> {
    const body = (await (await this.request("/properties")).json()) as {
      properties: PropertyRow[];
    };
    return body.properties;
  }

  async patchProperties(values: Record<string, number | string>): Promise<PropertyRow[]> {
    const resp = await this.request("/properties", {
      method: "PATCH",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(values),
    });
    return ((await resp.json()) as { properties: PropertyRow[] }).properties;
  }

  async setSpecialBlock(coord: [number, number, number] | null): Promise<void> {
    await this.request("/special-block", {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ coord }),
    });
  }

  async submitRun(req: RunRequest): Promise<string> {
    const resp = await this.request("/runs", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(req),
    });
    return ((await resp.json()) as { id: string }).id;
  }

  async getRun(id: string): Promise<JobSummary> {
    return (await (await this.request(`/runs/${id}`)).json()) as JobSummary;
  }

  async getFrames(id: string): Promise<Frame[]> {
    const body = (await (await this.request(`/runs/${id}/frames`)).json()) as {
      frames: Frame[];
    };
    return body.frames;
  }

  async reset(): Promise<void> {
    await this.request("/reset", { method: "POST" });
  }

  async listScenarios(): Promise<string[]> {
    const body = (await (await this.request("/scenarios")).json()) as {
      scenarios: string[];
    };
    return body.scenarios;
  }

  async getScenario(name: string): Promise<ScenarioDocument> {
    return (await (await this.request(`/scenarios/${name}`)).json()) as ScenarioDocument;
  }
}
