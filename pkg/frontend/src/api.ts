/**
 * Typed client for the /api/v1 endpoints.
 *
 * The fetch function is injected so tests can count and script requests;
 * the browser bootstrap passes the real one. Validation errors surface
 * as ApiValidationError carrying the offending parameter name.
 */

import type { SelectionState } from "./state.js";
import type {
  ApiErrorBody,
  ChartSpecPayload,
  CorpusSummaryPayload,
  MetaSchemaPayload,
} from "./types.js";

export interface ResponseLike {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: { signal?: AbortSignal }
) => Promise<ResponseLike>;

export class ApiValidationError extends Error {
  readonly status: number;
  readonly parameter: string | null;

  constructor(status: number, body: ApiErrorBody) {
    super(body.error);
    this.name = "ApiValidationError";
    this.status = status;
    this.parameter = body.parameter ?? null;
  }
}

/** Query string for a chart request; server defaults are omitted. */
export function chartRequestPath(state: SelectionState): string {
  const params = new URLSearchParams();
  params.set("kind", state.kind);
  if (state.status !== null) {
    params.set("status", state.status);
  }
  if (state.region !== "dach") {
    params.set("region", state.region);
  }
  if (!state.wholePeriod) {
    if (state.yearFrom !== null) {
      params.set("from", String(state.yearFrom));
    }
    if (state.yearTo !== null) {
      params.set("to", String(state.yearTo));
    }
  }
  return `/api/v1/charts/${state.indicator}?${params.toString()}`;
}

export class FieldmonApi {
  private readonly fetchFn: FetchLike;
  private readonly base: string;

  constructor(fetchFn?: FetchLike, base = "") {
    this.fetchFn =
      fetchFn ?? ((url, init) => globalThis.fetch(url, init) as Promise<ResponseLike>);
    this.base = base;
  }

  private async get<T>(path: string, signal?: AbortSignal): Promise<T> {
    const response = await this.fetchFn(this.base + path, { signal });
    if (!response.ok) {
      const body = (await response.json().catch(() => ({ error: "request failed" }))) as
        ApiErrorBody;
      throw new ApiValidationError(response.status, body);
    }
    return (await response.json()) as T;
  }

  chart(state: SelectionState, signal?: AbortSignal): Promise<ChartSpecPayload> {
    return this.get<ChartSpecPayload>(chartRequestPath(state), signal);
  }

  summary(): Promise<CorpusSummaryPayload> {
    return this.get<CorpusSummaryPayload>("/api/v1/corpus/summary");
  }

  metaSchema(): Promise<MetaSchemaPayload> {
    return this.get<MetaSchemaPayload>("/api/v1/meta/schema");
  }
}
