import { describe, expect, it } from "vitest";

import { ApiValidationError, FieldmonApi, chartRequestPath } from "../src/api.js";
import type { FetchLike } from "../src/api.js";
import { DEFAULT_STATE } from "../src/state.js";

function jsonResponse(body: unknown, status = 200) {
  return {
    ok: status < 400,
    status,
    json: async () => body,
  };
}

describe("chartRequestPath", () => {
  it("builds the default request", () => {
    expect(chartRequestPath(DEFAULT_STATE)).toBe("/api/v1/charts/activity?kind=bar");
  });

  it("carries every non-default facet", () => {
    const path = chartRequestPath({
      indicator: "funding",
      kind: "pie",
      status: "completed",
      region: "germany",
      wholePeriod: false,
      yearFrom: 1995,
      yearTo: 2009,
    });
    expect(path).toBe(
      "/api/v1/charts/funding?kind=pie&status=completed&region=germany&from=1995&to=2009"
    );
  });

  it("omits year bounds for the whole period", () => {
    const path = chartRequestPath({ ...DEFAULT_STATE, yearFrom: 1999, yearTo: 2001 });
    expect(path).not.toContain("from=");
  });
});

describe("FieldmonApi", () => {
  it("parses a successful chart response", async () => {
    const seen: string[] = [];
    const fetchFn: FetchLike = async (url) => {
      seen.push(url);
      return jsonResponse({ kind: "bar", empty: false });
    };
    const api = new FieldmonApi(fetchFn);
    const spec = await api.chart(DEFAULT_STATE);
    expect(spec.kind).toBe("bar");
    expect(seen).toEqual(["/api/v1/charts/activity?kind=bar"]);
  });

  it("raises ApiValidationError carrying the offending parameter", async () => {
    const fetchFn: FetchLike = async () =>
      jsonResponse({ error: "'from' must not exceed 'to'", parameter: "from" }, 400);
    const api = new FieldmonApi(fetchFn);
    await expect(api.chart(DEFAULT_STATE)).rejects.toMatchObject({
      name: "ApiValidationError",
      parameter: "from",
      status: 400,
    });
  });

  it("passes the abort signal through to fetch", async () => {
    let received: AbortSignal | undefined;
    const fetchFn: FetchLike = async (_url, init) => {
      received = init?.signal;
      return jsonResponse({ kind: "bar" });
    };
    const controller = new AbortController();
    await new FieldmonApi(fetchFn).chart(DEFAULT_STATE, controller.signal);
    expect(received).toBe(controller.signal);
  });

  it("prefixes a base URL when given", async () => {
    const seen: string[] = [];
    const fetchFn: FetchLike = async (url) => {
      seen.push(url);
      return jsonResponse({});
    };
    await new FieldmonApi(fetchFn, "http://example.test").summary();
    expect(seen).toEqual(["http://example.test/api/v1/corpus/summary"]);
  });

  it("wraps non-JSON failures as a generic validation error", async () => {
    const fetchFn: FetchLike = async () => ({
      ok: false,
      status: 502,
      json: async () => {
        throw new Error("not json");
      },
    });
    await expect(new FieldmonApi(fetchFn).summary()).rejects.toBeInstanceOf(
      ApiValidationError
    );
  });
});
