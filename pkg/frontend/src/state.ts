/**
 * Selection state and its URL round-trip.
 *
 * The state always holds a chart kind that is valid for its indicator
 * (the menu matrix below). Restoring from a query string is total:
 * anything invalid falls back to the default with a visible notice.
 */

export const INDICATORS = ["activity", "discipline", "funding", "qualification"] as const;
export type IndicatorId = (typeof INDICATORS)[number];

export const CHART_KINDS = [
  "bar",
  "line_series",
  "pie",
  "donut",
  "treemap",
  "bubble",
  "tagcloud",
] as const;
export type ChartKindId = (typeof CHART_KINDS)[number];

export const STATUSES = ["completed", "starting", "current"] as const;
export type StatusId = (typeof STATUSES)[number];

export const REGIONS = ["germany", "dach"] as const;
export type RegionId = (typeof REGIONS)[number];

/** Chart kinds offered per indicator; the first entry is the default. */
export const KIND_MATRIX: Record<IndicatorId, readonly ChartKindId[]> = {
  activity: ["bar", "line_series"],
  discipline: ["tagcloud", "pie", "donut", "treemap", "bubble"],
  funding: ["pie", "donut", "treemap", "bubble", "tagcloud", "line_series"],
  qualification: ["bar", "line_series"],
};

export interface SelectionState {
  indicator: IndicatorId;
  kind: ChartKindId;
  status: StatusId | null;
  region: RegionId;
  wholePeriod: boolean;
  yearFrom: number | null;
  yearTo: number | null;
}

export const DEFAULT_STATE: SelectionState = {
  indicator: "activity",
  kind: "bar",
  status: null,
  region: "dach",
  wholePeriod: true,
  yearFrom: null,
  yearTo: null,
};

export function kindsFor(indicator: IndicatorId): readonly ChartKindId[] {
  return KIND_MATRIX[indicator];
}

export function defaultKindFor(indicator: IndicatorId): ChartKindId {
  return KIND_MATRIX[indicator][0];
}

function isOneOf<T extends string>(value: string, options: readonly T[]): value is T {
  return (options as readonly string[]).includes(value);
}

export interface RestoreResult {
  state: SelectionState;
  notices: string[];
}

/**
 * Rebuild a selection from a query string (with or without leading "?").
 * Missing or invalid parameters fall back to the defaults and each
 * fallback is reported as a notice.
 */
export function restoreFromUrl(query: string): RestoreResult {
  const params = new URLSearchParams(query.startsWith("?") ? query.slice(1) : query);
  const notices: string[] = [];
  const state: SelectionState = { ...DEFAULT_STATE };

  const indicator = params.get("indicator");
  if (indicator !== null) {
    if (isOneOf(indicator, INDICATORS)) {
      state.indicator = indicator;
    } else {
      notices.push(`unknown indicator "${indicator}", showing ${DEFAULT_STATE.indicator}`);
    }
  }
  state.kind = defaultKindFor(state.indicator);

  const kind = params.get("kind");
  if (kind !== null) {
    if (isOneOf(kind, CHART_KINDS) && kindsFor(state.indicator).includes(kind)) {
      state.kind = kind;
    } else {
      notices.push(
        `chart kind "${kind}" is not available for ${state.indicator}, showing ${state.kind}`
      );
    }
  }

  const status = params.get("status");
  if (status !== null && status !== "") {
    if (isOneOf(status, STATUSES)) {
      state.status = status;
    } else {
      notices.push(`unknown status "${status}", showing all statuses`);
    }
  }

  const region = params.get("region");
  if (region !== null && region !== "") {
    if (isOneOf(region, REGIONS)) {
      state.region = region;
    } else {
      notices.push(`unknown region "${region}", showing the whole region`);
    }
  }

  const yearFrom = parseYear(params.get("from"));
  const yearTo = parseYear(params.get("to"));
  if (yearFrom.invalid) {
    notices.push(`"from" is not a year, showing the whole period`);
  }
  if (yearTo.invalid) {
    notices.push(`"to" is not a year, showing the whole period`);
  }
  if (yearFrom.value !== null && yearTo.value !== null && yearFrom.value > yearTo.value) {
    notices.push(`"from" exceeds "to", showing the whole period`);
  } else if (yearFrom.value !== null || yearTo.value !== null) {
    state.yearFrom = yearFrom.value;
    state.yearTo = yearTo.value;
    state.wholePeriod = false;
  }

  return { state, notices };
}

function parseYear(raw: string | null): { value: number | null; invalid: boolean } {
  if (raw === null || raw === "") {
    return { value: null, invalid: false };
  }
  const value = Number(raw);
  if (!Number.isInteger(value)) {
    return { value: null, invalid: true };
  }
  return { value, invalid: false };
}

/** Canonical query string for a state; restores to an equal state. */
export function serializeState(state: SelectionState): string {
  const params = new URLSearchParams();
  params.set("indicator", state.indicator);
  params.set("kind", state.kind);
  if (state.status !== null) {
    params.set("status", state.status);
  }
  if (state.region !== DEFAULT_STATE.region) {
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
  return params.toString();
}

/**
 * Merge a control change into the state, keeping the chart kind valid:
 * switching to an indicator that does not offer the current kind snaps
 * to that indicator's default kind.
 */
export function applySelection(
  state: SelectionState,
  patch: Partial<SelectionState>
): SelectionState {
  const next: SelectionState = { ...state, ...patch };
  if (!kindsFor(next.indicator).includes(next.kind)) {
    next.kind = defaultKindFor(next.indicator);
  }
  if (next.wholePeriod) {
    next.yearFrom = null;
    next.yearTo = null;
  }
  return next;
}
