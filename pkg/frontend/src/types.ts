/**
 * Wire types of the /api/v1 endpoints. Every number the UI shows comes
 * from these payloads; the client computes no counts of its own.
 */

export interface ResolvedFilter {
  status: string | null;
  region: string;
  year_from: number | null;
  year_to: number | null;
  whole_period: boolean;
}

export interface SeriesEntry {
  label: string;
  values: number[];
}

/** One geometry row; the concrete keys depend on the chart kind. */
export interface GeometryRow {
  label: string;
  [key: string]: string | number;
}

export interface ChartSpecPayload {
  kind: string;
  title: string;
  categories_or_years: (string | number)[];
  series: SeriesEntry[];
  style: { colors: Record<string, string> };
  geometry: GeometryRow[];
  meta: {
    indicator?: string;
    filter?: ResolvedFilter;
    snapshot?: string;
  };
  empty: boolean;
}

export interface ApiErrorBody {
  error: string;
  parameter?: string;
}

export interface CorpusSummaryPayload {
  snapshot: string;
  record_count: number;
  year_end_min: number | null;
  year_end_max: number | null;
}

export interface MetaSchemaPayload {
  snapshot: string;
  disciplinary_areas: string[];
  funding_types: string[];
  funding_labels: Record<string, string>;
  statuses: string[];
  regions: string[];
  indicators: Record<
    string,
    { title: string; granularities: string[]; chart_kinds: string[] }
  >;
}
