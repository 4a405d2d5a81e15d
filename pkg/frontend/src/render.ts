/**
 * Client-side rendering of chart specs to SVG markup.
 *
 * Strictly presentational: wedge angles, rectangle and circle geometry
 * and font sizes are taken from the spec as the server computed them;
 * series values are only scaled to pixels. Every number shown (value
 * labels, legend counts) is copied verbatim from the payload.
 */

import type { ChartSpecPayload, ResolvedFilter } from "./types.js";

const WIDTH = 760;
const HEIGHT = 460;
const PLOT = { x: 64, y: 48, w: 500, h: 350 };

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(value: number): string {
  return value.toFixed(2);
}

function text(
  x: number,
  y: number,
  content: string,
  size = 12,
  anchor = "start",
  color = "#222"
): string {
  return (
    `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${fmt(size)}" fill="${color}" ` +
    `text-anchor="${anchor}" font-family="sans-serif">${esc(content)}</text>`
  );
}

function legend(entries: { label: string; color: string; note?: string }[]): string[] {
  const x = PLOT.x + PLOT.w + 16;
  return entries.map((entry, index) => {
    const y = PLOT.y + index * 18;
    const label = entry.note === undefined ? entry.label : `${entry.label} (${entry.note})`;
    return (
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="12" height="12" fill="${entry.color}"/>` +
      text(x + 18, y + 10, label, 11)
    );
  });
}

function maxValue(spec: ChartSpecPayload): number {
  let max = 1;
  for (const series of spec.series) {
    for (const value of series.values) {
      if (value > max) {
        max = value;
      }
    }
  }
  return max;
}

function axes(max: number): string[] {
  const parts = [
    `<line x1="${fmt(PLOT.x)}" y1="${fmt(PLOT.y + PLOT.h)}" x2="${fmt(PLOT.x + PLOT.w)}" ` +
      `y2="${fmt(PLOT.y + PLOT.h)}" stroke="#444"/>`,
    `<line x1="${fmt(PLOT.x)}" y1="${fmt(PLOT.y)}" x2="${fmt(PLOT.x)}" ` +
      `y2="${fmt(PLOT.y + PLOT.h)}" stroke="#444"/>`,
  ];
  for (let step = 1; step <= 4; step += 1) {
    const y = PLOT.y + PLOT.h - (PLOT.h * step) / 4;
    parts.push(
      `<line x1="${fmt(PLOT.x)}" y1="${fmt(y)}" x2="${fmt(PLOT.x + PLOT.w)}" y2="${fmt(
        y
      )}" stroke="#ddd"/>`
    );
    parts.push(text(PLOT.x - 6, y + 4, String(Math.round((max * step) / 4)), 10, "end"));
  }
  return parts;
}

function yearLabels(spec: ChartSpecPayload): string[] {
  const years = spec.categories_or_years;
  const step = Math.max(1, Math.ceil(years.length / 14));
  const slot = PLOT.w / years.length;
  const parts: string[] = [];
  years.forEach((year, index) => {
    if (index % step === 0) {
      parts.push(
        text(PLOT.x + slot * (index + 0.5), PLOT.y + PLOT.h + 16, String(year), 10, "middle")
      );
    }
  });
  return parts;
}

function renderBar(spec: ChartSpecPayload): string[] {
  const max = maxValue(spec);
  const parts = [...axes(max), ...yearLabels(spec)];
  const slot = PLOT.w / spec.categories_or_years.length;
  const barWidth = (slot * 0.8) / spec.series.length;
  spec.series.forEach((series, seriesIndex) => {
    const color = spec.style.colors[series.label];
    series.values.forEach((value, index) => {
      const height = (PLOT.h * value) / max;
      const x = PLOT.x + slot * index + slot * 0.1 + barWidth * seriesIndex;
      parts.push(
        `<rect x="${fmt(x)}" y="${fmt(PLOT.y + PLOT.h - height)}" width="${fmt(
          barWidth
        )}" height="${fmt(height)}" fill="${color}"><title>${esc(
          `${series.label} ${spec.categories_or_years[index]}: ${value}`
        )}</title></rect>`
      );
    });
  });
  parts.push(
    ...legend(spec.series.map((s) => ({ label: s.label, color: spec.style.colors[s.label] })))
  );
  return parts;
}

function renderLineSeries(spec: ChartSpecPayload): string[] {
  const max = maxValue(spec);
  const parts = [...axes(max), ...yearLabels(spec)];
  const slot = PLOT.w / spec.categories_or_years.length;
  for (const series of spec.series) {
    const color = spec.style.colors[series.label];
    const points = series.values
      .map(
        (value, index) =>
          `${fmt(PLOT.x + slot * (index + 0.5))},${fmt(PLOT.y + PLOT.h - (PLOT.h * value) / max)}`
      )
      .join(" ");
    parts.push(
      `<polyline points="${points}" fill="none" stroke="${color}" stroke-width="2"/>`
    );
  }
  parts.push(
    ...legend(spec.series.map((s) => ({ label: s.label, color: spec.style.colors[s.label] })))
  );
  return parts;
}

function wedgePath(
  cx: number,
  cy: number,
  rOuter: number,
  rInner: number,
  startDeg: number,
  sweepDeg: number
): string {
  const a0 = ((startDeg - 90) * Math.PI) / 180;
  const a1 = ((startDeg + sweepDeg - 90) * Math.PI) / 180;
  const large = sweepDeg > 180 ? 1 : 0;
  const x0 = cx + rOuter * Math.cos(a0);
  const y0 = cy + rOuter * Math.sin(a0);
  const x1 = cx + rOuter * Math.cos(a1);
  const y1 = cy + rOuter * Math.sin(a1);
  if (rInner <= 0) {
    return `M ${fmt(cx)} ${fmt(cy)} L ${fmt(x0)} ${fmt(y0)} A ${fmt(rOuter)} ${fmt(
      rOuter
    )} 0 ${large} 1 ${fmt(x1)} ${fmt(y1)} Z`;
  }
  const xi1 = cx + rInner * Math.cos(a1);
  const yi1 = cy + rInner * Math.sin(a1);
  const xi0 = cx + rInner * Math.cos(a0);
  const yi0 = cy + rInner * Math.sin(a0);
  return (
    `M ${fmt(x0)} ${fmt(y0)} A ${fmt(rOuter)} ${fmt(rOuter)} 0 ${large} 1 ${fmt(x1)} ${fmt(
      y1
    )} ` + `L ${fmt(xi1)} ${fmt(yi1)} A ${fmt(rInner)} ${fmt(rInner)} 0 ${large} 0 ${fmt(
      xi0
    )} ${fmt(yi0)} Z`
  );
}

function renderPie(spec: ChartSpecPayload): string[] {
  const cx = PLOT.x + PLOT.w / 2;
  const cy = PLOT.y + PLOT.h / 2;
  const rOuter = Math.min(PLOT.w, PLOT.h) / 2 - 4;
  const rInner = spec.kind === "donut" ? rOuter * 0.55 : 0;
  const parts: string[] = [];
  for (const row of spec.geometry) {
    const sweep = row.sweep as number;
    if (sweep <= 0) {
      continue;
    }
    const color = spec.style.colors[row.label];
    if (sweep >= 359.999) {
      parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(rOuter)}" fill="${color}"/>`);
      if (rInner > 0) {
        parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(rInner)}" fill="#fff"/>`);
      }
      continue;
    }
    parts.push(
      `<path d="${wedgePath(cx, cy, rOuter, rInner, row.start_angle as number, sweep)}" ` +
        `fill="${color}" stroke="#fff"/>`
    );
  }
  const values = spec.series[0]?.values ?? [];
  parts.push(
    ...legend(
      spec.categories_or_years.map((label, index) => ({
        label: String(label),
        color: spec.style.colors[String(label)],
        note: String(values[index]),
      }))
    )
  );
  return parts;
}

function renderTreemap(spec: ChartSpecPayload): string[] {
  const parts: string[] = [];
  for (const row of spec.geometry) {
    const w = (row.w as number) * PLOT.w;
    const h = (row.h as number) * PLOT.h;
    if (w <= 0 || h <= 0) {
      continue;
    }
    const x = PLOT.x + (row.x as number) * PLOT.w;
    const y = PLOT.y + (row.y as number) * PLOT.h;
    parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
        `fill="${spec.style.colors[row.label]}" stroke="#fff"/>`
    );
    if (w > 70 && h > 18) {
      parts.push(text(x + 4, y + 14, row.label, 10));
    }
  }
  parts.push(
    ...legendForCategories(spec)
  );
  return parts;
}

function renderBubble(spec: ChartSpecPayload): string[] {
  const side = Math.min(PLOT.w, PLOT.h);
  const parts: string[] = [];
  for (const row of spec.geometry) {
    const r = (row.r as number) * side;
    if (r <= 0) {
      continue;
    }
    const cx = PLOT.x + (row.cx as number) * side;
    const cy = PLOT.y + (row.cy as number) * side;
    parts.push(
      `<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" ` +
        `fill="${spec.style.colors[row.label]}" fill-opacity="0.85"/>`
    );
    if (r > 22) {
      parts.push(text(cx, cy + 4, row.label, 10, "middle"));
    }
  }
  parts.push(...legendForCategories(spec));
  return parts;
}

function legendForCategories(spec: ChartSpecPayload): string[] {
  const values = spec.series[0]?.values ?? [];
  return legend(
    spec.categories_or_years.map((label, index) => ({
      label: String(label),
      color: spec.style.colors[String(label)],
      note: String(values[index]),
    }))
  );
}

function renderTagcloud(spec: ChartSpecPayload): string[] {
  const parts: string[] = [];
  const right = PLOT.x + PLOT.w + 160;
  let x = PLOT.x;
  let y = PLOT.y + 40;
  for (const row of spec.geometry) {
    const size = row.size as number;
    const width = 0.62 * size * row.label.length + 14;
    if (x + width > right && x > PLOT.x) {
      x = PLOT.x;
      y += 54;
    }
    parts.push(text(x, y, row.label, size, "start", spec.style.colors[row.label]));
    x += width;
  }
  return parts;
}

const RENDERERS: Record<string, (spec: ChartSpecPayload) => string[]> = {
  bar: renderBar,
  line_series: renderLineSeries,
  pie: renderPie,
  donut: renderPie,
  treemap: renderTreemap,
  bubble: renderBubble,
  tagcloud: renderTagcloud,
};

export function renderChart(spec: ChartSpecPayload): string {
  const renderer = RENDERERS[spec.kind];
  const body =
    spec.empty || spec.series.length === 0 || renderer === undefined
      ? [text(WIDTH / 2, HEIGHT / 2, "no data", 18, "middle", "#888")]
      : renderer(spec);
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
      `width="100%" role="img">`,
    `<rect x="0" y="0" width="${WIDTH}" height="${HEIGHT}" fill="#fff"/>`,
    text(16, 24, spec.title, 15),
    ...body,
    "</svg>",
  ].join("\n");
}

/** Human-readable line describing exactly what the server computed. */
export function describeFilter(filter: ResolvedFilter | undefined): string {
  if (filter === undefined) {
    return "";
  }
  const parts = [
    `status: ${filter.status ?? "all"}`,
    `region: ${filter.region}`,
  ];
  if (filter.year_from !== null && filter.year_to !== null) {
    const span = `${filter.year_from}-${filter.year_to}`;
    parts.push(filter.whole_period ? `${span} (whole period)` : span);
  } else {
    parts.push("no completion years");
  }
  return parts.join(" · ");
}
