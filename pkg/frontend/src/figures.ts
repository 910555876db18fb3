/** Figure builders: every kind renders from the report/sweep file contract
 * into one element tree, serialized as SVG or rasterized to PNG.
 *
 * Box plots recompute quartiles from the report rows with the same
 * interpolation rule the harness uses, so their geometry must agree with the
 * stored summary; median-of-means bars draw a dotted ground-truth line read
 * from the summary JSON. The plot group carries its y-scale domain/range as
 * data attributes, which makes the geometry checkable from the SVG alone.
 */

import * as path from "node:path";

import {
  loadReportCsv,
  loadSummary,
  loadSweepCsv,
  quantile,
  summaryPathFor,
  SweepRow,
} from "./contract.js";
import { linearScale, LinearScale, padded, tickLabel, ticks } from "./scale.js";
import { Attrs, el, Node, svgRoot } from "./svg.js";

export class EmptyInputError extends Error {}

export const FIGURE_KINDS = ["box", "mae-bars", "mom-bars", "ratio-curve", "ratio-grid"] as const;
export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureSpec {
  kind: FigureKind;
  inputs: string[];
  labels?: string[];
  output: string;
  format?: "svg" | "png";
  width?: number;
  height?: number;
  title?: string;
}

const RAW_COLOR = "#6b8abc";
const CORRECTED_COLOR = "#d9823b";
const TRUTH_COLOR = "#444444";

const MARGIN = { top: 28, right: 24, bottom: 48, left: 86 };

interface Chrome {
  plotWidth: number;
  plotHeight: number;
  yScale: LinearScale;
  group: Node;
  root: Node;
}

function chrome(spec: FigureSpec, yLo: number, yHi: number, yLabel: string): Chrome {
  const width = spec.width ?? 640;
  const height = spec.height ?? 380;
  const plotWidth = width - MARGIN.left - MARGIN.right;
  const plotHeight = height - MARGIN.top - MARGIN.bottom;
  // y grows downward in picture coordinates: domain top maps to 0
  const yScale = linearScale(yLo, yHi, plotHeight, 0);
  const group = el("g", {
    class: "plot-area",
    transform: `translate(${MARGIN.left},${MARGIN.top})`,
    "data-y-domain-min": String(yLo),
    "data-y-domain-max": String(yHi),
    "data-y-range-min": String(plotHeight),
    "data-y-range-max": "0",
  });
  group.children.push(
    el("rect", {
      x: 0,
      y: 0,
      width: plotWidth,
      height: plotHeight,
      fill: "none",
      stroke: "#888888",
    }),
  );
  for (const tick of ticks(yLo, yHi, 5)) {
    const y = yScale.map(tick);
    group.children.push(
      el("line", { x1: -4, y1: y, x2: 0, y2: y, stroke: "black" }),
      el(
        "text",
        { x: -8, y: y + 4, "text-anchor": "end", "font-size": 11 },
        [],
        tickLabel(tick),
      ),
      el("line", { x1: 0, y1: y, x2: plotWidth, y2: y, stroke: "#dddddd" }),
    );
  }
  const children: Node[] = [group];
  if (spec.title) {
    children.push(
      el("text", { x: width / 2, y: 18, "text-anchor": "middle", "font-size": 13 }, [], spec.title),
    );
  }
  if (yLabel) {
    children.push(
      el(
        "text",
        {
          x: 14,
          y: MARGIN.top + plotHeight / 2,
          "text-anchor": "middle",
          "font-size": 11,
          transform: `translate(0,0)`,
        },
        [],
        yLabel,
      ),
    );
  }
  const root = svgRoot(width, height, children);
  return { plotWidth, plotHeight, yScale, group, root };
}

function labelsFor(spec: FigureSpec): string[] {
  const labels = spec.labels ?? [];
  return spec.inputs.map(
    (input, i) => labels[i] ?? path.basename(input).replace(/\.(csv|summary\.json)$/, ""),
  );
}

function legend(group: Node, plotWidth: number, entries: [string, string][]): void {
  entries.forEach(([label, color], i) => {
    const x = plotWidth - 110;
    const y = 10 + i * 16;
    group.children.push(
      el("rect", { x, y: y - 8, width: 10, height: 10, fill: color }),
      el("text", { x: x + 16, y: y + 1, "font-size": 11 }, [], label),
    );
  });
}

function xCategoryLabel(group: Node, plotHeight: number, x: number, label: string): void {
  group.children.push(
    el(
      "text",
      { x, y: plotHeight + 18, "text-anchor": "middle", "font-size": 11 },
      [],
      label,
    ),
  );
}

interface BoxStats {
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
}

function boxStats(values: number[]): BoxStats {
  const sorted = [...values].sort((a, b) => a - b);
  return {
    min: sorted[0],
    q1: quantile(sorted, 0.25),
    median: quantile(sorted, 0.5),
    q3: quantile(sorted, 0.75),
    max: sorted[sorted.length - 1],
  };
}

function drawBox(
  group: Node,
  yScale: LinearScale,
  stats: BoxStats,
  x: number,
  boxWidth: number,
  color: string,
  data: Attrs,
): void {
  const mid = x + boxWidth / 2;
  const top = yScale.map(stats.q3);
  const bottom = yScale.map(stats.q1);
  group.children.push(
    el("line", {
      class: "box-whisker",
      x1: mid,
      y1: yScale.map(stats.max),
      x2: mid,
      y2: top,
      stroke: "black",
      ...data,
    }),
    el("line", {
      class: "box-whisker",
      x1: mid,
      y1: bottom,
      x2: mid,
      y2: yScale.map(stats.min),
      stroke: "black",
      ...data,
    }),
    el("rect", {
      class: "box-iqr",
      x,
      y: top,
      width: boxWidth,
      height: bottom - top,
      fill: color,
      stroke: "black",
      ...data,
    }),
    el("line", {
      class: "box-median",
      x1: x,
      y1: yScale.map(stats.median),
      x2: x + boxWidth,
      y2: yScale.map(stats.median),
      stroke: "black",
      "stroke-width": 2,
      ...data,
    }),
  );
}

function boxFigure(spec: FigureSpec): Node {
  const reports = spec.inputs.map((input) => loadReportCsv(input));
  const stats = reports.map((rows) => ({
    raw: boxStats(rows.map((r) => r.raw)),
    corrected: boxStats(rows.map((r) => r.corrected)),
  }));
  const lows = stats.flatMap((s) => [s.raw.min, s.corrected.min]);
  const highs = stats.flatMap((s) => [s.raw.max, s.corrected.max]);
  const [lo, hi] = padded(Math.min(...lows), Math.max(...highs));
  const { plotWidth, plotHeight, yScale, group, root } = chrome(spec, lo, hi, "estimate");
  const labels = labelsFor(spec);
  const slot = plotWidth / stats.length;
  const boxWidth = Math.min(40, slot / 3);
  stats.forEach((s, i) => {
    const center = slot * i + slot / 2;
    drawBox(group, yScale, s.raw, center - boxWidth - 4, boxWidth, RAW_COLOR, {
      "data-input": i,
      "data-series": "raw",
    });
    drawBox(group, yScale, s.corrected, center + 4, boxWidth, CORRECTED_COLOR, {
      "data-input": i,
      "data-series": "corrected",
    });
    xCategoryLabel(group, plotHeight, center, labels[i]);
  });
  legend(group, plotWidth, [
    ["raw", RAW_COLOR],
    ["corrected", CORRECTED_COLOR],
  ]);
  return root;
}

function barsFigure(
  spec: FigureSpec,
  pick: (summary: ReturnType<typeof loadSummary>) => { raw: number; corrected: number },
  yLabel: string,
  groundTruth: boolean,
): Node {
  const summaries = spec.inputs.map((input) =>
    loadSummary(input.endsWith(".json") ? input : summaryPathFor(input)),
  );
  const values = summaries.map((s) => pick(s));
  const extents = values.flatMap((v) => [v.raw, v.corrected]);
  if (groundTruth) {
    extents.push(...summaries.map((s) => s.ground_truth));
  }
  const [lo, hi] = padded(Math.min(0, ...extents), Math.max(...extents));
  const { plotWidth, plotHeight, yScale, group, root } = chrome(spec, lo, hi, yLabel);
  const labels = labelsFor(spec);
  const slot = plotWidth / values.length;
  const barWidth = Math.min(44, slot / 3);
  const baseline = yScale.map(Math.max(0, lo));
  values.forEach((v, i) => {
    const center = slot * i + slot / 2;
    ([
      ["raw", v.raw, center - barWidth - 3, RAW_COLOR],
      ["corrected", v.corrected, center + 3, CORRECTED_COLOR],
    ] as const).forEach(([series, value, x, color]) => {
      const y = yScale.map(value);
      group.children.push(
        el("rect", {
          class: groundTruth ? "mom-bar" : "mae-bar",
          x,
          y: Math.min(y, baseline),
          width: barWidth,
          height: Math.abs(baseline - y),
          fill: color,
          "data-input": i,
          "data-series": series,
          "data-value": String(value),
        }),
      );
    });
    if (groundTruth) {
      const y = yScale.map(summaries[i].ground_truth);
      group.children.push(
        el("line", {
          class: "ground-truth",
          x1: slot * i + 6,
          y1: y,
          x2: slot * (i + 1) - 6,
          y2: y,
          stroke: TRUTH_COLOR,
          "stroke-width": 1.5,
          "stroke-dasharray": "5 4",
          "data-input": i,
        }),
      );
    }
    xCategoryLabel(group, plotHeight, center, labels[i]);
  });
  legend(group, plotWidth, [
    ["raw", RAW_COLOR],
    ["corrected", CORRECTED_COLOR],
  ]);
  return root;
}

function maeBarsFigure(spec: FigureSpec): Node {
  return barsFigure(spec, (s) => ({ raw: s.raw.mae, corrected: s.corrected.mae }), "mean absolute error", false);
}

function momBarsFigure(spec: FigureSpec): Node {
  return barsFigure(
    spec,
    (s) => {
      if (s.mom_raw === null || s.mom_corrected === null) {
        throw new EmptyInputError("summary has no median-of-means values");
      }
      return { raw: s.mom_raw, corrected: s.mom_corrected };
    },
    "median-of-means estimate",
    true,
  );
}

function loadSweeps(spec: FigureSpec): SweepRow[] {
  const rows = spec.inputs.flatMap((input) => loadSweepCsv(input));
  if (rows.length === 0) {
    throw new EmptyInputError("sweep inputs contain no rows");
  }
  return rows;
}

/** x is param1 unless it is constant while param2 varies; series split on
 * the other parameter when it takes a few repeated values. */
function sweepAxes(rows: SweepRow[]): { x: (r: SweepRow) => number; series: (r: SweepRow) => number; xName: string } {
  const p1 = new Set(rows.map((r) => r.param1));
  const p2 = new Set(rows.map((r) => r.param2));
  if (p1.size === 1 && p2.size > 1) {
    return { x: (r) => r.param2, series: (r) => r.param1, xName: "param2" };
  }
  return { x: (r) => r.param1, series: (r) => r.param2, xName: "param1" };
}

function ratioCurveFigure(spec: FigureSpec): Node {
  const rows = loadSweeps(spec);
  const axes = sweepAxes(rows);
  const xs = rows.map(axes.x);
  const [xLo, xHi] = padded(Math.min(...xs), Math.max(...xs));
  const maxRatio = Math.max(1, ...rows.map((r) => r.ratio));
  const { plotWidth, plotHeight, yScale, group, root } = chrome(
    spec,
    0,
    maxRatio * 1.05,
    "variance ratio (cv / raw)",
  );
  const xScale = linearScale(xLo, xHi, 0, plotWidth);
  for (const tick of ticks(xLo, xHi, 6)) {
    const x = xScale.map(tick);
    group.children.push(
      el("line", { x1: x, y1: plotHeight, x2: x, y2: plotHeight + 4, stroke: "black" }),
      el(
        "text",
        { x, y: plotHeight + 18, "text-anchor": "middle", "font-size": 11 },
        [],
        tickLabel(tick),
      ),
    );
  }
  const seriesValues = [...new Set(rows.map(axes.series))].sort((a, b) => a - b);
  const palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];
  const grouped = seriesValues.length < rows.length;
  const entries: [string, string][] = [];
  seriesValues.forEach((value, si) => {
    const members = rows
      .filter((r) => !grouped || axes.series(r) === value)
      .sort((a, b) => axes.x(a) - axes.x(b));
    const color = palette[si % palette.length];
    const points = members
      .map((r) => `${xScale.map(axes.x(r))},${yScale.map(r.ratio)}`)
      .join(" ");
    group.children.push(
      el("polyline", {
        class: "ratio-curve",
        points,
        fill: "none",
        stroke: color,
        "stroke-width": 2,
        "data-series": String(value),
      }),
    );
    for (const r of members) {
      group.children.push(
        el("rect", {
          class: "ratio-point",
          x: xScale.map(axes.x(r)) - 2,
          y: yScale.map(r.ratio) - 2,
          width: 4,
          height: 4,
          fill: color,
          "data-series": String(value),
        }),
      );
    }
    if (grouped) {
      entries.push([tickLabel(value), color]);
    }
    if (!grouped) {
      // a single curve consumes every row; stop after one pass
      seriesValues.length = 0;
    }
  });
  if (entries.length > 0) {
    legend(group, plotWidth, entries);
  }
  return root;
}

function heatColor(t: number): string {
  // two-ended ramp through near-white at the midpoint
  const lerp = (a: number, b: number, u: number) => Math.round(a + (b - a) * u);
  const low = [33, 102, 172];
  const mid = [247, 247, 247];
  const high = [178, 24, 43];
  const clamped = Math.max(0, Math.min(1, t));
  const [from, to, u] =
    clamped < 0.5 ? [low, mid, clamped * 2] : [mid, high, (clamped - 0.5) * 2];
  const rgb = [0, 1, 2].map((i) => lerp(from[i], to[i], u));
  return `#${rgb.map((v) => v.toString(16).padStart(2, "0")).join("")}`;
}

function ratioGridFigure(spec: FigureSpec): Node {
  const rows = loadSweeps(spec);
  const p1 = [...new Set(rows.map((r) => r.param1))].sort((a, b) => a - b);
  const p2 = [...new Set(rows.map((r) => r.param2))].sort((a, b) => a - b);
  const { plotWidth, plotHeight, group, root } = chrome(spec, 0, 1, "");
  const cellW = plotWidth / p1.length;
  const cellH = plotHeight / p2.length;
  for (const row of rows) {
    const xi = p1.indexOf(row.param1);
    const yi = p2.indexOf(row.param2);
    group.children.push(
      el("rect", {
        class: "ratio-cell",
        x: xi * cellW,
        y: plotHeight - (yi + 1) * cellH,
        width: cellW,
        height: cellH,
        fill: heatColor(row.ratio),
        stroke: "white",
        "data-param1": String(row.param1),
        "data-param2": String(row.param2),
        "data-ratio": String(row.ratio),
      }),
      el(
        "text",
        {
          x: xi * cellW + cellW / 2,
          y: plotHeight - (yi + 1) * cellH + cellH / 2 + 4,
          "text-anchor": "middle",
          "font-size": 10,
          fill: row.ratio > 0.25 && row.ratio < 0.75 ? "black" : "white",
        },
        [],
        row.ratio.toFixed(2),
      ),
    );
  }
  p1.forEach((value, xi) => {
    xCategoryLabel(group, plotHeight, xi * cellW + cellW / 2, tickLabel(value));
  });
  p2.forEach((value, yi) => {
    group.children.push(
      el(
        "text",
        {
          x: -8,
          y: plotHeight - (yi + 1) * cellH + cellH / 2 + 4,
          "text-anchor": "end",
          "font-size": 11,
        },
        [],
        tickLabel(value),
      ),
    );
  });
  return root;
}

export function buildFigure(spec: FigureSpec): Node {
  if (spec.inputs.length === 0) {
    throw new EmptyInputError("figure spec has no inputs");
  }
  switch (spec.kind) {
    case "box":
      return boxFigure(spec);
    case "mae-bars":
      return maeBarsFigure(spec);
    case "mom-bars":
      return momBarsFigure(spec);
    case "ratio-curve":
      return ratioCurveFigure(spec);
    case "ratio-grid":
      return ratioGridFigure(spec);
  }
}
