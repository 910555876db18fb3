import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import * as path from "node:path";
import { describe, expect, it } from "vitest";

import { loadSummary } from "../src/contract.js";
import { buildFigure, EmptyInputError, FigureSpec } from "../src/figures.js";
import { rasterize } from "../src/raster.js";
import { documentString } from "../src/svg.js";
import { fixture, invertY, parseElements, plotScale } from "./helpers.js";

function spec(kind: FigureSpec["kind"], inputs: string[], extra: Partial<FigureSpec> = {}): FigureSpec {
  return { kind, inputs, output: "unused.svg", ...extra };
}

function svgFor(s: FigureSpec): string {
  return documentString(buildFigure(s));
}

describe("box figure", () => {
  it("renders box geometry that matches the summary quartiles to 1e-9", () => {
    for (const name of ["f2_report", "ip_report"]) {
      const svg = svgFor(spec("box", [fixture(`${name}.csv`)]));
      const summary = loadSummary(fixture(`${name}.summary.json`));
      const scale = plotScale(svg);
      const tolerance = (value: number) =>
        Math.max(1e-9 * Math.abs(value), 1e-9 * (scale.domainMax - scale.domainMin));
      for (const series of ["raw", "corrected"] as const) {
        const box = parseElements(svg, "rect").find(
          (r) => r.attrs.class === "box-iqr" && r.attrs["data-series"] === series,
        );
        expect(box, `${name}/${series} box`).toBeDefined();
        const top = Number(box!.attrs.y);
        const bottom = top + Number(box!.attrs.height);
        expect(Math.abs(invertY(scale, top) - summary[series].q3)).toBeLessThanOrEqual(
          tolerance(summary[series].q3),
        );
        expect(Math.abs(invertY(scale, bottom) - summary[series].q1)).toBeLessThanOrEqual(
          tolerance(summary[series].q1),
        );
        const median = parseElements(svg, "line").find(
          (l) => l.attrs.class === "box-median" && l.attrs["data-series"] === series,
        );
        expect(median).toBeDefined();
        expect(
          Math.abs(invertY(scale, Number(median!.attrs.y1)) - summary[series].median),
        ).toBeLessThanOrEqual(tolerance(summary[series].median));
      }
    }
  });

  it("draws a degenerate box for a constant column", () => {
    const dir = mkdtempSync(path.join(tmpdir(), "plots-"));
    const flat = path.join(dir, "flat.csv");
    const lines = ["trial,raw,corrected,c_hat,z"];
    for (let i = 0; i < 10; i++) {
      lines.push(`${i},5.0,${5 + i}.0,0.0,0.0`);
    }
    writeFileSync(flat, lines.join("\n") + "\n");
    const svg = svgFor(spec("box", [flat]));
    const scale = plotScale(svg);
    const box = parseElements(svg, "rect").find(
      (r) => r.attrs.class === "box-iqr" && r.attrs["data-series"] === "raw",
    );
    expect(Number(box!.attrs.height)).toBe(0);
    expect(invertY(scale, Number(box!.attrs.y))).toBeCloseTo(5.0, 9);
  });

  it("supports several inputs side by side", () => {
    const svg = svgFor(spec("box", [fixture("f2_report.csv"), fixture("ip_report.csv")]));
    const boxes = parseElements(svg, "rect").filter((r) => r.attrs.class === "box-iqr");
    expect(boxes).toHaveLength(4);
    expect(new Set(boxes.map((b) => b.attrs["data-input"]))).toEqual(new Set(["0", "1"]));
  });
});

describe("mae bars", () => {
  it("renders one bar per series per input at the summary values", () => {
    const svg = svgFor(spec("mae-bars", [fixture("f2_report.csv")]));
    const summary = loadSummary(fixture("f2_report.summary.json"));
    const bars = parseElements(svg, "rect").filter((r) => r.attrs.class === "mae-bar");
    expect(bars).toHaveLength(2);
    const byName = Object.fromEntries(bars.map((b) => [b.attrs["data-series"], b]));
    expect(Number(byName.raw.attrs["data-value"])).toBeCloseTo(summary.raw.mae, 9);
    expect(Number(byName.corrected.attrs["data-value"])).toBeCloseTo(summary.corrected.mae, 9);
    const scale = plotScale(svg);
    const top = Number(byName.raw.attrs.y);
    expect(invertY(scale, top)).toBeCloseTo(summary.raw.mae, 6);
  });
});

describe("median-of-means bars", () => {
  it("draws the dotted ground-truth line at the summary's ground truth", () => {
    for (const name of ["f2_report", "ip_report"]) {
      const svg = svgFor(spec("mom-bars", [fixture(`${name}.csv`)]));
      const summary = loadSummary(fixture(`${name}.summary.json`));
      const scale = plotScale(svg);
      const line = parseElements(svg, "line").find((l) => l.attrs.class === "ground-truth");
      expect(line).toBeDefined();
      expect(line!.attrs["stroke-dasharray"]).toBeTruthy();
      const tolerance = Math.max(
        1e-9 * Math.abs(summary.ground_truth),
        1e-9 * (scale.domainMax - scale.domainMin),
      );
      expect(Math.abs(invertY(scale, Number(line!.attrs.y1)) - summary.ground_truth)).toBeLessThanOrEqual(
        tolerance,
      );
      expect(line!.attrs.y1).toBe(line!.attrs.y2);
    }
  });

  it("rejects summaries without median-of-means values", () => {
    const dir = mkdtempSync(path.join(tmpdir(), "plots-"));
    const csv = path.join(dir, "nomom.csv");
    writeFileSync(csv, "trial,raw,corrected,c_hat,z\n0,1.0,1.0,0.0,0.0\n");
    const summary = JSON.parse(readFileSync(fixture("f2_report.summary.json"), "utf8"));
    summary.summary.mom_raw = null;
    summary.summary.mom_corrected = null;
    writeFileSync(path.join(dir, "nomom.summary.json"), JSON.stringify(summary));
    expect(() => buildFigure(spec("mom-bars", [csv]))).toThrowError(EmptyInputError);
  });
});

describe("ratio curve", () => {
  it("is flat at 1.0 over the theta=90 sweep", () => {
    const svg = svgFor(spec("ratio-curve", [fixture("ip_sweep_theta90.csv")]));
    const scale = plotScale(svg);
    const curves = parseElements(svg, "polyline").filter((p) => p.attrs.class === "ratio-curve");
    expect(curves.length).toBeGreaterThanOrEqual(1);
    for (const curve of curves) {
      const ys = curve.attrs.points
        .trim()
        .split(/\s+/)
        .map((pair) => Number(pair.split(",")[1]));
      expect(ys.length).toBeGreaterThanOrEqual(2);
      for (const y of ys) {
        expect(invertY(scale, y)).toBeCloseTo(1.0, 9);
      }
    }
  });

  it("splits the full sweep into one curve per norm ratio", () => {
    const svg = svgFor(spec("ratio-curve", [fixture("ip_sweep.csv")]));
    const curves = parseElements(svg, "polyline").filter((p) => p.attrs.class === "ratio-curve");
    expect(curves).toHaveLength(2); // norm ratios 0.4 and 1.0
  });

  it("renders the f2 sweep as a single curve", () => {
    const svg = svgFor(spec("ratio-curve", [fixture("f2_sweep.csv")]));
    const curves = parseElements(svg, "polyline").filter((p) => p.attrs.class === "ratio-curve");
    expect(curves).toHaveLength(1);
    expect(curves[0].attrs.points.trim().split(/\s+/)).toHaveLength(5);
  });
});

describe("ratio grid", () => {
  it("renders one cell per sweep row", () => {
    const svg = svgFor(spec("ratio-grid", [fixture("ip_sweep.csv")]));
    const cells = parseElements(svg, "rect").filter((r) => r.attrs.class === "ratio-cell");
    expect(cells).toHaveLength(8);
    for (const cell of cells) {
      const ratio = Number(cell.attrs["data-ratio"]);
      expect(ratio).toBeGreaterThanOrEqual(0);
      expect(ratio).toBeLessThanOrEqual(1);
    }
  });
});

describe("common behaviour", () => {
  it("every figure kind renders from the fixtures without error", () => {
    const inputsByKind: Record<FigureSpec["kind"], string[]> = {
      box: [fixture("f2_report.csv")],
      "mae-bars": [fixture("f2_report.csv")],
      "mom-bars": [fixture("f2_report.csv")],
      "ratio-curve": [fixture("ip_sweep.csv")],
      "ratio-grid": [fixture("ip_sweep.csv")],
    };
    for (const kind of Object.keys(inputsByKind) as FigureSpec["kind"][]) {
      const svg = svgFor(spec(kind, inputsByKind[kind]));
      expect(svg.startsWith("<?xml")).toBe(true);
      expect(svg).toContain("<svg");
    }
  });

  it("rejects empty inputs", () => {
    expect(() => buildFigure(spec("box", []))).toThrowError(EmptyInputError);
  });

  it("is deterministic for fixed inputs", () => {
    const a = svgFor(spec("box", [fixture("f2_report.csv")]));
    const b = svgFor(spec("box", [fixture("f2_report.csv")]));
    expect(a).toBe(b);
  });

  it("rasterizes to a valid PNG", () => {
    const png = rasterize(buildFigure(spec("box", [fixture("f2_report.csv")])));
    expect(Array.from(png.subarray(0, 8))).toEqual([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
    const trailer = Buffer.from(png.subarray(png.length - 8)).toString("latin1");
    expect(trailer).toContain("IEND");
    expect(png.length).toBeGreaterThan(1000);
  });
});
