/** Loaders for the experiment-report and sweep file contracts.
 *
 * Report CSV: header `trial,raw,corrected,c_hat,z`, floats per row.
 * Summary JSON: `{config, summary}` where summary carries ground_truth,
 * trials, per-column box statistics for raw/corrected, and the
 * median-of-means combines. Sweep CSV: header
 * `sweep,param1,param2,ams_var,cv_reduction,cv_var,ratio`.
 */

import { readFileSync } from "node:fs";

import { columnIndex, parseCsv, SchemaMismatchError } from "./csv.js";

export { SchemaMismatchError };

export interface TrialRow {
  trial: number;
  raw: number;
  corrected: number;
  cHat: number;
  z: number;
}

export interface ColumnSummary {
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
  mean: number;
  variance: number;
  mae: number;
}

export interface ReportSummary {
  ground_truth: number;
  trials: number;
  raw: ColumnSummary;
  corrected: ColumnSummary;
  mom_raw: number | null;
  mom_corrected: number | null;
}

export interface SweepRow {
  sweep: string;
  param1: number;
  param2: number;
  ams_var: number;
  cv_reduction: number;
  cv_var: number;
  ratio: number;
}

const REPORT_COLUMNS = ["trial", "raw", "corrected", "c_hat", "z"] as const;
const SWEEP_COLUMNS = [
  "sweep",
  "param1",
  "param2",
  "ams_var",
  "cv_reduction",
  "cv_var",
  "ratio",
] as const;

function parseNumber(token: string, source: string, line: number): number {
  const value = Number(token);
  if (!Number.isFinite(value)) {
    throw new SchemaMismatchError(`${source}:${line}: not a number: '${token}'`);
  }
  return value;
}

export function loadReportCsv(path: string): TrialRow[] {
  const table = parseCsv(readFileSync(path, "utf8"));
  const idx = Object.fromEntries(
    REPORT_COLUMNS.map((name) => [name, columnIndex(table, name, path)]),
  );
  return table.rows.map((row, i) => ({
    trial: parseNumber(row[idx.trial], path, i + 2),
    raw: parseNumber(row[idx.raw], path, i + 2),
    corrected: parseNumber(row[idx.corrected], path, i + 2),
    cHat: parseNumber(row[idx.c_hat], path, i + 2),
    z: parseNumber(row[idx.z], path, i + 2),
  }));
}

function requireKeys(obj: Record<string, unknown>, keys: string[], source: string): void {
  for (const key of keys) {
    if (!(key in obj)) {
      throw new SchemaMismatchError(`${source}: missing summary field '${key}'`);
    }
  }
}

export function loadSummary(path: string): ReportSummary {
  const payload = JSON.parse(readFileSync(path, "utf8")) as Record<string, unknown>;
  const summary = (payload.summary ?? payload) as Record<string, unknown>;
  requireKeys(summary, ["ground_truth", "trials", "raw", "corrected"], path);
  for (const column of ["raw", "corrected"] as const) {
    requireKeys(
      summary[column] as Record<string, unknown>,
      ["min", "q1", "median", "q3", "max", "mean", "variance", "mae"],
      `${path} (${column})`,
    );
  }
  return summary as unknown as ReportSummary;
}

/** `runs/x.csv` -> `runs/x.summary.json` (the harness's pairing rule). */
export function summaryPathFor(csvPath: string): string {
  return csvPath.replace(/\.csv$/, "") + ".summary.json";
}

export function loadSweepCsv(path: string): SweepRow[] {
  const table = parseCsv(readFileSync(path, "utf8"));
  const idx = Object.fromEntries(
    SWEEP_COLUMNS.map((name) => [name, columnIndex(table, name, path)]),
  );
  return table.rows.map((row, i) => ({
    sweep: row[idx.sweep],
    param1: parseNumber(row[idx.param1], path, i + 2),
    param2: parseNumber(row[idx.param2], path, i + 2),
    ams_var: parseNumber(row[idx.ams_var], path, i + 2),
    cv_reduction: parseNumber(row[idx.cv_reduction], path, i + 2),
    cv_var: parseNumber(row[idx.cv_var], path, i + 2),
    ratio: parseNumber(row[idx.ratio], path, i + 2),
  }));
}

/** Linear interpolation between order statistics (matches the harness). */
export function quantile(sorted: number[], q: number): number {
  if (sorted.length === 0) {
    throw new Error("no data");
  }
  const h = (sorted.length - 1) * q;
  const lo = Math.floor(h);
  const hi = Math.min(lo + 1, sorted.length - 1);
  return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}
