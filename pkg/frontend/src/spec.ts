/** Figure-spec parsing: the JSON handed to `plot --spec`. */

import { readFileSync } from "node:fs";

import { FIGURE_KINDS, FigureKind, FigureSpec } from "./figures.js";

const KIND_ALIASES: Record<string, FigureKind> = {
  box: "box",
  maebars: "mae-bars",
  "mae-bars": "mae-bars",
  mombars: "mom-bars",
  "mom-bars": "mom-bars",
  ratiocurve: "ratio-curve",
  "ratio-curve": "ratio-curve",
  ratiogrid: "ratio-grid",
  "ratio-grid": "ratio-grid",
};

export function parseFigureSpec(raw: unknown): FigureSpec {
  if (typeof raw !== "object" || raw === null) {
    throw new Error("figure spec must be a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  const kindText = String(obj.kind ?? "").toLowerCase();
  const kind = KIND_ALIASES[kindText];
  if (!kind) {
    throw new Error(`unknown figure kind '${obj.kind}' (expected one of ${FIGURE_KINDS.join(", ")})`);
  }
  if (!Array.isArray(obj.inputs) || obj.inputs.some((x) => typeof x !== "string")) {
    throw new Error("figure spec needs an 'inputs' array of paths");
  }
  if (typeof obj.output !== "string" || obj.output.length === 0) {
    throw new Error("figure spec needs an 'output' path");
  }
  const format = obj.format === undefined ? undefined : String(obj.format);
  if (format !== undefined && format !== "svg" && format !== "png") {
    throw new Error(`format must be svg or png, got '${format}'`);
  }
  return {
    kind,
    inputs: obj.inputs as string[],
    labels: obj.labels as string[] | undefined,
    output: obj.output,
    format: format as "svg" | "png" | undefined,
    width: obj.width as number | undefined,
    height: obj.height as number | undefined,
    title: obj.title as string | undefined,
  };
}

export function loadFigureSpec(path: string): FigureSpec {
  return parseFigureSpec(JSON.parse(readFileSync(path, "utf8")));
}
