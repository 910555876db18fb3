/** Spec in, image file out. Vector (SVG) is the default; the raster flag
 * switches to PNG. */

import { writeFileSync } from "node:fs";

import { buildFigure, FigureSpec } from "./figures.js";
import { rasterize } from "./raster.js";
import { documentString } from "./svg.js";

export function inferFormat(spec: FigureSpec): "svg" | "png" {
  if (spec.format) {
    return spec.format;
  }
  return spec.output.endsWith(".png") ? "png" : "svg";
}

export function renderFigure(spec: FigureSpec): { output: string; format: "svg" | "png" } {
  const tree = buildFigure(spec);
  const format = inferFormat(spec);
  if (format === "png") {
    writeFileSync(spec.output, rasterize(tree));
  } else {
    writeFileSync(spec.output, documentString(tree));
  }
  return { output: spec.output, format };
}
