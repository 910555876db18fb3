export {
  loadReportCsv,
  loadSummary,
  loadSweepCsv,
  quantile,
  summaryPathFor,
  SchemaMismatchError,
} from "./contract.js";
export type { ColumnSummary, ReportSummary, SweepRow, TrialRow } from "./contract.js";
export { buildFigure, EmptyInputError, FIGURE_KINDS } from "./figures.js";
export type { FigureKind, FigureSpec } from "./figures.js";
export { inferFormat, renderFigure } from "./render.js";
export { linearScale, padded, tickLabel, ticks } from "./scale.js";
export { loadFigureSpec, parseFigureSpec } from "./spec.js";
export { documentString, el, renderSvg, svgRoot, walk } from "./svg.js";
export { encodePng, rasterize } from "./raster.js";
