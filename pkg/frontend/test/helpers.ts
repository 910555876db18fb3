import { fileURLToPath } from "node:url";
import * as path from "node:path";

export const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));

export function fixture(name: string): string {
  return path.join(FIXTURES, name);
}

export interface ParsedElement {
  tag: string;
  attrs: Record<string, string>;
}

/** Flat parse of the SVG string: every element with its attributes. */
export function parseElements(svg: string, tag?: string): ParsedElement[] {
  const out: ParsedElement[] = [];
  const elementRe = /<([a-zA-Z]+)((?:\s+[\w:-]+="[^"]*")*)\s*\/?>/g;
  let match: RegExpExecArray | null;
  while ((match = elementRe.exec(svg)) !== null) {
    const [, name, attrText] = match;
    if (tag && name !== tag) {
      continue;
    }
    const attrs: Record<string, string> = {};
    const attrRe = /([\w:-]+)="([^"]*)"/g;
    let attr: RegExpExecArray | null;
    while ((attr = attrRe.exec(attrText)) !== null) {
      attrs[attr[1]] = attr[2];
    }
    out.push({ tag: name, attrs });
  }
  return out;
}

export interface YScaleAttrs {
  domainMin: number;
  domainMax: number;
  rangeMin: number;
  rangeMax: number;
}

export function plotScale(svg: string): YScaleAttrs {
  const plot = parseElements(svg, "g").find((g) => g.attrs.class === "plot-area");
  if (!plot) {
    throw new Error("no plot-area group in SVG");
  }
  return {
    domainMin: Number(plot.attrs["data-y-domain-min"]),
    domainMax: Number(plot.attrs["data-y-domain-max"]),
    rangeMin: Number(plot.attrs["data-y-range-min"]),
    rangeMax: Number(plot.attrs["data-y-range-max"]),
  };
}

/** Invert a plot-local y coordinate back into a data value. */
export function invertY(scale: YScaleAttrs, y: number): number {
  return (
    scale.domainMin +
    ((y - scale.rangeMin) / (scale.rangeMax - scale.rangeMin)) *
      (scale.domainMax - scale.domainMin)
  );
}
