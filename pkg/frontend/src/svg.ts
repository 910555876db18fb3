/** A tiny element tree serialized to SVG; the raster backend walks the same
 * tree, so every figure is described once. */

export type Attrs = Record<string, string | number>;

export interface Node {
  tag: "svg" | "g" | "rect" | "line" | "polyline" | "text";
  attrs: Attrs;
  children: Node[];
  text?: string;
}

export function el(tag: Node["tag"], attrs: Attrs = {}, children: Node[] = [], text?: string): Node {
  return { tag, attrs, children, text };
}

export function svgRoot(width: number, height: number, children: Node[]): Node {
  return el(
    "svg",
    {
      xmlns: "http://www.w3.org/2000/svg",
      width,
      height,
      viewBox: `0 0 ${width} ${height}`,
      "font-family": "sans-serif",
    },
    [el("rect", { x: 0, y: 0, width, height, fill: "white" }), ...children],
  );
}

function escapeXml(value: string): string {
  return value
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function formatAttr(value: string | number): string {
  return typeof value === "number" ? String(value) : value;
}

export function renderSvg(node: Node): string {
  const attrs = Object.entries(node.attrs)
    .map(([key, value]) => ` ${key}="${escapeXml(formatAttr(value))}"`)
    .join("");
  const body =
    (node.text !== undefined ? escapeXml(node.text) : "") +
    node.children.map(renderSvg).join("");
  if (body === "") {
    return `<${node.tag}${attrs}/>`;
  }
  return `<${node.tag}${attrs}>${body}</${node.tag}>`;
}

export function documentString(root: Node): string {
  return `<?xml version="1.0" encoding="UTF-8"?>\n${renderSvg(root)}\n`;
}

/** Depth-first walk with accumulated group translations (the only transform
 * the figures emit). */
export function* walk(
  node: Node,
  dx = 0,
  dy = 0,
): Generator<{ node: Node; dx: number; dy: number }> {
  let ox = dx;
  let oy = dy;
  const transform = node.attrs.transform;
  if (typeof transform === "string") {
    const match = /^translate\(([-0-9.eE+]+)[, ]+([-0-9.eE+]+)\)$/.exec(transform);
    if (match) {
      ox += Number(match[1]);
      oy += Number(match[2]);
    }
  }
  yield { node, dx: ox, dy: oy };
  for (const child of node.children) {
    yield* walk(child, ox, oy);
  }
}
