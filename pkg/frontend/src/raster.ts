/** Raster backend: walks the same element tree as the SVG serializer and
 * paints into an RGBA buffer, encoded as a PNG via node:zlib. Text uses a
 * 5x7 bitmap font (lowercase folds to uppercase), which is plenty for tick
 * and legend labels. */

import { deflateSync } from "node:zlib";

import { Node, walk } from "./svg.js";

const NAMED_COLORS: Record<string, [number, number, number]> = {
  black: [0, 0, 0],
  white: [255, 255, 255],
  gray: [128, 128, 128],
  grey: [128, 128, 128],
  none: [0, 0, 0],
};

function parseColor(value: string | number | undefined): [number, number, number] | null {
  if (value === undefined || value === "none") {
    return null;
  }
  const text = String(value).trim().toLowerCase();
  if (text in NAMED_COLORS) {
    return NAMED_COLORS[text];
  }
  const hex = /^#([0-9a-f]{6})$/.exec(text);
  if (hex) {
    const v = parseInt(hex[1], 16);
    return [(v >> 16) & 0xff, (v >> 8) & 0xff, v & 0xff];
  }
  const short = /^#([0-9a-f]{3})$/.exec(text);
  if (short) {
    const [r, g, b] = short[1].split("");
    return [parseInt(r + r, 16), parseInt(g + g, 16), parseInt(b + b, 16)];
  }
  return [0, 0, 0];
}

class Canvas {
  data: Uint8Array;

  constructor(
    readonly width: number,
    readonly height: number,
  ) {
    this.data = new Uint8Array(width * height * 4).fill(255);
  }

  set(x: number, y: number, rgb: [number, number, number]): void {
    const xi = Math.round(x);
    const yi = Math.round(y);
    if (xi < 0 || yi < 0 || xi >= this.width || yi >= this.height) {
      return;
    }
    const off = (yi * this.width + xi) * 4;
    this.data[off] = rgb[0];
    this.data[off + 1] = rgb[1];
    this.data[off + 2] = rgb[2];
    this.data[off + 3] = 255;
  }

  fillRect(x: number, y: number, w: number, h: number, rgb: [number, number, number]): void {
    for (let yy = Math.round(y); yy < Math.round(y + h); yy++) {
      for (let xx = Math.round(x); xx < Math.round(x + w); xx++) {
        this.set(xx, yy, rgb);
      }
    }
  }

  line(
    x1: number,
    y1: number,
    x2: number,
    y2: number,
    rgb: [number, number, number],
    width = 1,
    dash?: [number, number],
  ): void {
    const length = Math.hypot(x2 - x1, y2 - y1);
    const steps = Math.max(1, Math.ceil(length * 2));
    const period = dash ? dash[0] + dash[1] : 0;
    for (let i = 0; i <= steps; i++) {
      const t = i / steps;
      const along = t * length;
      if (dash && along % period >= dash[0]) {
        continue;
      }
      const cx = x1 + (x2 - x1) * t;
      const cy = y1 + (y2 - y1) * t;
      const r = Math.max(0, Math.floor(width / 2));
      for (let ox = -r; ox <= r; ox++) {
        for (let oy = -r; oy <= r; oy++) {
          this.set(cx + ox, cy + oy, rgb);
        }
      }
    }
  }
}

// 5x7 glyphs; 'X' marks a lit pixel
const FONT: Record<string, string[]> = {
  " ": ["     ", "     ", "     ", "     ", "     ", "     ", "     "],
  "0": [" XXX ", "X   X", "X  XX", "X X X", "XX  X", "X   X", " XXX "],
  "1": ["  X  ", " XX  ", "  X  ", "  X  ", "  X  ", "  X  ", " XXX "],
  "2": [" XXX ", "X   X", "    X", "   X ", "  X  ", " X   ", "XXXXX"],
  "3": [" XXX ", "X   X", "    X", "  XX ", "    X", "X   X", " XXX "],
  "4": ["   X ", "  XX ", " X X ", "X  X ", "XXXXX", "   X ", "   X "],
  "5": ["XXXXX", "X    ", "XXXX ", "    X", "    X", "X   X", " XXX "],
  "6": [" XXX ", "X    ", "XXXX ", "X   X", "X   X", "X   X", " XXX "],
  "7": ["XXXXX", "    X", "   X ", "  X  ", "  X  ", "  X  ", "  X  "],
  "8": [" XXX ", "X   X", "X   X", " XXX ", "X   X", "X   X", " XXX "],
  "9": [" XXX ", "X   X", "X   X", " XXXX", "    X", "    X", " XXX "],
  ".": ["     ", "     ", "     ", "     ", "     ", "  X  ", "  X  "],
  ",": ["     ", "     ", "     ", "     ", "  X  ", "  X  ", " X   "],
  "-": ["     ", "     ", "     ", "XXXXX", "     ", "     ", "     "],
  "+": ["     ", "  X  ", "  X  ", "XXXXX", "  X  ", "  X  ", "     "],
  "=": ["     ", "     ", "XXXXX", "     ", "XXXXX", "     ", "     "],
  "/": ["    X", "    X", "   X ", "  X  ", " X   ", "X    ", "X    "],
  ":": ["     ", "  X  ", "  X  ", "     ", "  X  ", "  X  ", "     "],
  "%": ["XX  X", "XX  X", "   X ", "  X  ", " X   ", "X  XX", "X  XX"],
  "(": ["  X  ", " X   ", "X    ", "X    ", "X    ", " X   ", "  X  "],
  ")": ["  X  ", "   X ", "    X", "    X", "    X", "   X ", "  X  "],
  A: [" XXX ", "X   X", "X   X", "XXXXX", "X   X", "X   X", "X   X"],
  B: ["XXXX ", "X   X", "X   X", "XXXX ", "X   X", "X   X", "XXXX "],
  C: [" XXX ", "X   X", "X    ", "X    ", "X    ", "X   X", " XXX "],
  D: ["XXXX ", "X   X", "X   X", "X   X", "X   X", "X   X", "XXXX "],
  E: ["XXXXX", "X    ", "X    ", "XXXX ", "X    ", "X    ", "XXXXX"],
  F: ["XXXXX", "X    ", "X    ", "XXXX ", "X    ", "X    ", "X    "],
  G: [" XXX ", "X   X", "X    ", "X XXX", "X   X", "X   X", " XXXX"],
  H: ["X   X", "X   X", "X   X", "XXXXX", "X   X", "X   X", "X   X"],
  I: [" XXX ", "  X  ", "  X  ", "  X  ", "  X  ", "  X  ", " XXX "],
  J: ["  XXX", "   X ", "   X ", "   X ", "   X ", "X  X ", " XX  "],
  K: ["X   X", "X  X ", "X X  ", "XX   ", "X X  ", "X  X ", "X   X"],
  L: ["X    ", "X    ", "X    ", "X    ", "X    ", "X    ", "XXXXX"],
  M: ["X   X", "XX XX", "X X X", "X X X", "X   X", "X   X", "X   X"],
  N: ["X   X", "XX  X", "X X X", "X  XX", "X   X", "X   X", "X   X"],
  O: [" XXX ", "X   X", "X   X", "X   X", "X   X", "X   X", " XXX "],
  P: ["XXXX ", "X   X", "X   X", "XXXX ", "X    ", "X    ", "X    "],
  Q: [" XXX ", "X   X", "X   X", "X   X", "X X X", "X  X ", " XX X"],
  R: ["XXXX ", "X   X", "X   X", "XXXX ", "X X  ", "X  X ", "X   X"],
  S: [" XXXX", "X    ", "X    ", " XXX ", "    X", "    X", "XXXX "],
  T: ["XXXXX", "  X  ", "  X  ", "  X  ", "  X  ", "  X  ", "  X  "],
  U: ["X   X", "X   X", "X   X", "X   X", "X   X", "X   X", " XXX "],
  V: ["X   X", "X   X", "X   X", "X   X", "X   X", " X X ", "  X  "],
  W: ["X   X", "X   X", "X   X", "X X X", "X X X", "XX XX", "X   X"],
  X: ["X   X", "X   X", " X X ", "  X  ", " X X ", "X   X", "X   X"],
  Y: ["X   X", "X   X", " X X ", "  X  ", "  X  ", "  X  ", "  X  "],
  Z: ["XXXXX", "    X", "   X ", "  X  ", " X   ", "X    ", "XXXXX"],
};

function drawText(
  canvas: Canvas,
  text: string,
  x: number,
  y: number,
  anchor: string,
  size: number,
  rgb: [number, number, number],
): void {
  const scale = Math.max(1, Math.round(size / 7));
  const glyphWidth = 6 * scale;
  const total = text.length * glyphWidth;
  let startX = x;
  if (anchor === "middle") {
    startX = x - total / 2;
  } else if (anchor === "end") {
    startX = x - total;
  }
  const top = y - 7 * scale; // SVG text y is the baseline
  for (let i = 0; i < text.length; i++) {
    const glyph = FONT[text[i].toUpperCase()] ?? FONT[" "];
    for (let row = 0; row < 7; row++) {
      for (let col = 0; col < 5; col++) {
        if (glyph[row][col] === "X") {
          canvas.fillRect(
            startX + i * glyphWidth + col * scale,
            top + row * scale,
            scale,
            scale,
            rgb,
          );
        }
      }
    }
  }
}

function parseDash(value: string | number | undefined): [number, number] | undefined {
  if (value === undefined) {
    return undefined;
  }
  const parts = String(value)
    .split(/[ ,]+/)
    .map(Number)
    .filter((v) => Number.isFinite(v));
  if (parts.length >= 2) {
    return [parts[0], parts[1]];
  }
  if (parts.length === 1) {
    return [parts[0], parts[0]];
  }
  return undefined;
}

export function rasterize(root: Node): Uint8Array {
  const width = Math.ceil(Number(root.attrs.width ?? 640));
  const height = Math.ceil(Number(root.attrs.height ?? 480));
  const canvas = new Canvas(width, height);
  for (const { node, dx, dy } of walk(root)) {
    const attrs = node.attrs;
    if (node.tag === "rect") {
      const fill = parseColor(attrs.fill as string | undefined);
      const x = Number(attrs.x ?? 0) + dx;
      const y = Number(attrs.y ?? 0) + dy;
      const w = Number(attrs.width ?? 0);
      const h = Number(attrs.height ?? 0);
      if (fill) {
        canvas.fillRect(x, y, w, h, fill);
      }
      const stroke = parseColor(attrs.stroke as string | undefined);
      if (stroke) {
        canvas.line(x, y, x + w, y, stroke);
        canvas.line(x, y + h, x + w, y + h, stroke);
        canvas.line(x, y, x, y + h, stroke);
        canvas.line(x + w, y, x + w, y + h, stroke);
      }
    } else if (node.tag === "line") {
      const stroke = parseColor(attrs.stroke as string | undefined) ?? [0, 0, 0];
      canvas.line(
        Number(attrs.x1 ?? 0) + dx,
        Number(attrs.y1 ?? 0) + dy,
        Number(attrs.x2 ?? 0) + dx,
        Number(attrs.y2 ?? 0) + dy,
        stroke,
        Number(attrs["stroke-width"] ?? 1),
        parseDash(attrs["stroke-dasharray"]),
      );
    } else if (node.tag === "polyline") {
      const stroke = parseColor(attrs.stroke as string | undefined) ?? [0, 0, 0];
      const points = String(attrs.points ?? "")
        .trim()
        .split(/\s+/)
        .map((pair) => pair.split(",").map(Number));
      for (let i = 1; i < points.length; i++) {
        canvas.line(
          points[i - 1][0] + dx,
          points[i - 1][1] + dy,
          points[i][0] + dx,
          points[i][1] + dy,
          stroke,
          Number(attrs["stroke-width"] ?? 1),
        );
      }
    } else if (node.tag === "text" && node.text) {
      drawText(
        canvas,
        node.text,
        Number(attrs.x ?? 0) + dx,
        Number(attrs.y ?? 0) + dy,
        String(attrs["text-anchor"] ?? "start"),
        Number(attrs["font-size"] ?? 12),
        parseColor(attrs.fill as string | undefined) ?? [0, 0, 0],
      );
    }
  }
  return encodePng(width, height, canvas.data);
}

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(...buffers: Uint8Array[]): number {
  let crc = 0xffffffff;
  for (const buf of buffers) {
    for (const byte of buf) {
      crc = CRC_TABLE[(crc ^ byte) & 0xff] ^ (crc >>> 8);
    }
  }
  return (crc ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Uint8Array): Uint8Array {
  const typeBytes = new TextEncoder().encode(type);
  const out = new Uint8Array(12 + data.length);
  const view = new DataView(out.buffer);
  view.setUint32(0, data.length);
  out.set(typeBytes, 4);
  out.set(data, 8);
  view.setUint32(8 + data.length, crc32(typeBytes, data));
  return out;
}

export function encodePng(width: number, height: number, rgba: Uint8Array): Uint8Array {
  const signature = new Uint8Array([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]);
  const ihdr = new Uint8Array(13);
  const view = new DataView(ihdr.buffer);
  view.setUint32(0, width);
  view.setUint32(4, height);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // RGBA
  // filtered scanlines: filter byte 0 per row
  const raw = new Uint8Array(height * (1 + width * 4));
  for (let y = 0; y < height; y++) {
    raw.set(rgba.subarray(y * width * 4, (y + 1) * width * 4), y * (1 + width * 4) + 1);
  }
  const idat = deflateSync(raw);
  const parts = [
    signature,
    chunk("IHDR", ihdr),
    chunk("IDAT", new Uint8Array(idat)),
    chunk("IEND", new Uint8Array(0)),
  ];
  const total = parts.reduce((sum, p) => sum + p.length, 0);
  const out = new Uint8Array(total);
  let offset = 0;
  for (const part of parts) {
    out.set(part, offset);
    offset += part.length;
  }
  return out;
}
