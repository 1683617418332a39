/** Pure-TypeScript PNG rendering: integer-pixel rasterizer with a 5x7
 * bitmap font and a minimal PNG encoder on node's zlib.  No native deps,
 * no anti-aliasing, so output bytes depend only on the layout. */

import { deflateSync } from "zlib";

import { Layout } from "./geom";

// -- 5x7 font (uppercase + digits + plot punctuation) -------------------------

const GLYPHS: Record<string, number[]> = {
  " ": [0, 0, 0, 0, 0, 0, 0],
  "0": [0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e],
  "1": [0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e],
  "2": [0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f],
  "3": [0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e],
  "4": [0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02],
  "5": [0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e],
  "6": [0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e],
  "7": [0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08],
  "8": [0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e],
  "9": [0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c],
  A: [0x0e, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11],
  B: [0x1e, 0x11, 0x11, 0x1e, 0x11, 0x11, 0x1e],
  C: [0x0e, 0x11, 0x10, 0x10, 0x10, 0x11, 0x0e],
  D: [0x1c, 0x12, 0x11, 0x11, 0x11, 0x12, 0x1c],
  E: [0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x1f],
  F: [0x1f, 0x10, 0x10, 0x1e, 0x10, 0x10, 0x10],
  G: [0x0e, 0x11, 0x10, 0x17, 0x11, 0x11, 0x0f],
  H: [0x11, 0x11, 0x11, 0x1f, 0x11, 0x11, 0x11],
  I: [0x0e, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0e],
  J: [0x07, 0x02, 0x02, 0x02, 0x02, 0x12, 0x0c],
  K: [0x11, 0x12, 0x14, 0x18, 0x14, 0x12, 0x11],
  L: [0x10, 0x10, 0x10, 0x10, 0x10, 0x10, 0x1f],
  M: [0x11, 0x1b, 0x15, 0x15, 0x11, 0x11, 0x11],
  N: [0x11, 0x11, 0x19, 0x15, 0x13, 0x11, 0x11],
  O: [0x0e, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e],
  P: [0x1e, 0x11, 0x11, 0x1e, 0x10, 0x10, 0x10],
  Q: [0x0e, 0x11, 0x11, 0x11, 0x15, 0x12, 0x0d],
  R: [0x1e, 0x11, 0x11, 0x1e, 0x14, 0x12, 0x11],
  S: [0x0f, 0x10, 0x10, 0x0e, 0x01, 0x01, 0x1e],
  T: [0x1f, 0x04, 0x04, 0x04, 0x04, 0x04, 0x04],
  U: [0x11, 0x11, 0x11, 0x11, 0x11, 0x11, 0x0e],
  V: [0x11, 0x11, 0x11, 0x11, 0x11, 0x0a, 0x04],
  W: [0x11, 0x11, 0x11, 0x15, 0x15, 0x15, 0x0a],
  X: [0x11, 0x11, 0x0a, 0x04, 0x0a, 0x11, 0x11],
  Y: [0x11, 0x11, 0x11, 0x0a, 0x04, 0x04, 0x04],
  Z: [0x1f, 0x01, 0x02, 0x04, 0x08, 0x10, 0x1f],
  ".": [0, 0, 0, 0, 0, 0x0c, 0x0c],
  ",": [0, 0, 0, 0, 0x0c, 0x04, 0x08],
  "-": [0, 0, 0, 0x1f, 0, 0, 0],
  "+": [0, 0x04, 0x04, 0x1f, 0x04, 0x04, 0],
  "=": [0, 0, 0x1f, 0, 0x1f, 0, 0],
  "(": [0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02],
  ")": [0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08],
  "/": [0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10],
  "^": [0x04, 0x0a, 0x11, 0, 0, 0, 0],
  _: [0, 0, 0, 0, 0, 0, 0x1f],
  "*": [0, 0x04, 0x15, 0x0e, 0x15, 0x04, 0],
  "~": [0, 0, 0x08, 0x15, 0x02, 0, 0],
};

type RGB = [number, number, number];

function hexColor(c: string): RGB {
  const v = parseInt(c.slice(1), 16);
  return [(v >> 16) & 0xff, (v >> 8) & 0xff, v & 0xff];
}

class Canvas {
  data: Buffer;

  constructor(public width: number, public height: number) {
    this.data = Buffer.alloc(width * height * 3, 0xff);
  }

  set(x: number, y: number, [r, g, b]: RGB): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = (y * this.width + x) * 3;
    this.data[i] = r;
    this.data[i + 1] = g;
    this.data[i + 2] = b;
  }

  line(x0: number, y0: number, x1: number, y1: number, c: RGB, dashed = false): void {
    let x = Math.round(x0);
    let y = Math.round(y0);
    const xe = Math.round(x1);
    const ye = Math.round(y1);
    const dx = Math.abs(xe - x);
    const dy = -Math.abs(ye - y);
    const sx = x < xe ? 1 : -1;
    const sy = y < ye ? 1 : -1;
    let err = dx + dy;
    let step = 0;
    for (;;) {
      if (!dashed || step % 10 < 6) this.set(x, y, c);
      if (x === xe && y === ye) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
      step++;
    }
  }

  thickLine(x0: number, y0: number, x1: number, y1: number, c: RGB, dashed = false): void {
    this.line(x0, y0, x1, y1, c, dashed);
    if (Math.abs(x1 - x0) >= Math.abs(y1 - y0)) {
      this.line(x0, y0 + 1, x1, y1 + 1, c, dashed);
    } else {
      this.line(x0 + 1, y0, x1 + 1, y1, c, dashed);
    }
  }

  marker(x: number, y: number, c: RGB): void {
    const cx = Math.round(x);
    const cy = Math.round(y);
    for (let dy = -2; dy <= 2; dy++) {
      for (let dx = -2; dx <= 2; dx++) {
        if (Math.abs(dx) + Math.abs(dy) <= 3) this.set(cx + dx, cy + dy, c);
      }
    }
  }

  text(x: number, y: number, s: string, c: RGB, anchor: "start" | "middle" | "end" = "start"): void {
    const up = s.toUpperCase();
    const w = up.length * 6;
    let ox = Math.round(x);
    if (anchor === "middle") ox -= Math.floor(w / 2);
    if (anchor === "end") ox -= w;
    const oy = Math.round(y) - 7;
    for (const ch of up) {
      const glyph = GLYPHS[ch] ?? GLYPHS["~"];
      for (let row = 0; row < 7; row++) {
        for (let bit = 0; bit < 5; bit++) {
          if ((glyph[row] >> (4 - bit)) & 1) this.set(ox + bit, oy + row, c);
        }
      }
      ox += 6;
    }
  }

  vtext(x: number, y: number, s: string, c: RGB): void {
    // vertical text, bottom-to-top, for the y-axis label
    const up = s.toUpperCase();
    let oy = Math.round(y) + Math.floor((up.length * 6) / 2);
    const ox = Math.round(x) - 3;
    for (const ch of up) {
      const glyph = GLYPHS[ch] ?? GLYPHS["~"];
      for (let row = 0; row < 7; row++) {
        for (let bit = 0; bit < 5; bit++) {
          if ((glyph[row] >> (4 - bit)) & 1) this.set(ox + row - 3, oy - bit - 1, c);
        }
      }
      oy -= 6;
    }
  }
}

// -- PNG encoding ---------------------------------------------------------------

const CRC_TABLE = (() => {
  const t = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    t[n] = c >>> 0;
  }
  return t;
})();

function crc32(buf: Buffer): number {
  let c = 0xffffffff;
  for (const b of buf) c = CRC_TABLE[(c ^ b) & 0xff] ^ (c >>> 8);
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, data: Buffer): Buffer {
  const len = Buffer.alloc(4);
  len.writeUInt32BE(data.length);
  const body = Buffer.concat([Buffer.from(type, "ascii"), data]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body));
  return Buffer.concat([len, body, crc]);
}

export function encodePng(canvas: Canvas): Buffer {
  const { width, height, data } = canvas;
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 2; // RGB
  const raw = Buffer.alloc(height * (1 + width * 3));
  for (let y = 0; y < height; y++) {
    raw[y * (1 + width * 3)] = 0; // filter none
    data.copy(raw, y * (1 + width * 3) + 1, y * width * 3, (y + 1) * width * 3);
  }
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", deflateSync(raw, { level: 9 })),
    chunk("IEND", Buffer.alloc(0)),
  ]);
}

// -- figure rendering -------------------------------------------------------------

const BLACK: RGB = [0x11, 0x11, 0x11];
const GRAY: RGB = [0x33, 0x33, 0x33];
const GRID: RGB = [0xe0, 0xe0, 0xe0];

export function renderPng(layout: Layout): Buffer {
  const { plot, fig } = layout;
  const cv = new Canvas(layout.width, layout.height);

  for (const t of layout.xTicks) {
    cv.line(t.px, plot.y0, t.px, plot.y1, GRID);
    cv.text(t.px, plot.y1 + 18, t.label, GRAY, "middle");
  }
  for (const t of layout.yTicks) {
    cv.line(plot.x0, t.px, plot.x1, t.px, GRID);
    cv.text(plot.x0 - 6, t.px + 4, t.label, GRAY, "end");
  }
  for (const h of layout.hlines) {
    const c = hexColor(h.color);
    cv.line(plot.x0, h.py, plot.x1, h.py, c, true);
    if (h.label) cv.text(plot.x1 - 4, h.py - 4, h.label, c, "end");
  }
  for (const s of layout.series) {
    const c = hexColor(s.color);
    for (let i = 1; i < s.pts.length; i++) {
      cv.thickLine(s.pts[i - 1][0], s.pts[i - 1][1], s.pts[i][0], s.pts[i][1], c, s.dashed);
    }
    if (s.markers) for (const [x, y] of s.pts) cv.marker(x, y, c);
  }
  cv.line(plot.x0, plot.y0, plot.x1, plot.y0, GRAY);
  cv.line(plot.x0, plot.y1, plot.x1, plot.y1, GRAY);
  cv.line(plot.x0, plot.y0, plot.x0, plot.y1, GRAY);
  cv.line(plot.x1, plot.y0, plot.x1, plot.y1, GRAY);

  cv.text((plot.x0 + plot.x1) / 2, layout.height - 14, fig.xLabel, BLACK, "middle");
  cv.vtext(18, (plot.y0 + plot.y1) / 2, fig.yLabel, BLACK);
  cv.text((plot.x0 + plot.x1) / 2, 24, fig.title, BLACK, "middle");

  const legend = layout.series.filter((s) => s.label.length > 0);
  legend.forEach((s, i) => {
    const y = plot.y0 + 16 + 16 * i;
    const x = plot.x1 - 150;
    cv.thickLine(x, y - 4, x + 22, y - 4, hexColor(s.color), s.dashed);
    cv.text(x + 28, y, s.label, BLACK);
  });

  return encodePng(cv);
}
