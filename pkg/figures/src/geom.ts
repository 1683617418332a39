/** Scales, ticks and the shared figure layout used by both renderers. */

export type ScaleKind = "linear" | "log";

export interface Series {
  x: number[];
  y: number[];
  color: string;
  label: string;
  dashed?: boolean;
  markers?: boolean;
}

export interface HLine {
  y: number;
  color: string;
  label?: string;
}

export interface Figure {
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: ScaleKind;
  yScale: ScaleKind;
  series: Series[];
  hlines: HLine[];
}

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { left: 72, right: 24, top: 40, bottom: 56 };

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

export function fmt(v: number): string {
  if (!isFinite(v)) return String(v);
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    return v.toExponential(1).replace("+", "");
  }
  const s = v.toPrecision(4);
  return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}

function niceStep(span: number, target: number): number {
  const raw = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
}

export function linearTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) return [lo];
  const step = niceStep(hi - lo, target);
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= hi + 1e-12 * step; v += step) {
    out.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return out;
}

export function logTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  const e0 = Math.floor(Math.log10(lo));
  const e1 = Math.ceil(Math.log10(hi));
  for (let e = e0; e <= e1; e++) {
    const v = Math.pow(10, e);
    if (v >= lo / 1.0001 && v <= hi * 1.0001) out.push(v);
  }
  if (out.length >= 2) return out;
  // narrow range: fall back to 1-2-5 mantissa ticks
  const fine: number[] = [];
  for (let e = e0 - 1; e <= e1; e++) {
    for (const m of [1, 2, 5]) {
      const v = m * Math.pow(10, e);
      if (v >= lo / 1.0001 && v <= hi * 1.0001) fine.push(v);
    }
  }
  return fine.length ? fine : [lo, hi];
}

export interface Tick {
  px: number;
  label: string;
}

export interface PxSeries {
  pts: Array<[number, number]>;
  color: string;
  label: string;
  dashed: boolean;
  markers: boolean;
}

export interface Layout {
  fig: Figure;
  width: number;
  height: number;
  plot: { x0: number; y0: number; x1: number; y1: number };
  xTicks: Tick[];
  yTicks: Tick[];
  series: PxSeries[];
  hlines: Array<{ py: number; color: string; label?: string }>;
}

function dataRange(values: number[], scale: ScaleKind): [number, number] {
  const ok = values.filter((v) => isFinite(v) && (scale === "linear" || v > 0));
  if (ok.length === 0) throw new Error("no finite data to plot");
  let lo = Math.min(...ok);
  let hi = Math.max(...ok);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  if (scale === "log") {
    const pad = Math.pow(hi / lo, 0.05);
    return [lo / pad, hi * pad];
  }
  const pad = (hi - lo) * 0.05;
  return [lo - pad, hi + pad];
}

export function layoutFigure(fig: Figure): Layout {
  if (fig.series.length === 0) throw new Error("figure has no series");
  const plot = {
    x0: MARGIN.left,
    y0: MARGIN.top,
    x1: WIDTH - MARGIN.right,
    y1: HEIGHT - MARGIN.bottom,
  };
  const xs = fig.series.flatMap((s) => s.x);
  const ys = fig.series
    .flatMap((s) => s.y)
    .concat(fig.hlines.map((h) => h.y));
  const [xlo, xhi] = dataRange(xs, fig.xScale);
  const [ylo, yhi] = dataRange(ys, fig.yScale);

  const sx = (v: number) => {
    const t =
      fig.xScale === "log"
        ? (Math.log(v) - Math.log(xlo)) / (Math.log(xhi) - Math.log(xlo))
        : (v - xlo) / (xhi - xlo);
    return plot.x0 + t * (plot.x1 - plot.x0);
  };
  const sy = (v: number) => {
    const t =
      fig.yScale === "log"
        ? (Math.log(v) - Math.log(ylo)) / (Math.log(yhi) - Math.log(ylo))
        : (v - ylo) / (yhi - ylo);
    return plot.y1 - t * (plot.y1 - plot.y0);
  };

  const xTickVals =
    fig.xScale === "log" ? logTicks(xlo, xhi) : linearTicks(xlo, xhi);
  const yTickVals =
    fig.yScale === "log" ? logTicks(ylo, yhi) : linearTicks(ylo, yhi);

  const series: PxSeries[] = fig.series.map((s) => {
    const pts: Array<[number, number]> = [];
    for (let i = 0; i < s.x.length; i++) {
      const x = s.x[i];
      const y = s.y[i];
      if (!isFinite(x) || !isFinite(y)) continue;
      if (fig.xScale === "log" && x <= 0) continue;
      if (fig.yScale === "log" && y <= 0) continue;
      pts.push([sx(x), sy(y)]);
    }
    return {
      pts,
      color: s.color,
      label: s.label,
      dashed: s.dashed ?? false,
      markers: s.markers ?? true,
    };
  });

  return {
    fig,
    width: WIDTH,
    height: HEIGHT,
    plot,
    xTicks: xTickVals.map((v) => ({ px: sx(v), label: fmt(v) })),
    yTicks: yTickVals.map((v) => ({ px: sy(v), label: fmt(v) })),
    series,
    hlines: fig.hlines
      .filter((h) => isFinite(h.y) && (fig.yScale === "linear" || h.y > 0))
      .map((h) => ({ py: sy(h.y), color: h.color, label: h.label })),
  };
}
