/** The four figure kinds, built from harness CSV tables.
 *
 * Figures never recompute mathematics: every plotted value comes straight
 * out of a CSV column produced by the experiment harness.
 */

import { Table, col, requireColumns } from "./csv";
import { Figure, PALETTE, fmt } from "./geom";

export interface NamedTable {
  name: string;
  table: Table;
}

export type FigureKind = "exponent-curve" | "growth" | "convergence" | "schedule";

export const FIGURE_KINDS: FigureKind[] = [
  "exponent-curve",
  "growth",
  "convergence",
  "schedule",
];

/** r(q) per (n, p) from the exponent sweep, with the q -> p* limit r = p-bar
 * marked as a dashed horizontal reference per curve. */
export function exponentCurveFigure(inputs: NamedTable[]): Figure {
  const { name, table } = inputs[0];
  requireColumns(table, ["n", "p", "q", "r", "p_bar"], name);
  const ns = col(table, "n");
  const ps = col(table, "p");
  const qs = col(table, "q");
  const rs = col(table, "r");
  const pbars = col(table, "p_bar");
  const keys: string[] = [];
  const groups = new Map<string, number[]>();
  ns.forEach((n, i) => {
    const key = `n=${n} p=${fmt(ps[i])}`;
    if (!groups.has(key)) {
      groups.set(key, []);
      keys.push(key);
    }
    groups.get(key)!.push(i);
  });
  const series = [];
  const hlines = [];
  for (const [k, key] of keys.entries()) {
    const idx = groups.get(key)!.slice().sort((a, b) => qs[a] - qs[b]);
    const color = PALETTE[k % PALETTE.length];
    series.push({
      x: idx.map((i) => qs[i]),
      y: idx.map((i) => rs[i]),
      color,
      label: key,
      markers: true,
    });
    hlines.push({ y: pbars[idx[0]], color, label: `p-bar ${fmt(pbars[idx[0]])}` });
  }
  return {
    title: "trace exponent r(q) = 1 + q(1 - 1/p)",
    xLabel: "q",
    yLabel: "r",
    xScale: "linear",
    yScale: "linear",
    series,
    hlines,
  };
}

/** Strip-norm growth on log-log axes, one series per growth table. */
export function growthFigure(inputs: NamedTable[]): Figure {
  const series = inputs.map(({ name, table }, k) => {
    requireColumns(table, ["H", "strip_norm", "fitted_exponent"], name);
    const slope = col(table, "fitted_exponent")[0];
    return {
      x: col(table, "H"),
      y: col(table, "strip_norm"),
      color: PALETTE[k % PALETTE.length],
      label: `${name} (slope ${fmt(slope)})`,
      markers: true,
    };
  });
  return {
    title: "strip norms over x_n <= H",
    xLabel: "H",
    yLabel: "strip norm",
    xScale: "log",
    yScale: "log",
    series,
    hlines: [],
  };
}

/** Replacement-trace L^1 increments vs j, semilog-y. */
export function convergenceFigure(inputs: NamedTable[]): Figure {
  const { name, table } = inputs[0];
  requireColumns(table, ["j", "l1_increment"], name);
  const js = col(table, "j");
  const inc = col(table, "l1_increment");
  const pts = js.map((j, i) => [j, inc[i]] as const).filter(([, v]) => isFinite(v) && v > 0);
  return {
    title: "replacement-trace L1 increments",
    xLabel: "j",
    yLabel: "L1 increment",
    xScale: "linear",
    yScale: "log",
    series: [
      {
        x: pts.map(([j]) => j),
        y: pts.map(([, v]) => v),
        color: PALETTE[0],
        label: "T(j+1) - T(j)",
        markers: true,
      },
    ],
    hlines: [],
  };
}

/** Staircase layer schedule: widths s_j and heights t_j, semilog-y. */
export function scheduleFigure(inputs: NamedTable[]): Figure {
  const { name, table } = inputs[0];
  requireColumns(table, ["j", "s_j", "t_j"], name);
  const js = col(table, "j");
  const sj = col(table, "s_j");
  const tj = col(table, "t_j");
  const sPts = js.map((j, i) => [j, sj[i]] as const).filter(([, v]) => isFinite(v) && v > 0);
  const tPts = js.map((j, i) => [j, tj[i]] as const).filter(([, v]) => isFinite(v) && v > 0);
  return {
    title: "staircase layer schedule",
    xLabel: "j",
    yLabel: "width / height",
    xScale: "linear",
    yScale: "log",
    series: [
      {
        x: sPts.map(([j]) => j),
        y: sPts.map(([, v]) => v),
        color: PALETTE[0],
        label: "s_j (width)",
        markers: true,
      },
      {
        x: tPts.map(([j]) => j),
        y: tPts.map(([, v]) => v),
        color: PALETTE[1],
        label: "t_j (height)",
        markers: true,
        dashed: true,
      },
    ],
    hlines: [],
  };
}

export function buildFigure(kind: FigureKind, inputs: NamedTable[]): Figure {
  if (inputs.length === 0) throw new Error(`${kind}: no input tables`);
  switch (kind) {
    case "exponent-curve":
      return exponentCurveFigure(inputs);
    case "growth":
      return growthFigure(inputs);
    case "convergence":
      return convergenceFigure(inputs);
    case "schedule":
      return scheduleFigure(inputs);
  }
}
