/** CLI: render figure kinds from harness CSVs to SVG + PNG.
 *
 *   node dist/cli.js render-all --in <dir> --out <dir>
 *   node dist/cli.js --kind growth --in growth.csv[,more.csv] --out <dir>
 */

import { existsSync, mkdirSync, writeFileSync } from "fs";
import { basename, join } from "path";

import { readTable } from "./csv";
import { FIGURE_KINDS, FigureKind, NamedTable, buildFigure } from "./figures";
import { layoutFigure } from "./geom";
import { renderPng } from "./raster";
import { renderSvg } from "./svg";

const DEFAULT_INPUTS: Record<FigureKind, string[]> = {
  "exponent-curve": ["exponents.csv"],
  growth: ["growth.csv", "growth_control.csv"],
  convergence: ["trace_run.csv"],
  schedule: ["schedule.csv"],
};

function parseArgs(argv: string[]) {
  const args = { kind: "", inputs: [] as string[], out: ".", renderAll: false };
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a === "render-all") args.renderAll = true;
    else if (a === "--kind") args.kind = argv[++i];
    else if (a === "--in") args.inputs.push(...argv[++i].split(","));
    else if (a === "--out") args.out = argv[++i];
    else throw new Error(`unknown argument ${a}`);
  }
  return args;
}

function renderOne(kind: FigureKind, inputs: NamedTable[], outDir: string): void {
  const layout = layoutFigure(buildFigure(kind, inputs));
  writeFileSync(join(outDir, `${kind}.svg`), renderSvg(layout));
  writeFileSync(join(outDir, `${kind}.png`), renderPng(layout));
  console.log(`wrote ${join(outDir, kind)}.{svg,png}`);
}

export function main(argv: string[]): number {
  const args = parseArgs(argv);
  mkdirSync(args.out, { recursive: true });
  if (args.renderAll) {
    const dir = args.inputs[0] ?? ".";
    for (const kind of FIGURE_KINDS) {
      const files = DEFAULT_INPUTS[kind]
        .map((f) => join(dir, f))
        .filter((p) => existsSync(p));
      if (files.length === 0) {
        console.error(`skipping ${kind}: no inputs under ${dir}`);
        continue;
      }
      const tables = files.map((p) => ({
        name: basename(p, ".csv"),
        table: readTable(p),
      }));
      renderOne(kind, tables, args.out);
    }
    return 0;
  }
  if (!FIGURE_KINDS.includes(args.kind as FigureKind)) {
    console.error(`--kind must be one of ${FIGURE_KINDS.join(", ")}`);
    return 2;
  }
  if (args.inputs.length === 0) {
    console.error("--in <csv[,csv...]> is required");
    return 2;
  }
  const tables = args.inputs.map((p) => ({
    name: basename(p, ".csv"),
    table: readTable(p),
  }));
  renderOne(args.kind as FigureKind, tables, args.out);
  return 0;
}

if (require.main === module) {
  try {
    process.exit(main(process.argv.slice(2)));
  } catch (e) {
    console.error(String(e instanceof Error ? e.message : e));
    process.exit(1);
  }
}
