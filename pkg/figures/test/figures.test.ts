import { mkdtempSync, readFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";

import { describe, expect, it } from "vitest";

import { parseCsv, readTable } from "../src/csv";
import { FIGURE_KINDS, FigureKind, buildFigure } from "../src/figures";
import { layoutFigure } from "../src/geom";
import { renderPng } from "../src/raster";
import { renderSvg } from "../src/svg";
import { main } from "../src/cli";

const SAMPLE = join(__dirname, "..", "..", "figures", "sample");

const INPUTS: Record<FigureKind, string[]> = {
  "exponent-curve": ["exponents.csv"],
  growth: ["growth.csv", "growth_control.csv"],
  convergence: ["trace_run.csv"],
  schedule: ["schedule.csv"],
};

function load(kind: FigureKind) {
  return INPUTS[kind].map((f) => ({
    name: f.replace(/\.csv$/, ""),
    table: readTable(join(SAMPLE, f)),
  }));
}

describe("figure rendering from shipped samples", () => {
  for (const kind of FIGURE_KINDS) {
    it(`renders ${kind} and is byte-stable across two runs`, () => {
      const layout1 = layoutFigure(buildFigure(kind, load(kind)));
      const layout2 = layoutFigure(buildFigure(kind, load(kind)));
      const svg1 = renderSvg(layout1);
      const svg2 = renderSvg(layout2);
      expect(svg1).toEqual(svg2);
      expect(svg1.startsWith("<svg ")).toBe(true);
      const png1 = renderPng(layout1);
      const png2 = renderPng(layout2);
      expect(png1.equals(png2)).toBe(true);
      expect(png1.subarray(0, 8)).toEqual(
        Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a])
      );
    });
  }

  it("labels the exponent curves and their limit markers", () => {
    const svg = renderSvg(layoutFigure(buildFigure("exponent-curve", load("exponent-curve"))));
    expect(svg).toContain("p-bar");
    expect(svg).toContain("trace exponent");
  });

  it("plots growth on log-log axes with the fitted slope in the legend", () => {
    const svg = renderSvg(layoutFigure(buildFigure("growth", load("growth"))));
    expect(svg).toContain("slope");
    expect(svg).toContain("growth_control");
  });
});

describe("error handling", () => {
  it("rejects missing columns by name", () => {
    const bad = parseCsv("a,b\n1,2\n", "bad.csv");
    expect(() => buildFigure("growth", [{ name: "bad", table: bad }])).toThrow(
      /missing required column 'H'/
    );
  });

  it("rejects empty input", () => {
    expect(() => parseCsv("", "empty.csv")).toThrow(/empty input/);
    expect(() => buildFigure("schedule", [])).toThrow(/no input tables/);
  });

  it("rejects ragged rows with the line number", () => {
    expect(() => parseCsv("a,b\n1,2\n3\n", "ragged.csv")).toThrow(/ragged.csv:3/);
  });
});

describe("cli", () => {
  it("render-all writes every kind from the sample directory", () => {
    const out = mkdtempSync(join(tmpdir(), "figs-"));
    expect(main(["render-all", "--in", SAMPLE, "--out", out])).toBe(0);
    for (const kind of FIGURE_KINDS) {
      expect(readFileSync(join(out, `${kind}.svg`), "utf8")).toContain("<svg");
      expect(readFileSync(join(out, `${kind}.png`)).length).toBeGreaterThan(1000);
    }
  });

  it("render-all twice is byte-identical", () => {
    const out1 = mkdtempSync(join(tmpdir(), "figs-"));
    const out2 = mkdtempSync(join(tmpdir(), "figs-"));
    main(["render-all", "--in", SAMPLE, "--out", out1]);
    main(["render-all", "--in", SAMPLE, "--out", out2]);
    for (const kind of FIGURE_KINDS) {
      for (const ext of ["svg", "png"]) {
        const a = readFileSync(join(out1, `${kind}.${ext}`));
        const b = readFileSync(join(out2, `${kind}.${ext}`));
        expect(a.equals(b)).toBe(true);
      }
    }
  });

  it("single-kind invocation works with explicit csv paths", () => {
    const out = mkdtempSync(join(tmpdir(), "figs-"));
    const code = main([
      "--kind",
      "convergence",
      "--in",
      join(SAMPLE, "trace_run.csv"),
      "--out",
      out,
    ]);
    expect(code).toBe(0);
    expect(readFileSync(join(out, "convergence.svg"), "utf8")).toContain("replacement");
  });

  it("rejects unknown kinds", () => {
    expect(main(["--kind", "wat", "--in", "x.csv", "--out", "."])).toBe(2);
  });
});
