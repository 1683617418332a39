/** Minimal CSV reading for the harness's numeric artifacts. */

import { readFileSync } from "fs";

export interface Table {
  columns: string[];
  rows: number[][];
}

export function parseCsv(text: string, name = "<csv>"): Table {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new Error(`${name}: empty input (need a header and at least one row)`);
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new Error(
        `${name}:${i + 1}: expected ${columns.length} fields, got ${parts.length}`
      );
    }
    rows.push(parts.map((p) => Number(p)));
  }
  return { columns, rows };
}

export function readTable(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"), path);
}

export function requireColumns(t: Table, cols: string[], name: string): void {
  for (const c of cols) {
    if (!t.columns.includes(c)) {
      throw new Error(`${name}: missing required column '${c}' (has: ${t.columns.join(",")})`);
    }
  }
}

export function col(t: Table, name: string): number[] {
  const idx = t.columns.indexOf(name);
  if (idx < 0) throw new Error(`no column '${name}'`);
  return t.rows.map((r) => r[idx]);
}
