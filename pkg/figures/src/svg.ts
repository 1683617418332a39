/** Deterministic SVG rendering of a laid-out figure (no timestamps,
 * fixed fonts and sizes, stable number formatting). */

import { Layout } from "./geom";

const FONT = "font-family=\"DejaVu Sans, Helvetica, sans-serif\"";

function px(v: number): string {
  return v.toFixed(2);
}

function polyline(pts: Array<[number, number]>, color: string, dashed: boolean): string {
  const points = pts.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
  const dash = dashed ? " stroke-dasharray=\"6,4\"" : "";
  return `<polyline fill="none" stroke="${color}" stroke-width="1.8"${dash} points="${points}"/>`;
}

export function renderSvg(layout: Layout): string {
  const { fig, plot, width, height } = layout;
  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`
  );
  out.push(`<rect width="${width}" height="${height}" fill="white"/>`);

  // grid + ticks
  for (const t of layout.xTicks) {
    out.push(
      `<line x1="${px(t.px)}" y1="${plot.y0}" x2="${px(t.px)}" y2="${plot.y1}" stroke="#e0e0e0" stroke-width="1"/>`
    );
    out.push(
      `<text x="${px(t.px)}" y="${plot.y1 + 18}" ${FONT} font-size="11" text-anchor="middle" fill="#333">${t.label}</text>`
    );
  }
  for (const t of layout.yTicks) {
    out.push(
      `<line x1="${plot.x0}" y1="${px(t.px)}" x2="${plot.x1}" y2="${px(t.px)}" stroke="#e0e0e0" stroke-width="1"/>`
    );
    out.push(
      `<text x="${plot.x0 - 6}" y="${px(t.px + 4)}" ${FONT} font-size="11" text-anchor="end" fill="#333">${t.label}</text>`
    );
  }

  // reference lines
  for (const h of layout.hlines) {
    out.push(
      `<line x1="${plot.x0}" y1="${px(h.py)}" x2="${plot.x1}" y2="${px(h.py)}" stroke="${h.color}" stroke-width="1.2" stroke-dasharray="3,4"/>`
    );
    if (h.label) {
      out.push(
        `<text x="${plot.x1 - 4}" y="${px(h.py - 4)}" ${FONT} font-size="10" text-anchor="end" fill="${h.color}">${h.label}</text>`
      );
    }
  }

  // series
  for (const s of layout.series) {
    if (s.pts.length > 1) out.push(polyline(s.pts, s.color, s.dashed));
    if (s.markers) {
      for (const [x, y] of s.pts) {
        out.push(`<circle cx="${px(x)}" cy="${px(y)}" r="2.6" fill="${s.color}"/>`);
      }
    }
  }

  // frame
  out.push(
    `<rect x="${plot.x0}" y="${plot.y0}" width="${plot.x1 - plot.x0}" height="${plot.y1 - plot.y0}" fill="none" stroke="#333" stroke-width="1.2"/>`
  );

  // labels + title
  out.push(
    `<text x="${(plot.x0 + plot.x1) / 2}" y="${height - 14}" ${FONT} font-size="13" text-anchor="middle" fill="#111">${fig.xLabel}</text>`
  );
  out.push(
    `<text x="18" y="${(plot.y0 + plot.y1) / 2}" ${FONT} font-size="13" text-anchor="middle" fill="#111" transform="rotate(-90 18 ${(plot.y0 + plot.y1) / 2})">${fig.yLabel}</text>`
  );
  out.push(
    `<text x="${(plot.x0 + plot.x1) / 2}" y="24" ${FONT} font-size="15" text-anchor="middle" fill="#111">${fig.title}</text>`
  );

  // legend (top-right inside the frame)
  const legend = layout.series.filter((s) => s.label.length > 0);
  legend.forEach((s, i) => {
    const y = plot.y0 + 16 + 16 * i;
    const x = plot.x1 - 150;
    out.push(
      `<line x1="${x}" y1="${y - 4}" x2="${x + 22}" y2="${y - 4}" stroke="${s.color}" stroke-width="2"${s.dashed ? " stroke-dasharray=\"6,4\"" : ""}/>`
    );
    out.push(
      `<text x="${x + 28}" y="${y}" ${FONT} font-size="11" fill="#111">${s.label}</text>`
    );
  });

  out.push("</svg>");
  return out.join("\n") + "\n";
}
