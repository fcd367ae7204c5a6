/**
 * Figure assembly: one sub-plot per panel, lines keyed by the series
 * column (or by explicit per-panel column lists), shared x axis.
 * Rows flagged anything but "ok" are skipped.
 */

import { CsvSchemaError, IqsimCsv, columnIndex } from "./csv.js";
import { FigureSpec, PanelSpec } from "./spec.js";
import * as svg from "./svg.js";

const PANEL_W = 320;
const PANEL_H = 240;
const MARGIN = { left: 56, right: 14, top: 20, bottom: 42 };
const GAP = 18;
const LEGEND_H = 22;
const TITLE_H = 24;

interface Series {
  label: string;
  points: Array<[number, number]>;
}

function finite(cell: string): number | null {
  const v = Number(cell);
  return Number.isFinite(v) ? v : null;
}

function collectSeries(
  csv: IqsimCsv,
  spec: FigureSpec,
  panel: PanelSpec,
): Series[] {
  const xIdx = columnIndex(csv, spec.x);
  const flagIdx = csv.columns.indexOf("flag");
  const usable = csv.rows.filter(
    (row) => flagIdx < 0 || row[flagIdx] === "ok",
  );
  const out: Series[] = [];
  if (panel.columns) {
    panel.columns.forEach((col, i) => {
      const yIdx = columnIndex(csv, col);
      const points: Array<[number, number]> = [];
      for (const row of usable) {
        const x = finite(row[xIdx]);
        const y = finite(row[yIdx]);
        if (x !== null && y !== null) points.push([x, y]);
      }
      out.push({ label: panel.labels?.[i] ?? col, points });
    });
    return out;
  }
  const yIdx = columnIndex(csv, panel.column as string);
  if (spec.series) {
    const sIdx = columnIndex(csv, spec.series);
    const order: string[] = [];
    const groups = new Map<string, Array<[number, number]>>();
    for (const row of usable) {
      const key = row[sIdx];
      if (!groups.has(key)) {
        groups.set(key, []);
        order.push(key);
      }
      const x = finite(row[xIdx]);
      const y = finite(row[yIdx]);
      if (x !== null && y !== null) groups.get(key)?.push([x, y]);
    }
    for (const key of order) {
      out.push({ label: key, points: groups.get(key) ?? [] });
    }
    return out;
  }
  const points: Array<[number, number]> = [];
  for (const row of usable) {
    const x = finite(row[xIdx]);
    const y = finite(row[yIdx]);
    if (x !== null && y !== null) points.push([x, y]);
  }
  return [{ label: panel.label ?? (panel.column as string), points }];
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!(hi >= lo)) throw new CsvSchemaError("panel has no plottable points");
  if (hi === lo) {
    hi += 0.5;
    lo -= 0.5;
  }
  return [lo, hi];
}

function renderPanel(
  csv: IqsimCsv,
  spec: FigureSpec,
  panel: PanelSpec,
  originX: number,
  originY: number,
  colorOf: (label: string) => string,
): string {
  const series = collectSeries(csv, spec, panel);
  const xs = series.flatMap((s) => s.points.map((p) => p[0]));
  const ys = series.flatMap((s) => s.points.map((p) => p[1]));
  for (const h of spec.hlines ?? []) ys.push(h.y);
  const [xLo, xHi] = extent(xs);
  let [yLo, yHi] = extent(ys);
  const pad = 0.05 * (yHi - yLo);
  yLo -= pad;
  yHi += pad;

  const plotX: svg.Scale = {
    min: xLo,
    max: xHi,
    lo: originX + MARGIN.left,
    hi: originX + PANEL_W - MARGIN.right,
  };
  const plotY: svg.Scale = {
    min: yLo,
    max: yHi,
    lo: originY + PANEL_H - MARGIN.bottom,
    hi: originY + MARGIN.top,
  };

  const parts: string[] = [];
  parts.push(
    `<rect x="${svg.fmt(plotX.lo)}" y="${svg.fmt(plotY.hi)}" ` +
      `width="${svg.fmt(plotX.hi - plotX.lo)}" ` +
      `height="${svg.fmt(plotY.lo - plotY.hi)}" fill="none" ` +
      `stroke="#444444" stroke-width="1"/>`,
  );
  for (const tx of svg.ticks(xLo, xHi)) {
    const px = svg.scale(plotX, tx);
    parts.push(svg.line(px, plotY.lo, px, plotY.lo + 4, "#444444"));
    parts.push(
      svg.text(px, plotY.lo + 16, svg.tickLabel(tx), { anchor: "middle" }),
    );
  }
  for (const ty of svg.ticks(yLo, yHi)) {
    const py = svg.scale(plotY, ty);
    parts.push(svg.line(plotX.lo - 4, py, plotX.lo, py, "#444444"));
    parts.push(
      svg.text(plotX.lo - 7, py + 3.5, svg.tickLabel(ty), { anchor: "end" }),
    );
  }
  for (const h of spec.hlines ?? []) {
    const py = svg.scale(plotY, h.y);
    parts.push(
      svg.line(plotX.lo, py, plotX.hi, py, "#888888", 1, "5,4"),
    );
    if (h.label) {
      parts.push(
        svg.text(plotX.hi - 4, py - 4, h.label, {
          anchor: "end",
          size: 10,
          color: "#666666",
        }),
      );
    }
  }
  for (const s of series) {
    const pts = s.points.map(
      (p): [number, number] => [svg.scale(plotX, p[0]), svg.scale(plotY, p[1])],
    );
    parts.push(svg.polyline(pts, colorOf(s.label)));
  }
  const label = panel.label ?? panel.column ?? "";
  parts.push(
    svg.text(originX + MARGIN.left, originY + MARGIN.top - 7, label, {
      size: 12,
    }),
  );
  parts.push(
    svg.text(
      (plotX.lo + plotX.hi) / 2,
      originY + PANEL_H - 8,
      spec.x,
      { anchor: "middle", size: 11, color: "#555555" },
    ),
  );
  return parts.join("\n");
}

export function renderFigure(csv: IqsimCsv, spec: FigureSpec): string {
  // fix a deterministic legend order and palette assignment up front
  const labels: string[] = [];
  for (const panel of spec.panels) {
    for (const s of collectSeries(csv, spec, panel)) {
      if (!labels.includes(s.label)) labels.push(s.label);
    }
  }
  const colorOf = (label: string): string =>
    svg.PALETTE[labels.indexOf(label) % svg.PALETTE.length];

  const width =
    GAP + spec.panels.length * (PANEL_W + GAP);
  const height = TITLE_H + LEGEND_H + PANEL_H + GAP;
  const parts: string[] = [];
  if (spec.title) {
    parts.push(svg.text(GAP, 16, spec.title, { size: 13 }));
  }
  let lx = GAP;
  const ly = TITLE_H + LEGEND_H - 8;
  for (const label of labels) {
    parts.push(svg.line(lx, ly - 4, lx + 18, ly - 4, colorOf(label), 2));
    parts.push(svg.text(lx + 22, ly, label, { size: 11 }));
    lx += 34 + 7 * label.length;
  }
  spec.panels.forEach((panel, i) => {
    parts.push(
      renderPanel(
        csv,
        spec,
        panel,
        GAP + i * (PANEL_W + GAP),
        TITLE_H + LEGEND_H,
        colorOf,
      ),
    );
  });
  return svg.document(width, height, parts.join("\n"));
}
