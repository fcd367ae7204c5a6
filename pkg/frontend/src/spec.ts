/**
 * Figure specs: small declarative JSON mapping CSV columns onto panels.
 *
 * A panel either plots one `column` (optionally split into per-series
 * lines by the figure-level `series` column) or a fixed list of
 * `columns`, one line each.  No numeric processing happens here beyond
 * plotting.
 */

export interface PanelSpec {
  column?: string;
  columns?: string[];
  label?: string;
  labels?: string[];
}

export interface HLine {
  y: number;
  label?: string;
}

export interface FigureSpec {
  title?: string;
  x: string;
  series?: string;
  panels: PanelSpec[];
  hlines?: HLine[];
}

export class SpecError extends Error {}

function fail(message: string): never {
  throw new SpecError(message);
}

export function validateSpec(raw: unknown): FigureSpec {
  if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
    fail("figure spec must be a JSON object");
  }
  const obj = raw as Record<string, unknown>;
  if (typeof obj.x !== "string" || obj.x === "") {
    fail("figure spec needs a string 'x' column name");
  }
  if (obj.series !== undefined && typeof obj.series !== "string") {
    fail("'series' must be a column name");
  }
  if (obj.title !== undefined && typeof obj.title !== "string") {
    fail("'title' must be a string");
  }
  if (!Array.isArray(obj.panels) || obj.panels.length === 0) {
    fail("figure spec needs a non-empty 'panels' array");
  }
  const panels: PanelSpec[] = obj.panels.map((p, i) => {
    if (typeof p !== "object" || p === null) {
      fail(`panel ${i} must be an object`);
    }
    const panel = p as Record<string, unknown>;
    const hasColumn = typeof panel.column === "string";
    const hasColumns =
      Array.isArray(panel.columns) &&
      panel.columns.length > 0 &&
      panel.columns.every((c) => typeof c === "string");
    if (hasColumn === hasColumns) {
      fail(`panel ${i} needs exactly one of 'column' or 'columns'`);
    }
    if (panel.label !== undefined && typeof panel.label !== "string") {
      fail(`panel ${i}: 'label' must be a string`);
    }
    if (
      panel.labels !== undefined &&
      (!Array.isArray(panel.labels) ||
        !panel.labels.every((l) => typeof l === "string"))
    ) {
      fail(`panel ${i}: 'labels' must be an array of strings`);
    }
    return panel as PanelSpec;
  });
  let hlines: HLine[] | undefined;
  if (obj.hlines !== undefined) {
    if (!Array.isArray(obj.hlines)) fail("'hlines' must be an array");
    hlines = obj.hlines.map((h, i) => {
      if (typeof h !== "object" || h === null) fail(`hline ${i} invalid`);
      const line = h as Record<string, unknown>;
      if (typeof line.y !== "number" || !Number.isFinite(line.y)) {
        fail(`hline ${i} needs a finite numeric 'y'`);
      }
      if (line.label !== undefined && typeof line.label !== "string") {
        fail(`hline ${i}: 'label' must be a string`);
      }
      return line as unknown as HLine;
    });
  }
  const known = new Set(["title", "x", "series", "panels", "hlines"]);
  for (const key of Object.keys(obj)) {
    if (!known.has(key)) fail(`unknown figure-spec key '${key}'`);
  }
  return {
    title: obj.title as string | undefined,
    x: obj.x,
    series: obj.series as string | undefined,
    panels,
    hlines,
  };
}
