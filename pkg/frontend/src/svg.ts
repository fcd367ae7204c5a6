/**
 * Dependency-free SVG primitives with deterministic number formatting.
 * Every coordinate is rounded to two decimals so a fixed input always
 * yields identical bytes.
 */

export const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#e377c2",
  "#17becf",
  "#bcbd22",
  "#7f7f7f",
];

export function fmt(v: number): string {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export interface Scale {
  min: number;
  max: number;
  lo: number;
  hi: number;
}

/** Linear map from data [min, max] to pixel [lo, hi]. */
export function scale(s: Scale, v: number): number {
  if (s.max === s.min) return (s.lo + s.hi) / 2;
  return s.lo + ((v - s.min) / (s.max - s.min)) * (s.hi - s.lo);
}

/** Tick positions with a 1/2/5 step covering [min, max]. */
export function ticks(min: number, max: number, target = 5): number[] {
  if (!(max > min)) return [min];
  const rawStep = (max - min) / target;
  const power = Math.floor(Math.log10(rawStep));
  const base = Math.pow(10, power);
  let step = base;
  for (const m of [1, 2, 5, 10]) {
    step = m * base;
    if (step >= rawStep) break;
  }
  const out: number[] = [];
  const start = Math.ceil(min / step - 1e-9) * step;
  for (let v = start; v <= max + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

export function tickLabel(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 1e4 || abs < 1e-3) return v.toExponential(1);
  return parseFloat(v.toPrecision(4)).toString();
}

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function polyline(
  points: Array<[number, number]>,
  color: string,
  width = 1.5,
): string {
  if (points.length === 0) return "";
  const path = points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
    .join("");
  return `<path d="${path}" fill="none" stroke="${color}" stroke-width="${width}"/>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  opts: { size?: number; anchor?: string; color?: string } = {},
): string {
  const size = opts.size ?? 11;
  const anchor = opts.anchor ?? "start";
  const color = opts.color ?? "#222222";
  return (
    `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" ` +
    `text-anchor="${anchor}" fill="${color}" ` +
    `font-family="Helvetica, Arial, sans-serif">${esc(content)}</text>`
  );
}

export function line(
  x1: number,
  y1: number,
  x2: number,
  y2: number,
  color: string,
  width = 1,
  dash?: string,
): string {
  const d = dash ? ` stroke-dasharray="${dash}"` : "";
  return (
    `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
    `stroke="${color}" stroke-width="${width}"${d}/>`
  );
}

export function document(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
    `height="${height}" viewBox="0 0 ${width} ${height}">\n` +
    `<rect width="${width}" height="${height}" fill="#ffffff"/>\n` +
    body +
    "\n</svg>\n"
  );
}
