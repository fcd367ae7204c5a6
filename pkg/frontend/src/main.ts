/**
 * CLI: render one iqsim CSV into a multi-panel SVG figure.
 *
 *   node dist/main.js --csv fig1.csv --spec specs/fig1.json --out fig1.svg
 *
 * Exits non-zero (writing nothing) on schema mismatches, unreadable
 * inputs or empty CSV bodies.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseIqsimCsv } from "./csv.js";
import { renderFigure } from "./render.js";
import { validateSpec } from "./spec.js";

interface Args {
  csv: string;
  spec: string;
  out: string;
}

function parseArgs(argv: string[]): Args {
  const out: Partial<Args> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) throw new Error(`missing value for ${flag}`);
    if (flag === "--csv") out.csv = value;
    else if (flag === "--spec") out.spec = value;
    else if (flag === "--out") out.out = value;
    else throw new Error(`unknown flag ${flag}`);
  }
  if (!out.csv || !out.spec || !out.out) {
    throw new Error("usage: render --csv FILE --spec FILE --out FILE");
  }
  return out as Args;
}

export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  try {
    const csv = parseIqsimCsv(readFileSync(args.csv, "utf-8"));
    const spec = validateSpec(JSON.parse(readFileSync(args.spec, "utf-8")));
    const figure = renderFigure(csv, spec);
    writeFileSync(args.out, figure, "utf-8");
  } catch (err) {
    console.error(`render failed: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
  return 0;
}

const isMain =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (isMain) {
  process.exit(run(process.argv.slice(2)));
}
