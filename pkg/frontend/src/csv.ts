/**
 * Reader for the `# iqsim-csv v1` file layout:
 *
 *   # iqsim-csv v1
 *   # section.key = value     (parameter echo)
 *   col1,col2,...
 *   ...rows...
 */

export const SCHEMA_LINE = "# iqsim-csv v1";

export interface IqsimCsv {
  params: Record<string, string>;
  columns: string[];
  rows: string[][];
}

export class CsvSchemaError extends Error {}

export function parseIqsimCsv(text: string): IqsimCsv {
  const lines = text.split(/\r?\n/);
  if (lines.length === 0 || lines[0].trim() !== SCHEMA_LINE) {
    throw new CsvSchemaError(
      `input does not start with the '${SCHEMA_LINE}' header`,
    );
  }
  const params: Record<string, string> = {};
  let idx = 1;
  while (idx < lines.length && lines[idx].startsWith("#")) {
    const body = lines[idx].slice(1).trim();
    const eq = body.indexOf("=");
    if (eq > 0) {
      params[body.slice(0, eq).trim()] = body.slice(eq + 1).trim();
    }
    idx += 1;
  }
  if (idx >= lines.length || lines[idx].trim() === "") {
    throw new CsvSchemaError("missing column header line");
  }
  const columns = lines[idx].split(",").map((c) => c.trim());
  const rows: string[][] = [];
  for (let k = idx + 1; k < lines.length; k += 1) {
    const line = lines[k].trim();
    if (line === "") continue;
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new CsvSchemaError(
        `row ${k + 1} has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    rows.push(cells);
  }
  if (rows.length === 0) {
    throw new CsvSchemaError("CSV carries no data rows");
  }
  return { params, columns, rows };
}

export function columnIndex(csv: IqsimCsv, name: string): number {
  const idx = csv.columns.indexOf(name);
  if (idx < 0) {
    throw new CsvSchemaError(
      `column '${name}' not present (have: ${csv.columns.join(", ")})`,
    );
  }
  return idx;
}
