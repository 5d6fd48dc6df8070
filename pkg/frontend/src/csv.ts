/**
 * Strict CSV access for the simulator's result files.
 *
 * The harness writes plain comma-separated text with a header line and no
 * quoting, so this reader stays deliberately small — but it refuses to guess:
 * a missing column, a ragged row or a non-numeric cell is an error that names
 * the offender instead of becoming NaN three functions later.
 */
import { readFileSync } from "node:fs";

export interface ColumnSpec {
  name: string;
  kind: "number" | "string";
}

export type Row = Record<string, number | string>;

export function parseCsv(text: string, columns: ColumnSpec[]): Row[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV: no header line");
  }
  const header = lines[0]!.split(",");
  const index = new Map<string, number>();
  header.forEach((name, i) => index.set(name, i));
  for (const col of columns) {
    if (!index.has(col.name)) {
      throw new Error(
        `missing column "${col.name}" (file has: ${header.join(", ")})`
      );
    }
  }
  if (lines.length === 1) {
    throw new Error("empty CSV: header but no data rows");
  }

  const rows: Row[] = [];
  for (let n = 1; n < lines.length; n++) {
    const fields = lines[n]!.split(",");
    if (fields.length !== header.length) {
      throw new Error(
        `line ${n + 1}: ${fields.length} fields, expected ${header.length}`
      );
    }
    const row: Row = {};
    for (const col of columns) {
      const raw = fields[index.get(col.name)!]!;
      if (col.kind === "number") {
        const v = Number(raw);
        if (raw.trim() === "" || !Number.isFinite(v)) {
          throw new Error(
            `line ${n + 1}, column "${col.name}": not a number: "${raw}"`
          );
        }
        row[col.name] = v;
      } else {
        row[col.name] = raw;
      }
    }
    rows.push(row);
  }
  return rows;
}

export function loadCsv(path: string, columns: ColumnSpec[]): Row[] {
  return parseCsv(readFileSync(path, "utf-8"), columns);
}
