import { readFileSync } from "node:fs";
import Papa from "papaparse";

/** Raised when an input CSV does not match the documented schema. */
export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export interface TailRow {
  r: number;
  n: number;
  hits: number;
  p_hat: number;
  stderr: number;
}

function parseCsv(path: string): { header: string[]; rows: string[][] } {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<string[]>(text.trim(), {
    delimiter: ",",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${path}: ${parsed.errors[0].message}`);
  }
  const data = parsed.data;
  if (data.length === 0) {
    throw new SchemaError(`${path}: file is empty`);
  }
  return { header: data[0].map((h) => h.trim()), rows: data.slice(1) };
}

function requireColumns(
  path: string,
  header: string[],
  required: string[],
): Map<string, number> {
  const index = new Map<string, number>();
  header.forEach((name, i) => index.set(name, i));
  const missing = required.filter((c) => !index.has(c));
  if (missing.length > 0) {
    throw new SchemaError(
      `${path}: missing required column(s): ${missing.join(", ")}`,
    );
  }
  return index;
}

function numericCell(path: string, column: string, raw: string, line: number): number {
  const value = Number(raw);
  if (raw.trim() === "" || !Number.isFinite(value)) {
    throw new SchemaError(
      `${path}: non-numeric value ${JSON.stringify(raw)} in column "${column}" (line ${line})`,
    );
  }
  return value;
}

/** Read a tail-curve CSV with columns r,n,hits,p_hat,stderr. */
export function readTailCsv(path: string): TailRow[] {
  const { header, rows } = parseCsv(path);
  const cols = ["r", "n", "hits", "p_hat", "stderr"];
  const index = requireColumns(path, header, cols);
  if (rows.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  return rows.map((row, i) => {
    const cell = (c: string) =>
      numericCell(path, c, row[index.get(c)!] ?? "", i + 2);
    return {
      r: cell("r"),
      n: cell("n"),
      hits: cell("hits"),
      p_hat: cell("p_hat"),
      stderr: cell("stderr"),
    };
  });
}

/** Read a samples CSV with a single "value" column. */
export function readSamplesCsv(path: string): number[] {
  const { header, rows } = parseCsv(path);
  const index = requireColumns(path, header, ["value"]);
  if (rows.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  return rows.map((row, i) =>
    numericCell(path, "value", row[index.get("value")!] ?? "", i + 2),
  );
}
