import Papa from "papaparse";

export class CsvError extends Error {}

export interface Table {
  rows: Record<string, unknown>[];
  columns: string[];
}

/** Parse a CSV string with a header row and check the required columns. */
export function parseTable(text: string, required: string[]): Table {
  const res = Papa.parse<Record<string, unknown>>(text.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (res.errors.length > 0) {
    const e = res.errors[0];
    throw new CsvError(`malformed CSV: ${e.message} (row ${e.row})`);
  }
  const columns = res.meta.fields ?? [];
  const missing = required.filter((c) => !columns.includes(c));
  if (missing.length > 0) {
    throw new CsvError(`missing required column(s): ${missing.join(", ")}`);
  }
  if (res.data.length === 0) {
    throw new CsvError("CSV has no data rows");
  }
  return { rows: res.data, columns };
}

/** Numeric cell value; empty, missing, or non-numeric cells become NaN. */
export function num(row: Record<string, unknown>, col: string): number {
  const v = row[col];
  if (typeof v === "number") return v;
  if (typeof v === "string" && v.trim() !== "") return Number(v);
  return NaN;
}

export function str(row: Record<string, unknown>, col: string): string {
  const v = row[col];
  return v === null || v === undefined ? "" : String(v);
}
