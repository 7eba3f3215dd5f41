import { parse } from "papaparse";

/** Raised when a CSV does not match the schema a plot kind expects. */
export class SchemaError extends Error {
  constructor(kind: string, expected: string[], got: string[]) {
    super(
      `schema mismatch for kind "${kind}": expected columns [${expected.join(
        ", "
      )}], got [${got.join(", ")}]`
    );
    this.name = "SchemaError";
  }
}

export interface Table {
  columns: string[];
  rows: Record<string, string>[];
}

export function parseCsv(text: string): Table {
  const result = parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (result.errors.length > 0) {
    const e = result.errors[0];
    throw new Error(`CSV parse error at row ${e.row}: ${e.message}`);
  }
  const columns = result.meta.fields ?? [];
  return { columns, rows: result.data };
}

export function requireColumns(
  kind: string,
  table: Table,
  expected: string[]
): void {
  const got = table.columns;
  const ok =
    expected.length === got.length && expected.every((c, i) => got[i] === c);
  if (!ok) {
    throw new SchemaError(kind, expected, got);
  }
}

export function toNumber(value: string, column: string): number {
  const v = Number(value);
  if (!Number.isFinite(v)) {
    throw new Error(`non-numeric value "${value}" in column ${column}`);
  }
  return v;
}

/** Distinct values in first-appearance order. */
export function distinct(values: string[]): string[] {
  const seen = new Set<string>();
  const out: string[] = [];
  for (const v of values) {
    if (!seen.has(v)) {
      seen.add(v);
      out.push(v);
    }
  }
  return out;
}
