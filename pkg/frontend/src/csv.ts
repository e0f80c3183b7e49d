import { readFileSync } from "node:fs";
import Papa from "papaparse";
import { parseSidecar, Sidecar, SchemaError } from "./schema.js";

export interface Table {
  columns: string[];
  rows: Record<string, number>[];
  sidecar: Sidecar;
}

/**
 * Load a CSV artifact together with its JSON sidecar (same path, .json).
 * Cells are parsed as numbers; "nan" becomes NaN and is left to the
 * renderers to treat as a missing value.
 */
export function loadTable(csvPath: string, required: string[]): Table {
  let text: string;
  try {
    text = readFileSync(csvPath, "utf8");
  } catch {
    throw new SchemaError(`${csvPath}: cannot read CSV`);
  }
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`${csvPath}: ${parsed.errors[0].message}`);
  }
  const columns = parsed.meta.fields ?? [];
  for (const col of required) {
    if (!columns.includes(col)) {
      throw new SchemaError(`${csvPath}: missing required column '${col}' (has: ${columns.join(", ")})`);
    }
  }
  const rows = parsed.data.map((raw) => {
    const row: Record<string, number> = {};
    for (const col of columns) row[col] = Number(raw[col]);
    return row;
  });
  const sidecarPath = csvPath.replace(/\.csv$/, ".json");
  let sidecarText: string;
  try {
    sidecarText = readFileSync(sidecarPath, "utf8");
  } catch {
    throw new SchemaError(`${sidecarPath}: missing JSON sidecar for ${csvPath}`);
  }
  return { columns, rows, sidecar: parseSidecar(sidecarText, sidecarPath) };
}
