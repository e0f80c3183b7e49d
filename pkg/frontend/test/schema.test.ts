import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { loadTable } from "../src/csv.js";
import { SchemaError, parseRecipe, parseSidecar } from "../src/schema.js";

const GOOD_SIDECAR = JSON.stringify({
  version: "0.1.0",
  schema_version: 1,
  subcommand: "memory",
  config: { T: 1000 },
  results: { plateau: 0.003 },
});

describe("sidecar validation", () => {
  it("accepts a well-formed sidecar", () => {
    const sc = parseSidecar(GOOD_SIDECAR, "x.json");
    expect(sc.subcommand).toBe("memory");
  });

  it("refuses a schema version mismatch", () => {
    const bad = GOOD_SIDECAR.replace('"schema_version":1', '"schema_version":2');
    expect(() => parseSidecar(bad, "x.json")).toThrow(SchemaError);
    expect(() => parseSidecar(bad, "x.json")).toThrow(/schema version 2/);
  });

  it("refuses non-JSON and missing fields", () => {
    expect(() => parseSidecar("not json", "x.json")).toThrow(SchemaError);
    expect(() => parseSidecar('{"version": "0.1.0"}', "x.json")).toThrow(SchemaError);
  });
});

describe("recipe validation", () => {
  it("rejects unknown kinds", () => {
    expect(() => parseRecipe('{"kind": "pie", "output": "x.svg"}', "r.json")).toThrow(SchemaError);
  });

  it("defaults heatmap curves to empty", () => {
    const r = parseRecipe(
      '{"kind": "heatmap", "map": "m.csv", "output": "o.svg"}',
      "r.json",
    );
    expect(r.kind).toBe("heatmap");
    if (r.kind === "heatmap") expect(r.curves).toEqual([]);
  });
});

describe("CSV loading", () => {
  function writePair(csv: string, sidecar: string = GOOD_SIDECAR): string {
    const dir = mkdtempSync(join(tmpdir(), "figtest-"));
    const csvPath = join(dir, "data.csv");
    writeFileSync(csvPath, csv);
    writeFileSync(join(dir, "data.json"), sidecar);
    return csvPath;
  }

  it("errors explicitly on a missing column", () => {
    const csvPath = writePair("a,b\n1,2\n");
    expect(() => loadTable(csvPath, ["a", "r_q"])).toThrow(/missing required column 'r_q'/);
  });

  it("parses numbers and passes nan through as NaN", () => {
    const csvPath = writePair("az,a,r_q\n0.5,1,nan\n0.5,1.02,0.25\n");
    const table = loadTable(csvPath, ["az", "a", "r_q"]);
    expect(table.rows).toHaveLength(2);
    expect(Number.isNaN(table.rows[0].r_q)).toBe(true);
    expect(table.rows[1].r_q).toBe(0.25);
  });

  it("requires the sidecar to exist and validate", () => {
    const dir = mkdtempSync(join(tmpdir(), "figtest-"));
    const csvPath = join(dir, "lonely.csv");
    writeFileSync(csvPath, "a,b\n1,2\n");
    expect(() => loadTable(csvPath, ["a"])).toThrow(/missing JSON sidecar/);
  });
});
