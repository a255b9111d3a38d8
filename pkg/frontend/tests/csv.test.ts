import { describe, expect, it } from "vitest";
import { join } from "node:path";

import { parseCsv, readCsv, requireColumns, numericCell, SchemaError } from "../src/csv.js";

const FIXTURES = join(__dirname, "fixtures");

describe("csv reader", () => {
  it("reads a harness sweep file", () => {
    const table = readCsv(join(FIXTURES, "p_sweep_b_lbrs.csv"));
    expect(table.columns[0]).toBe("parameter");
    expect(table.columns).toContain("avg_reward_session");
    expect(table.rows).toHaveLength(3);
    expect(table.rows[0].parameter).toBe("p");
  });

  it("rejects an empty file", () => {
    expect(() => parseCsv("", "empty.csv")).toThrow(SchemaError);
  });

  it("rejects a header-only file", () => {
    expect(() => parseCsv("a,b\n", "h.csv")).toThrow(/no data rows/);
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv("a,b\n1\n", "r.csv")).toThrow(/row 2/);
  });

  it("names missing columns", () => {
    const table = parseCsv("a,b\n1,2\n", "x.csv");
    expect(() => requireColumns(table, ["avg_diversity"])).toThrow(
      /missing required column "avg_diversity"/,
    );
  });

  it("parses numeric cells and treats empties as absent", () => {
    const table = parseCsv("a,b\n1.25,\n", "n.csv");
    expect(numericCell(table.rows[0], "a")).toBe(1.25);
    expect(numericCell(table.rows[0], "b")).toBeNull();
  });
});
