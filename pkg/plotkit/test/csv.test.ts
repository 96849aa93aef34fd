import { describe, expect, it } from "vitest";
import { CsvError, parseNumericCsv } from "../src/csv.js";

describe("csv parsing", () => {
  it("parses numeric tables with blank cells as nulls", () => {
    const table = parseNumericCsv("a,b\n1,2\n3,\n", "t.csv");
    expect(table.columns).toEqual(["a", "b"]);
    expect(table.rows).toEqual([
      { a: 1, b: 2 },
      { a: 3, b: null },
    ]);
  });

  it("rejects an empty file", () => {
    expect(() => parseNumericCsv("", "t.csv")).toThrow(CsvError);
  });

  it("rejects a header-only file", () => {
    expect(() => parseNumericCsv("a,b\n", "t.csv")).toThrow(/no data rows/);
  });

  it("reports the offending row number for ragged lines", () => {
    expect(() => parseNumericCsv("a,b\n1,2\n1,2,3\n", "t.csv")).toThrow(/t\.csv:3/);
  });

  it("reports the offending row number for non-numeric cells", () => {
    expect(() => parseNumericCsv("a,b\n1,2\n1,zap\n", "t.csv")).toThrow(/t\.csv:3/);
  });

  it("allows string labels in the first column only", () => {
    const table = parseNumericCsv("backend,objective\nshots:3,0.5\n", "t.csv");
    expect(table.rows[0].backend).toBe("shots:3");
  });
});
