/**
 * CSV loading for the experiment outputs.
 *
 * All files are plain comma-separated numeric tables with one header
 * row; blank cells mean "no value" (e.g. unreached sweep objectives).
 * Errors carry 1-based row numbers so a bad line is easy to find.
 */

import { readFileSync } from "fs";
import Papa from "papaparse";

/** Bad input data; main() maps this to exit code 2. */
export class CsvError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "CsvError";
  }
}

export type Row = Record<string, number | null>;

export interface Table {
  path: string;
  columns: string[];
  rows: Row[];
}

export function parseNumericCsv(text: string, path: string): Table {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const err = parsed.errors[0];
    const row = (err.row ?? 0) + 1;
    throw new CsvError(`${path}:${row}: ${err.message}`);
  }
  const data = parsed.data;
  if (data.length === 0) {
    throw new CsvError(`${path}: empty file (no header row)`);
  }
  const columns = data[0].map((c) => c.trim());
  if (data.length === 1) {
    throw new CsvError(`${path}: no data rows`);
  }
  const rows: Row[] = [];
  for (let i = 1; i < data.length; i++) {
    const cells = data[i];
    if (cells.length !== columns.length) {
      throw new CsvError(
        `${path}:${i + 1}: expected ${columns.length} cells, got ${cells.length}`,
      );
    }
    const row: Row = {};
    for (let j = 0; j < columns.length; j++) {
      const cell = cells[j].trim();
      if (cell === "" || cell.toLowerCase() === "nan") {
        // traces use nan for values that were not recorded at that step
        row[columns[j]] = null;
        continue;
      }
      const value = Number(cell);
      if (!Number.isFinite(value)) {
        // backends and labels are legitimate strings in sweep.csv
        if (j === 0) {
          (row as Record<string, unknown>)[columns[j]] = cell;
          continue;
        }
        throw new CsvError(`${path}:${i + 1}: non-numeric cell "${cell}" in ${columns[j]}`);
      }
      row[columns[j]] = value;
    }
    rows.push(row);
  }
  return { path, columns, rows };
}

export function loadCsv(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch (err) {
    throw new CsvError(`${path}: ${(err as Error).message}`);
  }
  return parseNumericCsv(text, path);
}

export function requireColumns(table: Table, wanted: string[]): void {
  for (const col of wanted) {
    if (!table.columns.includes(col)) {
      throw new CsvError(
        `${table.path}: missing column "${col}" (have: ${table.columns.join(", ")})`,
      );
    }
  }
}

export function numberCell(row: Row, column: string, table: Table, idx: number): number {
  const value = row[column];
  if (typeof value !== "number") {
    throw new CsvError(`${table.path}:${idx + 2}: missing value in ${column}`);
  }
  return value;
}
