#!/usr/bin/env node
/**
 * Copies needed per objective level, one series per backend, from the
 * runner's sweep.csv.  Unreached objectives are empty cells and render
 * as gaps.  The y axis (copies) is log scale.
 *
 * Usage: node dist/plot_resources.js SWEEP.csv OUT.svg
 */

import { writeFileSync, mkdirSync } from "fs";
import path from "path";
import { CsvError, Table, loadCsv, requireColumns } from "./csv.js";
import { buildChart, PALETTE, Series } from "./svg.js";

export interface BackendSweep {
  backend: string;
  objectives: number[];
  copies: (number | null)[];
}

export function readSweep(table: Table): BackendSweep[] {
  requireColumns(table, ["backend", "objective", "copies", "reached"]);
  const grouped = new Map<string, BackendSweep>();
  table.rows.forEach((row, i) => {
    const backend = String(row.backend);
    const objective = row.objective;
    if (typeof objective !== "number") {
      throw new CsvError(`${table.path}:${i + 2}: missing objective`);
    }
    const reached = row.reached === 1;
    const copies = reached ? row.copies : null;
    if (reached && typeof copies !== "number") {
      throw new CsvError(`${table.path}:${i + 2}: reached row without copies`);
    }
    let entry = grouped.get(backend);
    if (!entry) {
      entry = { backend, objectives: [], copies: [] };
      grouped.set(backend, entry);
    }
    entry.objectives.push(objective);
    entry.copies.push(copies as number | null);
  });
  return [...grouped.values()];
}

export function plotResources(sweepPath: string, outPath: string): string {
  const sweeps = readSweep(loadCsv(sweepPath));
  if (sweeps.every((s) => s.copies.every((c) => c === null))) {
    throw new CsvError(`${sweepPath}: no reached objectives to plot`);
  }
  const series: Series[] = sweeps.map((s, i) => ({
    label: s.backend,
    x: s.objectives,
    y: s.copies,
    color: PALETTE[i % PALETTE.length],
    width: 1.6,
    markers: true,
  }));
  const svg = buildChart({
    title: "Copies required per objective",
    xLabel: "target cost level",
    yLabel: "state copies",
    yScale: "log",
    series,
  });
  mkdirSync(path.dirname(path.resolve(outPath)), { recursive: true });
  writeFileSync(outPath, svg);
  return svg;
}

export function main(argv: string[]): number {
  try {
    if (argv.length !== 2) {
      console.error("usage: plot_resources SWEEP.csv OUT.svg");
      return 2;
    }
    plotResources(argv[0], argv[1]);
    console.log(`wrote ${argv[1]}`);
    return 0;
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(err.message);
      return 2;
    }
    throw err;
  }
}

if (process.argv[1] && import.meta.url.endsWith(path.basename(process.argv[1]))) {
  process.exit(main(process.argv.slice(2)));
}
