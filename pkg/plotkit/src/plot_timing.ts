#!/usr/bin/env node
/**
 * Wall time of a single shadow evaluation vs register size, with a
 * configurable power-law reference overlay, from the runner's bench CSV.
 *
 * Usage: node dist/plot_timing.js BENCH.csv OUT.svg
 *          [--ref-scale 0.02] [--ref-power 5]
 */

import { writeFileSync, mkdirSync } from "fs";
import path from "path";
import { CsvError, Table, loadCsv, numberCell, requireColumns } from "./csv.js";
import { buildChart, PALETTE, Series } from "./svg.js";

export interface TimingRows {
  n: number[];
  seconds: number[];
}

export function readBench(table: Table): TimingRows {
  requireColumns(table, ["n", "seconds_mean"]);
  const out: TimingRows = { n: [], seconds: [] };
  table.rows.forEach((row, i) => {
    out.n.push(numberCell(row, "n", table, i));
    out.seconds.push(numberCell(row, "seconds_mean", table, i));
  });
  return out;
}

export function plotTiming(
  benchPath: string,
  outPath: string,
  refScale = 0.02,
  refPower = 5,
): string {
  const bench = readBench(loadCsv(benchPath));
  const series: Series[] = [
    {
      label: "measured (complex128)",
      x: bench.n,
      y: bench.seconds,
      color: PALETTE[0],
      width: 1.6,
      markers: true,
    },
    {
      label: `reference (${refScale}n)^${refPower}`,
      x: bench.n,
      y: bench.n.map((n) => (refScale * n) ** refPower),
      color: PALETTE[2],
      dash: "6,3",
    },
  ];
  const svg = buildChart({
    title: "Single-evaluation wall time vs register size",
    xLabel: "qubits",
    yLabel: "seconds",
    yScale: "log",
    series,
  });
  mkdirSync(path.dirname(path.resolve(outPath)), { recursive: true });
  writeFileSync(outPath, svg);
  return svg;
}

export function main(argv: string[]): number {
  try {
    const args = argv.filter((a) => !a.startsWith("--"));
    if (args.length !== 2) {
      console.error("usage: plot_timing BENCH.csv OUT.svg [--ref-scale X] [--ref-power P]");
      return 2;
    }
    let refScale = 0.02;
    let refPower = 5;
    for (const flag of argv.filter((a) => a.startsWith("--"))) {
      const [key, value] = flag.split("=");
      if (key === "--ref-scale") refScale = Number(value);
      else if (key === "--ref-power") refPower = Number(value);
      else {
        console.error(`unknown flag ${flag}`);
        return 2;
      }
    }
    plotTiming(args[0], args[1], refScale, refPower);
    console.log(`wrote ${args[1]}`);
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
