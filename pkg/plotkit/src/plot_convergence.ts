#!/usr/bin/env node
/**
 * Convergence bands: one mean curve with a +-std band per run directory,
 * read from the runner's curve.csv files.
 *
 * Usage:
 *   node dist/plot_convergence.js OUT.svg CURVE.csv [CURVE.csv ...]
 *     [--metric cost|infidelity] [--linear-y]
 *
 * The metric defaults to infidelity when every input provides it, else
 * cost; the y axis is log scale unless --linear-y is given.
 */

import { writeFileSync, mkdirSync } from "fs";
import path from "path";
import { CsvError, Table, loadCsv, numberCell, requireColumns } from "./csv.js";
import { buildChart, Band, PALETTE, Series } from "./svg.js";

export interface CurveBundle {
  label: string;
  x: number[];
  mean: number[];
  lo: number[];
  hi: number[];
}

export function readCurve(table: Table, metric: "cost" | "infid"): CurveBundle {
  requireColumns(table, ["iter", `${metric}_mean`, `${metric}_lo`, `${metric}_hi`]);
  const bundle: CurveBundle = {
    label: path.basename(path.dirname(path.resolve(table.path))),
    x: [],
    mean: [],
    lo: [],
    hi: [],
  };
  table.rows.forEach((row, i) => {
    bundle.x.push(numberCell(row, "iter", table, i));
    const mean = numberCell(row, `${metric}_mean`, table, i);
    const lo = numberCell(row, `${metric}_lo`, table, i);
    const hi = numberCell(row, `${metric}_hi`, table, i);
    if (lo > mean + 1e-12 || mean > hi + 1e-12) {
      throw new CsvError(
        `${table.path}:${i + 2}: band out of order (lo ${lo}, mean ${mean}, hi ${hi})`,
      );
    }
    bundle.mean.push(mean);
    bundle.lo.push(lo);
    bundle.hi.push(hi);
  });
  return bundle;
}

export function plotConvergence(
  outPath: string,
  csvPaths: string[],
  metric: "auto" | "cost" | "infid" = "auto",
  logY = true,
): string {
  if (csvPaths.length === 0) throw new CsvError("no curve CSVs given");
  const tables = csvPaths.map(loadCsv);
  const resolved =
    metric === "auto"
      ? tables.every((t) => t.columns.includes("infid_mean"))
        ? "infid"
        : "cost"
      : metric;
  const bundles = tables.map((t) => readCurve(t, resolved));
  const floor = 1e-6; // log-scale floor for exactly-zero band edges
  const series: Series[] = bundles.map((b, i) => ({
    label: b.label,
    x: b.x,
    y: b.mean.map((v) => (logY ? Math.max(v, floor) : v)),
    color: PALETTE[i % PALETTE.length],
    width: 1.6,
  }));
  const bands: Band[] = bundles.map((b, i) => ({
    x: b.x,
    lo: b.lo.map((v) => (logY ? Math.max(v, floor) : v)),
    hi: b.hi.map((v) => (logY ? Math.max(v, floor) : v)),
    color: PALETTE[i % PALETTE.length],
  }));
  const svg = buildChart({
    title: resolved === "infid" ? "Best-run infidelity per iteration" : "Cost per iteration",
    xLabel: "iteration",
    yLabel: resolved === "infid" ? "infidelity" : "cost (1 - f)",
    yScale: logY ? "log" : "linear",
    series,
    bands,
  });
  mkdirSync(path.dirname(path.resolve(outPath)), { recursive: true });
  writeFileSync(outPath, svg);
  return svg;
}

export function main(argv: string[]): number {
  try {
    const args = argv.filter((a) => !a.startsWith("--"));
    const flags = argv.filter((a) => a.startsWith("--"));
    if (args.length < 2) {
      console.error("usage: plot_convergence OUT.svg CURVE.csv [CURVE.csv ...]");
      return 2;
    }
    let metric: "auto" | "cost" | "infid" = "auto";
    for (const flag of flags) {
      if (flag === "--metric=cost") metric = "cost";
      else if (flag === "--metric=infidelity") metric = "infid";
      else if (flag !== "--linear-y") {
        console.error(`unknown flag ${flag}`);
        return 2;
      }
    }
    plotConvergence(args[0], args.slice(1), metric, !flags.includes("--linear-y"));
    console.log(`wrote ${args[0]}`);
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
