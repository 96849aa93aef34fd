#!/usr/bin/env node
/**
 * Comparison table from run summary JSONs: one row per run with copies
 * and best metrics.  Aggregates are recomputed here from the
 * per-instance rows and must agree with the stored values to 1e-9 --
 * this script refuses to render a summary it cannot reproduce.
 *
 * Usage: node dist/make_table.js OUT.md SUMMARY.json [SUMMARY.json ...]
 */

import { readFileSync, writeFileSync, mkdirSync } from "fs";
import path from "path";
import { CsvError } from "./csv.js";

interface InstanceRow {
  best_exact_cost: number;
  best_infidelity: number | null;
  copies_total: number;
}

interface Summary {
  config: { backend: string; optimizer: string; task: string };
  instances: InstanceRow[];
  aggregate: Record<string, { mean: number; std: number } | null>;
}

function meanStd(values: number[]): { mean: number; std: number } {
  const mean = values.reduce((a, b) => a + b, 0) / values.length;
  const variance =
    values.reduce((a, b) => a + (b - mean) ** 2, 0) / values.length;
  return { mean, std: Math.sqrt(variance) };
}

export function verifyAggregates(summary: Summary, label: string): void {
  const fields: Array<[string, (r: InstanceRow) => number | null]> = [
    ["best_exact_cost", (r) => r.best_exact_cost],
    ["best_infidelity", (r) => r.best_infidelity],
    ["copies_total", (r) => r.copies_total],
  ];
  for (const [key, view] of fields) {
    const stored = summary.aggregate[key];
    const values = summary.instances.map(view);
    if (values.some((v) => v === null)) {
      if (stored !== null && stored !== undefined) {
        throw new CsvError(`${label}: aggregate ${key} stored but inputs missing`);
      }
      continue;
    }
    if (!stored) throw new CsvError(`${label}: aggregate ${key} missing`);
    const fresh = meanStd(values as number[]);
    if (
      Math.abs(fresh.mean - stored.mean) > 1e-9 ||
      Math.abs(fresh.std - stored.std) > 1e-9
    ) {
      throw new CsvError(
        `${label}: aggregate ${key} does not recompute ` +
          `(stored ${stored.mean}/${stored.std}, fresh ${fresh.mean}/${fresh.std})`,
      );
    }
  }
}

export function makeTable(outPath: string, summaryPaths: string[]): string {
  if (summaryPaths.length === 0) throw new CsvError("no summary files given");
  const lines = [
    "| run | backend | optimizer | copies | best cost | best infidelity |",
    "| --- | --- | --- | --- | --- | --- |",
  ];
  for (const file of summaryPaths) {
    let summary: Summary;
    try {
      summary = JSON.parse(readFileSync(file, "utf-8")) as Summary;
    } catch (err) {
      throw new CsvError(`${file}: ${(err as Error).message}`);
    }
    verifyAggregates(summary, file);
    const cost = summary.aggregate.best_exact_cost!;
    const infid = summary.aggregate.best_infidelity;
    const copies = summary.aggregate.copies_total!;
    lines.push(
      `| ${path.basename(path.dirname(path.resolve(file)))} ` +
        `| ${summary.config.backend} | ${summary.config.optimizer} ` +
        `| ${copies.mean.toFixed(0)} ` +
        `| ${cost.mean.toFixed(4)} ± ${cost.std.toFixed(4)} ` +
        `| ${infid ? `${infid.mean.toFixed(4)} ± ${infid.std.toFixed(4)}` : "-"} |`,
    );
  }
  const text = lines.join("\n") + "\n";
  mkdirSync(path.dirname(path.resolve(outPath)), { recursive: true });
  writeFileSync(outPath, text);
  return text;
}

export function main(argv: string[]): number {
  try {
    if (argv.length < 2) {
      console.error("usage: make_table OUT.md SUMMARY.json [SUMMARY.json ...]");
      return 2;
    }
    makeTable(argv[0], argv.slice(1));
    console.log(`wrote ${argv[0]}`);
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
