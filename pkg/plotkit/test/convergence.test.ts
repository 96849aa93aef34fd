import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import path from "path";
import { describe, expect, it } from "vitest";
import { CsvError, loadCsv, numberCell } from "../src/csv.js";
import { plotConvergence, readCurve } from "../src/plot_convergence.js";

const FIXTURES = path.join(__dirname, "..", "fixtures");
const CURVES = ["sp6-shadow", "sp6-shots", "sp6-exact"].map((d) =>
  path.join(FIXTURES, d, "curve.csv"),
);

function tmp(name: string): string {
  return path.join(mkdtempSync(path.join(tmpdir(), "plotkit-")), name);
}

describe("convergence bands", () => {
  it("regenerates the banded figure from committed fixtures", () => {
    const out = tmp("convergence.svg");
    const svg = plotConvergence(out, CURVES);
    expect(existsSync(out)).toBe(true);
    expect(svg).toContain("<svg");
    // one band and at least one curve segment per input series
    expect(svg.match(/class="band"/g)?.length).toBe(3);
    expect(svg.match(/class="series"/g)?.length).toBeGreaterThanOrEqual(3);
  });

  it("band invariant lo <= mean <= hi holds pointwise in every fixture", () => {
    for (const file of CURVES) {
      const table = loadCsv(file);
      table.rows.forEach((row, i) => {
        for (const metric of ["cost", "infid"]) {
          if (!table.columns.includes(`${metric}_mean`)) continue;
          const mean = numberCell(row, `${metric}_mean`, table, i);
          const lo = numberCell(row, `${metric}_lo`, table, i);
          const hi = numberCell(row, `${metric}_hi`, table, i);
          expect(lo).toBeLessThanOrEqual(mean + 1e-12);
          expect(mean).toBeLessThanOrEqual(hi + 1e-12);
        }
      });
    }
  });

  it("a single deterministic run has a zero-width band", () => {
    const table = loadCsv(path.join(FIXTURES, "sp6-exact", "curve.csv"));
    const bundle = readCurve(table, "cost");
    bundle.x.forEach((_, i) => {
      expect(bundle.lo[i]).toBeCloseTo(bundle.mean[i], 12);
      expect(bundle.hi[i]).toBeCloseTo(bundle.mean[i], 12);
    });
  });

  it("refuses an empty CSV and emits no image", () => {
    const empty = tmp("empty.csv");
    writeFileSync(empty, "iter,cost_mean,cost_lo,cost_hi\n");
    const out = tmp("nope.svg");
    expect(() => plotConvergence(out, [empty])).toThrow(CsvError);
    expect(existsSync(out)).toBe(false);
  });

  it("reports the row number of a malformed line", () => {
    const bad = tmp("bad.csv");
    writeFileSync(bad, "iter,cost_mean,cost_lo,cost_hi\n0,1,1,1\n1,x,1,1\n");
    expect(() => plotConvergence(tmp("x.svg"), [bad])).toThrow(/bad\.csv:3/);
  });

  it("rejects bands that are out of order", () => {
    const bad = tmp("order.csv");
    writeFileSync(bad, "iter,cost_mean,cost_lo,cost_hi\n0,0.5,0.6,0.7\n");
    expect(() => plotConvergence(tmp("y.svg"), [bad])).toThrow(/band out of order/);
  });

  it("uses a log y axis by default, linear on request", () => {
    const out = tmp("log.svg");
    const svg = plotConvergence(out, CURVES.slice(0, 1));
    expect(svg).toContain('data-y-scale="log"');
    const svg2 = plotConvergence(tmp("lin.svg"), CURVES.slice(0, 1), "cost", false);
    expect(svg2).toContain('data-y-scale="linear"');
  });
});
