import { existsSync, mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import path from "path";
import { describe, expect, it } from "vitest";
import { CsvError, loadCsv } from "../src/csv.js";
import { plotResources, readSweep } from "../src/plot_resources.js";

const FIXTURES = path.join(__dirname, "..", "fixtures");

function tmp(name: string): string {
  return path.join(mkdtempSync(path.join(tmpdir(), "plotkit-")), name);
}

describe("resource sweep figure", () => {
  it("renders the committed sweep fixture with log-scale copies", () => {
    const out = tmp("resources.svg");
    const svg = plotResources(path.join(FIXTURES, "sweep.csv"), out);
    expect(existsSync(out)).toBe(true);
    expect(svg).toContain('data-y-scale="log"');
    // tick metadata exposes decade ticks
    const ticks = /data-y-ticks="([^"]*)"/.exec(svg)![1].split("|");
    expect(ticks.length).toBeGreaterThanOrEqual(2);
    for (const t of ticks) {
      const v = Number(t);
      expect(Math.abs(Math.log10(v) - Math.round(Math.log10(v)))).toBeLessThan(1e-9);
    }
  });

  it("shadow backends are flat: one copies level at every reached objective", () => {
    const sweeps = readSweep(loadCsv(path.join(FIXTURES, "sweep.csv")));
    const shadow = sweeps.find((s) => s.backend.startsWith("shadow"));
    expect(shadow).toBeDefined();
    const reached = shadow!.copies.filter((c): c is number => c !== null);
    expect(reached.length).toBeGreaterThan(0);
    for (const c of reached) expect(c).toBe(reached[0]);
  });

  it("unreached objectives render as gaps, splitting the polyline", () => {
    const csv = tmp("sweep.csv");
    writeFileSync(
      csv,
      "backend,objective,copies,reached\n" +
        "shots:3,0.8,100,1\nshots:3,0.5,,0\nshots:3,0.2,400,1\n",
    );
    const svg = plotResources(csv, tmp("gap.svg"));
    // two disjoint segments for the single backend
    expect(svg.match(/class="series"/g)?.length).toBe(2);
    expect(svg.match(/class="marker"/g)?.length).toBe(2);
  });

  it("matches hand-computed marker positions on a toy two-row sweep", () => {
    const csv = tmp("toy.csv");
    writeFileSync(
      csv,
      "backend,objective,copies,reached\nA,0.1,100,1\nA,0.5,10,1\n",
    );
    const svg = plotResources(csv, tmp("toy.svg"));
    const markers = [...svg.matchAll(/<circle[^>]*cx="([^"]+)" cy="([^"]+)"/g)].map(
      (m) => [Number(m[1]), Number(m[2])],
    );
    expect(markers.length).toBe(2);
    // same geometry, computed by hand: 640x420 canvas, margins 64/16/34/46,
    // x linear over [0.1, 0.5], y log10 over [10, 100]
    const px = (x: number) => 64 + ((x - 0.1) / 0.4) * (640 - 16 - 64);
    const py = (y: number) =>
      420 - 46 + ((Math.log10(y) - 1) / (2 - 1)) * (34 - (420 - 46));
    expect(markers[0][0]).toBeCloseTo(px(0.1), 6);
    expect(markers[0][1]).toBeCloseTo(py(100), 6);
    expect(markers[1][0]).toBeCloseTo(px(0.5), 6);
    expect(markers[1][1]).toBeCloseTo(py(10), 6);
  });

  it("rejects a sweep with nothing reached rather than emitting an empty plot", () => {
    const csv = tmp("none.csv");
    writeFileSync(csv, "backend,objective,copies,reached\nA,0.5,,0\n");
    const out = tmp("none.svg");
    expect(() => plotResources(csv, out)).toThrow(CsvError);
    expect(existsSync(out)).toBe(false);
  });
});
