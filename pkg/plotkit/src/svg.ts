/**
 * Minimal hand-rolled SVG charts: polyline series, shaded min/max
 * bands, reference curves, linear or log10 axes with tick labels.
 *
 * The generated markup embeds machine-readable scale metadata
 * (data-x-scale / data-y-scale / data-y-ticks) so tests can verify the
 * axes without rasterizing anything.
 */

export type Scale = "linear" | "log";

export interface Series {
  label: string;
  x: number[];
  y: (number | null)[];
  color: string;
  width?: number;
  dash?: string;
  markers?: boolean;
}

export interface Band {
  x: number[];
  lo: number[];
  hi: number[];
  color: string;
  opacity?: number;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  width?: number;
  height?: number;
  xScale?: Scale;
  yScale?: Scale;
  series: Series[];
  bands?: Band[];
  yMin?: number;
  yMax?: number;
}

const MARGIN = { left: 64, right: 16, top: 34, bottom: 46 };

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

class Axis {
  constructor(
    readonly scale: Scale,
    readonly min: number,
    readonly max: number,
    readonly pixel0: number,
    readonly pixel1: number,
  ) {
    if (scale === "log" && (min <= 0 || max <= 0)) {
      throw new Error("log axis needs positive data");
    }
  }

  place(value: number): number {
    const [a, b] =
      this.scale === "log"
        ? [Math.log10(this.min), Math.log10(this.max)]
        : [this.min, this.max];
    const v = this.scale === "log" ? Math.log10(value) : value;
    const t = b === a ? 0.5 : (v - a) / (b - a);
    return this.pixel0 + t * (this.pixel1 - this.pixel0);
  }

  ticks(): number[] {
    if (this.scale === "log") {
      // flanking decades keep short ranges readable
      const lo = Math.floor(Math.log10(this.min));
      const hi = Math.ceil(Math.log10(this.max));
      const out: number[] = [];
      for (let e = lo; e <= hi; e++) out.push(10 ** e);
      return out;
    }
    const span = this.max - this.min || 1;
    const step = 10 ** Math.floor(Math.log10(span / 4));
    const mult = span / 4 / step >= 5 ? 5 : span / 4 / step >= 2 ? 2 : 1;
    const nice = step * mult;
    const first = Math.ceil(this.min / nice) * nice;
    const out: number[] = [];
    for (let v = first; v <= this.max + nice * 1e-9; v += nice) out.push(v);
    return out;
  }
}

function fmt(value: number): string {
  if (value === 0) return "0";
  const mag = Math.abs(value);
  if (mag >= 10000 || mag < 0.01) return value.toExponential(0).replace("+", "");
  return String(Math.round(value * 1000) / 1000);
}

function dataRange(values: number[], scale: Scale): [number, number] {
  const usable = values.filter((v) => Number.isFinite(v) && (scale !== "log" || v > 0));
  if (usable.length === 0) throw new Error("no plottable values");
  let lo = Math.min(...usable);
  let hi = Math.max(...usable);
  if (lo === hi) {
    lo = scale === "log" ? lo / 2 : lo - 1;
    hi = scale === "log" ? hi * 2 : hi + 1;
  }
  return [lo, hi];
}

export function buildChart(opts: ChartOptions): string {
  const width = opts.width ?? 640;
  const height = opts.height ?? 420;
  const xScale = opts.xScale ?? "linear";
  const yScale = opts.yScale ?? "linear";

  const xs = opts.series.flatMap((s) => s.x).concat(opts.bands?.flatMap((b) => b.x) ?? []);
  const ysRaw = opts.series
    .flatMap((s) => s.y)
    .concat(opts.bands?.flatMap((b) => [...b.lo, ...b.hi]) ?? []);
  const ys = ysRaw.filter((v): v is number => v !== null);
  let [xMin, xMax] = dataRange(xs, xScale);
  let [yMin, yMax] = dataRange(ys, yScale);
  if (yScale === "log") {
    // expand to whole decades so every tick lies inside the frame
    yMin = 10 ** Math.floor(Math.log10(yMin));
    yMax = 10 ** Math.ceil(Math.log10(yMax));
  }
  if (xScale === "log") {
    xMin = 10 ** Math.floor(Math.log10(xMin));
    xMax = 10 ** Math.ceil(Math.log10(xMax));
  }
  if (opts.yMin !== undefined) yMin = opts.yMin;
  if (opts.yMax !== undefined) yMax = opts.yMax;

  const xAxis = new Axis(xScale, xMin, xMax, MARGIN.left, width - MARGIN.right);
  const yAxis = new Axis(yScale, yMin, yMax, height - MARGIN.bottom, MARGIN.top);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" data-x-scale="${xScale}" data-y-scale="${yScale}" ` +
      `data-y-ticks="${yAxis.ticks().map(fmt).join("|")}" ` +
      `data-x-ticks="${xAxis.ticks().map(fmt).join("|")}">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
  parts.push(
    `<text x="${width / 2}" y="20" text-anchor="middle" font-size="14" ` +
      `font-family="sans-serif" font-weight="bold">${esc(opts.title)}</text>`,
  );

  // grid and ticks
  for (const tick of yAxis.ticks()) {
    const y = yAxis.place(tick);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y}" x2="${width - MARGIN.right}" y2="${y}" ` +
        `stroke="#ddd" stroke-width="0.6"/>`,
      `<text x="${MARGIN.left - 6}" y="${y + 3}" text-anchor="end" font-size="10" ` +
        `font-family="sans-serif">${fmt(tick)}</text>`,
    );
  }
  for (const tick of xAxis.ticks()) {
    const x = xAxis.place(tick);
    parts.push(
      `<line x1="${x}" y1="${height - MARGIN.bottom}" x2="${x}" y2="${MARGIN.top}" ` +
        `stroke="#eee" stroke-width="0.6"/>`,
      `<text x="${x}" y="${height - MARGIN.bottom + 14}" text-anchor="middle" ` +
        `font-size="10" font-family="sans-serif">${fmt(tick)}</text>`,
    );
  }
  parts.push(
    `<line x1="${MARGIN.left}" y1="${height - MARGIN.bottom}" x2="${width - MARGIN.right}" ` +
      `y2="${height - MARGIN.bottom}" stroke="black" stroke-width="1"/>`,
    `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
      `y2="${height - MARGIN.bottom}" stroke="black" stroke-width="1"/>`,
    `<text x="${(MARGIN.left + width - MARGIN.right) / 2}" y="${height - 8}" ` +
      `text-anchor="middle" font-size="12" font-family="sans-serif">${esc(opts.xLabel)}</text>`,
    `<text x="16" y="${(MARGIN.top + height - MARGIN.bottom) / 2}" text-anchor="middle" ` +
      `font-size="12" font-family="sans-serif" transform="rotate(-90 16 ` +
      `${(MARGIN.top + height - MARGIN.bottom) / 2})">${esc(opts.yLabel)}</text>`,
  );

  const clampY = (v: number) =>
    yScale === "log" ? Math.min(Math.max(v, yMin), yMax) : v;

  for (const band of opts.bands ?? []) {
    const upper = band.x.map((x, i) => `${xAxis.place(x)},${yAxis.place(clampY(band.hi[i]))}`);
    const lower = band.x
      .map((x, i) => `${xAxis.place(x)},${yAxis.place(clampY(band.lo[i]))}`)
      .reverse();
    parts.push(
      `<polygon class="band" points="${upper.concat(lower).join(" ")}" ` +
        `fill="${band.color}" opacity="${band.opacity ?? 0.25}" stroke="none"/>`,
    );
  }

  for (const series of opts.series) {
    const segments: string[][] = [[]];
    series.x.forEach((x, i) => {
      const y = series.y[i];
      if (y === null || (yScale === "log" && y <= 0)) {
        if (segments[segments.length - 1].length > 0) segments.push([]);
        return;
      }
      segments[segments.length - 1].push(`${xAxis.place(x)},${yAxis.place(clampY(y))}`);
    });
    for (const seg of segments) {
      if (seg.length === 0) continue;
      parts.push(
        `<polyline class="series" data-label="${esc(series.label)}" points="${seg.join(" ")}" ` +
          `fill="none" stroke="${series.color}" stroke-width="${series.width ?? 1.5}"` +
          (series.dash ? ` stroke-dasharray="${series.dash}"` : "") +
          `/>`,
      );
    }
    if (series.markers) {
      series.x.forEach((x, i) => {
        const y = series.y[i];
        if (y === null || (yScale === "log" && y <= 0)) return;
        parts.push(
          `<circle class="marker" data-label="${esc(series.label)}" cx="${xAxis.place(x)}" ` +
            `cy="${yAxis.place(clampY(y))}" r="3" fill="${series.color}"/>`,
        );
      });
    }
  }

  // legend
  let ly = MARGIN.top + 8;
  for (const series of opts.series) {
    const lx = width - MARGIN.right - 180;
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 22}" y2="${ly}" stroke="${series.color}" ` +
        `stroke-width="${series.width ?? 1.5}"` +
        (series.dash ? ` stroke-dasharray="${series.dash}"` : "") +
        `/>`,
      `<text x="${lx + 28}" y="${ly + 3}" font-size="11" font-family="sans-serif">` +
        `${esc(series.label)}</text>`,
    );
    ly += 16;
  }

  parts.push("</svg>");
  return parts.join("\n");
}

export const PALETTE = [
  "#4361ee",
  "#e63946",
  "#2d6a4f",
  "#f77f00",
  "#7209b7",
  "#118ab2",
];
