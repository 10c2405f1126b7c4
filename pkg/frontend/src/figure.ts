/**
 * SVG sweep figure: mean equilibrium error vs number of initializations,
 * one curve per algorithm with 95% CI error bars.
 *
 * The renderer is a pure function of the parsed CSV rows: no statistics are
 * recomputed.  Every data row becomes one `line.errorbar` element carrying
 * `data-algorithm`, `data-k`, `data-mean` and `data-ci95` attributes, and
 * every algorithm becomes one `polyline.curve`; algorithms with a single
 * row (the classic baseline) are drawn as a flat dashed reference across
 * the x range.  The root plot group records the axis domains so structural
 * tests can verify geometry without rasterizing.
 */

import type { SweepRow } from "./csv.js";

export interface FigureOptions {
  title?: string;
  xLabel?: string;
  yLabel?: string;
  logy?: boolean;
}

const W = 640;
const H = 400;
const ML = 72;
const MR = 24;
const MT = 42;
const MB = 54;
const PW = W - ML - MR;
const PH = H - MT - MB;

const PALETTE = [
  "#4361ee",
  "#e63946",
  "#2d6a4f",
  "#f77f00",
  "#7209b7",
  "#0096c7",
  "#6c584c",
];

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const magnitude = Math.pow(10, Math.floor(Math.log10(rough)));
  const step =
    [1, 2, 5, 10].map((m) => m * magnitude).find((s) => s >= rough) ?? rough;
  const ticks: number[] = [];
  for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
    ticks.push(v);
  }
  return ticks;
}

function formatTick(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 0.01 && abs < 10_000) {
    return Number(v.toPrecision(3)).toString();
  }
  return v.toExponential(1);
}

export function buildSweepFigure(rows: SweepRow[], options: FigureOptions = {}): string {
  if (rows.length === 0) {
    throw new Error("no rows to plot");
  }
  const logy = options.logy ?? false;
  const algorithms: string[] = [];
  for (const row of rows) {
    if (!algorithms.includes(row.algorithm)) algorithms.push(row.algorithm);
  }
  const byAlgorithm = new Map<string, SweepRow[]>(
    algorithms.map((a) => [a, rows.filter((r) => r.algorithm === a).sort((x, y) => x.k - y.k)])
  );

  const xMin = Math.min(...rows.map((r) => r.k));
  const xMax = Math.max(...rows.map((r) => r.k));
  const yLow = rows.map((r) => r.mean - r.ci95);
  const yHigh = rows.map((r) => r.mean + r.ci95);
  let yMin: number;
  let yMax: number;
  if (logy) {
    const positives = rows.map((r) => r.mean).filter((v) => v > 0);
    if (positives.length === 0) {
      throw new Error("log scale requires positive means");
    }
    const floor = Math.min(...positives) / 2;
    yMin = Math.min(...yLow.map((v) => (v > 0 ? v : floor)));
    yMax = Math.max(...yHigh);
  } else {
    yMin = Math.min(0, ...yLow);
    yMax = Math.max(...yHigh) * 1.05;
  }

  const xOf = (k: number) =>
    ML + ((k - xMin) / (xMax - xMin || 1)) * PW;
  const yOf = (v: number) => {
    if (logy) {
      const clamped = Math.max(v, yMin);
      return (
        MT +
        PH -
        ((Math.log10(clamped) - Math.log10(yMin)) /
          (Math.log10(yMax) - Math.log10(yMin) || 1)) *
          PH
      );
    }
    return MT + PH - ((v - yMin) / (yMax - yMin || 1)) * PH;
  };

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;
  s += `<text x="${ML}" y="${MT - 18}" font-size="13" font-weight="600" fill="#222">${esc(
    options.title ?? "Mean equilibrium error vs initializations"
  )}</text>\n`;
  s += `<g class="plot" data-x-min="${xMin}" data-x-max="${xMax}" data-y-min="${yMin}" data-y-max="${yMax}" data-y-scale="${logy ? "log" : "linear"}">\n`;

  // gridlines + y ticks
  const yTicks = logy
    ? (() => {
        const ticks: number[] = [];
        for (
          let e = Math.ceil(Math.log10(yMin));
          e <= Math.floor(Math.log10(yMax)) + 1e-9;
          e++
        ) {
          ticks.push(Math.pow(10, e));
        }
        return ticks.length >= 2 ? ticks : [yMin, yMax];
      })()
    : niceTicks(yMin, yMax, 6);
  for (const v of yTicks) {
    const y = yOf(v);
    s += `<line x1="${ML}" y1="${y.toFixed(1)}" x2="${ML + PW}" y2="${y.toFixed(1)}" stroke="#eee" stroke-width="0.6"/>\n`;
    s += `<text x="${ML - 6}" y="${(y + 3.5).toFixed(1)}" text-anchor="end" font-size="10" fill="#555">${esc(formatTick(v))}</text>\n`;
  }

  // x ticks at the K values present
  const kValues = [...new Set(rows.map((r) => r.k))].sort((a, b) => a - b);
  for (const k of kValues) {
    const x = xOf(k);
    s += `<line x1="${x.toFixed(1)}" y1="${MT + PH}" x2="${x.toFixed(1)}" y2="${MT + PH + 4}" stroke="#333" stroke-width="0.6"/>\n`;
    s += `<text x="${x.toFixed(1)}" y="${MT + PH + 16}" text-anchor="middle" font-size="10" fill="#555">${k}</text>\n`;
  }

  // axes
  s += `<line x1="${ML}" y1="${MT}" x2="${ML}" y2="${MT + PH}" stroke="#333" stroke-width="0.8"/>\n`;
  s += `<line x1="${ML}" y1="${MT + PH}" x2="${ML + PW}" y2="${MT + PH}" stroke="#333" stroke-width="0.8"/>\n`;
  s += `<text x="${ML + PW / 2}" y="${H - 12}" text-anchor="middle" font-size="11" fill="#333">${esc(
    options.xLabel ?? "initializations K"
  )}</text>\n`;
  s += `<text x="18" y="${MT + PH / 2}" text-anchor="middle" font-size="11" fill="#333" transform="rotate(-90,18,${MT + PH / 2})">${esc(
    options.yLabel ?? "mean epsilon*"
  )}</text>\n`;

  // series
  algorithms.forEach((algorithm, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    const series = byAlgorithm.get(algorithm)!;
    const flat = series.length === 1;
    s += `<g class="series" data-algorithm="${esc(algorithm)}">\n`;
    const points = flat
      ? [
          [xOf(xMin), yOf(series[0].mean)],
          [xOf(xMax), yOf(series[0].mean)],
        ]
      : series.map((r) => [xOf(r.k), yOf(r.mean)]);
    const path = points.map(([x, y]) => `${x.toFixed(1)},${y.toFixed(1)}`).join(" ");
    const dash = flat ? ' stroke-dasharray="6,4"' : "";
    s += `<polyline class="curve${flat ? " reference" : ""}" data-algorithm="${esc(algorithm)}" fill="none" stroke="${color}" stroke-width="1.6"${dash} points="${path}"/>\n`;
    for (const row of series) {
      const x = xOf(row.k);
      const top = yOf(row.mean + row.ci95);
      const bottom = yOf(logy ? Math.max(row.mean - row.ci95, yMin) : row.mean - row.ci95);
      s += `<line class="errorbar" data-algorithm="${esc(algorithm)}" data-k="${row.k}" data-mean="${row.mean}" data-ci95="${row.ci95}" x1="${x.toFixed(1)}" y1="${top.toFixed(1)}" x2="${x.toFixed(1)}" y2="${bottom.toFixed(1)}" stroke="${color}" stroke-width="1"/>\n`;
      s += `<line class="errorbar-cap" x1="${(x - 3).toFixed(1)}" y1="${top.toFixed(1)}" x2="${(x + 3).toFixed(1)}" y2="${top.toFixed(1)}" stroke="${color}" stroke-width="1"/>\n`;
      s += `<line class="errorbar-cap" x1="${(x - 3).toFixed(1)}" y1="${bottom.toFixed(1)}" x2="${(x + 3).toFixed(1)}" y2="${bottom.toFixed(1)}" stroke="${color}" stroke-width="1"/>\n`;
      s += `<circle class="marker" cx="${x.toFixed(1)}" cy="${yOf(row.mean).toFixed(1)}" r="2.4" fill="${color}"/>\n`;
    }
    s += `</g>\n`;
  });

  // legend
  const legendX = ML + PW - 150;
  let legendY = MT + 10;
  s += `<rect x="${legendX - 8}" y="${legendY - 10}" width="156" height="${algorithms.length * 15 + 8}" rx="3" fill="#fff" fill-opacity="0.85"/>\n`;
  algorithms.forEach((algorithm, idx) => {
    const color = PALETTE[idx % PALETTE.length];
    s += `<line x1="${legendX}" y1="${legendY}" x2="${legendX + 18}" y2="${legendY}" stroke="${color}" stroke-width="1.6"/>\n`;
    s += `<text x="${legendX + 24}" y="${legendY + 3.5}" font-size="10" fill="#333">${esc(algorithm)}</text>\n`;
    legendY += 15;
  });

  s += `</g>\n</svg>\n`;
  return s;
}
