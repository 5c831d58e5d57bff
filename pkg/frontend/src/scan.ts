/** Mean-momentum vs mean-intensity plot from scan.csv (log-log). */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { num, readTable, requireColumns, SchemaError, Table } from "./csv.js";
import { decadeTicks, el, fmt, svgDocument, text } from "./svg.js";

export interface ScanSeries {
  path: string;
  label: string;
  points: { intensity: number; meanPx: number; skewPx: number }[];
  /** Present only when the CSV carries the fit rows. */
  fit?: { slope: number; rSquared?: number };
}

function isFitRow(table: Table, row: number): boolean {
  const tag = table.rows[row]![0]!;
  return tag === "fit_slope" || tag === "fit_r_squared";
}

export function readScan(path: string, label?: string): ScanSeries {
  const table = readTable(path);
  requireColumns(table, ["I_w_Wcm2", "mean_px", "skew_px"]);
  const series: ScanSeries = { path, label: label ?? path, points: [] };
  let slope: number | undefined;
  let rSquared: number | undefined;
  for (let i = 0; i < table.rows.length; i++) {
    if (isFitRow(table, i)) {
      if (table.rows[i]![0] === "fit_slope") slope = num(table, i, 1);
      else rSquared = num(table, i, 1);
      continue;
    }
    series.points.push({
      intensity: num(table, i, 0),
      meanPx: num(table, i, 1),
      skewPx: num(table, i, 2),
    });
  }
  if (series.points.length === 0) {
    throw new SchemaError(`${path}: scan has no data points`);
  }
  if (slope !== undefined) series.fit = { slope, rSquared };
  return series;
}

const W = 460;
const H = 340;
const M = { left: 70, right: 20, top: 24, bottom: 52 };
const PW = W - M.left - M.right;
const PH = H - M.top - M.bottom;
const SERIES_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/** Overlayed |<p_x>| vs intensity series with per-series slope labels. */
export function renderScan(series: ScanSeries[], output: string): void {
  if (series.length === 0) throw new Error("scan plot needs at least one series");
  const xs = series.flatMap((s) => s.points.map((p) => p.intensity));
  const ys = series.flatMap((s) => s.points.map((p) => Math.abs(p.meanPx)));
  if (ys.some((y) => !(y > 0))) {
    throw new SchemaError("scan contains zero |mean_px|; log axes impossible");
  }
  const x0 = Math.min(...xs) / 1.5;
  const x1 = Math.max(...xs) * 1.5;
  const y0 = Math.min(...ys) / 2;
  const y1 = Math.max(...ys) * 2;
  const sx = (v: number) =>
    M.left + ((Math.log10(v) - Math.log10(x0)) / (Math.log10(x1) - Math.log10(x0))) * PW;
  const sy = (v: number) =>
    M.top + ((Math.log10(y1) - Math.log10(v)) / (Math.log10(y1) - Math.log10(y0))) * PH;

  const parts: string[] = [];
  parts.push(
    el("rect", {
      x: M.left, y: M.top, width: PW, height: PH,
      fill: "none", stroke: "#333", "stroke-width": 0.8,
    }),
  );
  for (const v of decadeTicks(x0, x1)) {
    parts.push(
      el("line", {
        x1: sx(v), y1: M.top, x2: sx(v), y2: M.top + PH,
        stroke: "#ddd", "stroke-width": 0.6,
      }),
      text(`1e${Math.round(Math.log10(v))}`, {
        x: sx(v), y: M.top + PH + 16, "font-size": 10, "text-anchor": "middle",
      }),
    );
  }
  for (const v of decadeTicks(y0, y1)) {
    parts.push(
      el("line", {
        x1: M.left, y1: sy(v), x2: M.left + PW, y2: sy(v),
        stroke: "#ddd", "stroke-width": 0.6,
      }),
      text(`1e${Math.round(Math.log10(v))}`, {
        x: M.left - 6, y: sy(v) + 3, "font-size": 10, "text-anchor": "end",
      }),
    );
  }

  series.forEach((s, k) => {
    const color = SERIES_COLORS[k % SERIES_COLORS.length]!;
    const sorted = [...s.points].sort((a, b) => a.intensity - b.intensity);
    const path = sorted
      .map((p, i) => `${i === 0 ? "M" : "L"}${fmt(sx(p.intensity))} ${fmt(sy(Math.abs(p.meanPx)))}`)
      .join(" ");
    parts.push(
      el("path", { d: path, fill: "none", stroke: color, "stroke-width": 1.4 }),
    );
    for (const p of sorted) {
      parts.push(
        el("circle", {
          cx: sx(p.intensity), cy: sy(Math.abs(p.meanPx)), r: 3,
          fill: color, stroke: "white", "stroke-width": 0.8,
        }),
      );
    }
    const caption = s.fit
      ? `${s.label} (slope ${s.fit.slope.toFixed(2)})`
      : s.label;
    parts.push(
      el("line", {
        x1: M.left + 10, y1: M.top + 14 + 16 * k,
        x2: M.left + 30, y2: M.top + 14 + 16 * k,
        stroke: color, "stroke-width": 1.4,
      }),
      text(caption, {
        x: M.left + 36, y: M.top + 18 + 16 * k, "font-size": 10,
      }),
    );
  });

  parts.push(
    text("mean intensity (W/cm2)", {
      x: M.left + PW / 2, y: H - 12, "font-size": 11, "text-anchor": "middle",
    }),
    text("|<p_x>| (a.u.)", {
      x: 16, y: M.top + PH / 2, "font-size": 11, "text-anchor": "middle",
      transform: `rotate(-90 16 ${fmt(M.top + PH / 2)})`,
    }),
  );

  mkdirSync(dirname(output), { recursive: true });
  writeFileSync(output, svgDocument(W, H, parts.join("")));
}
