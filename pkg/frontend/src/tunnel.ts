/** Release-time scatter (Im t_sp vs p_x) with Husimi-weight transparency
 * and the weighted-variance curve, from tunnel_times.csv. */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { num, readTable, requireColumns, SchemaError } from "./csv.js";
import { el, fmt, linearTicks, svgDocument, text, tickLabel } from "./svg.js";

export interface TunnelData {
  path: string;
  nodes: { event: number; px: number; imT: number; weight: number }[];
  summary: { event: number; px: number; meanIm: number; varIm: number; excluded: number }[];
}

const HEADER = [
  "row_type", "event", "px", "im_t", "weight", "mean_im", "var_im", "excluded",
];

export function readTunnelTimes(path: string): TunnelData {
  const table = readTable(path);
  requireColumns(table, HEADER);
  const data: TunnelData = { path, nodes: [], summary: [] };
  for (let i = 0; i < table.rows.length; i++) {
    const kind = table.rows[i]![0]!;
    if (kind === "node") {
      data.nodes.push({
        event: num(table, i, 1),
        px: num(table, i, 2),
        imT: num(table, i, 3),
        weight: num(table, i, 4),
      });
    } else if (kind === "summary") {
      data.summary.push({
        event: num(table, i, 1),
        px: num(table, i, 2),
        meanIm: num(table, i, 5),
        varIm: num(table, i, 6),
        excluded: num(table, i, 7),
      });
    } else {
      throw new SchemaError(
        `${path}: row ${i + 2}: unknown row_type '${kind}'`,
      );
    }
  }
  if (data.nodes.length === 0 || data.summary.length === 0) {
    throw new SchemaError(`${path}: needs both node and summary rows`);
  }
  return data;
}

const W = 460;
const H = 320;
const M = { left: 64, right: 64, top: 24, bottom: 48 };
const PW = W - M.left - M.right;
const PH = H - M.top - M.bottom;

export interface TunnelPlotOptions {
  /** Restrict to one ionization event (rows carry the event label). */
  event?: number;
}

export function renderTunnelTimes(
  data: TunnelData,
  output: string,
  options: TunnelPlotOptions = {},
): void {
  const nodes =
    options.event === undefined
      ? data.nodes
      : data.nodes.filter((n) => n.event === options.event);
  const summary =
    options.event === undefined
      ? data.summary
      : data.summary.filter((s) => s.event === options.event);
  if (nodes.length === 0 || summary.length === 0) {
    throw new SchemaError(
      `${data.path}: no rows for event ${options.event}`,
    );
  }

  const xs = summary.map((s) => s.px);
  const x0 = Math.min(...xs);
  const x1 = Math.max(...xs);
  const ys = nodes.map((n) => n.imT);
  const y0 = Math.min(...ys);
  const y1 = Math.max(...ys);
  const pad = 0.05 * (y1 - y0 || 1);
  const maxWeight = Math.max(...nodes.map((n) => n.weight));
  const maxVar = Math.max(...summary.map((s) => s.varIm), 1e-300);

  const sx = (v: number) => M.left + ((v - x0) / (x1 - x0)) * PW;
  const sy = (v: number) => M.top + ((y1 + pad - v) / (y1 - y0 + 2 * pad)) * PH;
  const syVar = (v: number) => M.top + (1 - v / (1.15 * maxVar)) * PH;

  const parts: string[] = [];
  parts.push(
    el("rect", {
      x: M.left, y: M.top, width: PW, height: PH,
      fill: "none", stroke: "#333", "stroke-width": 0.8,
    }),
  );
  for (const v of linearTicks(x0, x1)) {
    parts.push(
      el("line", {
        x1: sx(v), y1: M.top + PH, x2: sx(v), y2: M.top + PH + 4,
        stroke: "#333", "stroke-width": 0.8,
      }),
      text(tickLabel(v), {
        x: sx(v), y: M.top + PH + 15, "font-size": 9, "text-anchor": "middle",
      }),
    );
  }
  for (const v of linearTicks(y0 - pad, y1 + pad, 5)) {
    parts.push(
      el("line", {
        x1: M.left - 4, y1: sy(v), x2: M.left, y2: sy(v),
        stroke: "#333", "stroke-width": 0.8,
      }),
      text(tickLabel(v), {
        x: M.left - 6, y: sy(v) + 3, "font-size": 9, "text-anchor": "end",
      }),
    );
  }

  // scatter: opacity carries the Husimi weight of each node
  for (const n of nodes) {
    const alpha = Math.max(0.02, n.weight / maxWeight);
    parts.push(
      el("circle", {
        cx: sx(n.px), cy: sy(n.imT), r: 2,
        fill: "#1f77b4",
        "fill-opacity": alpha.toFixed(3),
      }),
    );
  }

  // weighted-variance overlay on the right-hand axis
  const sorted = [...summary].sort((a, b) => a.px - b.px);
  const varPath = sorted
    .map((s, i) => `${i === 0 ? "M" : "L"}${fmt(sx(s.px))} ${fmt(syVar(s.varIm))}`)
    .join(" ");
  parts.push(
    el("path", { d: varPath, fill: "none", stroke: "#d62728", "stroke-width": 1.4 }),
  );
  for (const v of [0, maxVar]) {
    parts.push(
      el("line", {
        x1: M.left + PW, y1: syVar(v), x2: M.left + PW + 4, y2: syVar(v),
        stroke: "#d62728", "stroke-width": 0.8,
      }),
      text(v === 0 ? "0" : v.toExponential(1), {
        x: M.left + PW + 6, y: syVar(v) + 3, "font-size": 9, fill: "#d62728",
      }),
    );
  }

  parts.push(
    text("p_x (a.u.)", {
      x: M.left + PW / 2, y: H - 10, "font-size": 11, "text-anchor": "middle",
    }),
    text("Im t_sp (a.u.)", {
      x: 14, y: M.top + PH / 2, "font-size": 11, "text-anchor": "middle",
      transform: `rotate(-90 14 ${fmt(M.top + PH / 2)})`,
    }),
    text("Var_Q[Im t_sp]", {
      x: W - 12, y: M.top + PH / 2, "font-size": 11, "text-anchor": "middle",
      fill: "#d62728",
      transform: `rotate(90 ${fmt(W - 12)} ${fmt(M.top + PH / 2)})`,
    }),
    text(`event ${[...new Set(summary.map((s) => s.event))].join(", ")}`, {
      x: M.left + PW / 2, y: M.top - 8, "font-size": 11, "text-anchor": "middle",
    }),
  );

  mkdirSync(dirname(output), { recursive: true });
  writeFileSync(output, svgDocument(W, H, parts.join("")));
}
