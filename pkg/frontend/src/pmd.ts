/** Momentum-map loader: pmd.csv plus its optional meta sidecar. */

import { existsSync, readFileSync } from "node:fs";

import { num, readTable, requireColumns, SchemaError } from "./csv.js";

export interface PmdGrid {
  /** Ascending p_x sample positions (a.u.). */
  px: number[];
  /** Ascending p_y sample positions (a.u.). */
  py: number[];
  /** Row-major [ix * ny + iy], matching the px/py axes. */
  values: Float64Array;
  peak: number;
}

function axisIndex(axis: number[], value: number): number {
  // exact match: the CSV stores the axis values the engine used
  const i = axis.indexOf(value);
  if (i < 0) throw new SchemaError(`grid value ${value} missing from axis`);
  return i;
}

export function readPmd(path: string, column: "yield" | "yield_norm" = "yield"): PmdGrid {
  const table = readTable(path);
  requireColumns(table, ["px", "py", "yield", "yield_norm"]);
  if (table.rows.length === 0) {
    throw new SchemaError(`${path}: no yield rows; refusing to draw a blank panel`);
  }
  const col = column === "yield" ? 2 : 3;
  const pxSet = new Set<number>();
  const pySet = new Set<number>();
  for (let i = 0; i < table.rows.length; i++) {
    pxSet.add(num(table, i, 0));
    pySet.add(num(table, i, 1));
  }
  const px = [...pxSet].sort((a, b) => a - b);
  const py = [...pySet].sort((a, b) => a - b);
  if (px.length * py.length !== table.rows.length) {
    throw new SchemaError(
      `${path}: ${table.rows.length} rows do not fill a ` +
        `${px.length}x${py.length} grid`,
    );
  }
  const values = new Float64Array(px.length * py.length);
  let peak = 0.0;
  for (let i = 0; i < table.rows.length; i++) {
    const ix = axisIndex(px, num(table, i, 0));
    const iy = axisIndex(py, num(table, i, 1));
    const v = num(table, i, col);
    if (v < 0) {
      throw new SchemaError(`${path}: row ${i + 2}: negative yield ${v}`);
    }
    values[ix * py.length + iy] = v;
    if (v > peak) peak = v;
  }
  if (!(peak > 0)) {
    throw new SchemaError(`${path}: all yields are zero; nothing to draw`);
  }
  return { px, py, values, peak };
}

/** Metadata echoed by the CLI next to each CSV ("x.csv" -> "x.meta.json"). */
export function readMetaSidecar(csvPath: string): Record<string, unknown> | undefined {
  const metaPath = csvPath.replace(/\.csv$/, ".meta.json");
  if (metaPath === csvPath || !existsSync(metaPath)) return undefined;
  return JSON.parse(readFileSync(metaPath, "utf8")) as Record<string, unknown>;
}

/** Short panel caption from the sidecar, e.g. "squeezed r=12.15 phi=0". */
export function describeDistribution(meta: Record<string, unknown> | undefined): string | undefined {
  const config = meta?.["config"] as Record<string, unknown> | undefined;
  const dist = config?.["distribution"] as Record<string, unknown> | undefined;
  const kind = dist?.["kind"];
  if (typeof kind !== "string") return undefined;
  if (kind === "none") return "strong drive only";
  const parts = [kind];
  if (typeof dist?.["r"] === "number") parts.push(`r=${dist["r"]}`);
  if (kind === "squeezed" && typeof dist?.["phi"] === "number") {
    parts.push(`phi=${dist["phi"]}`);
  }
  const intensity = dist?.["intensity_wcm2"];
  if (typeof intensity === "number") {
    parts.push(`I=${intensity.toExponential(1).replace("+", "")} W/cm2`);
  }
  return parts.join(" ");
}
