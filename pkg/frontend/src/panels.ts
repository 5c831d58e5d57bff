/** PMD heatmap panels and the stacked multi-panel composite. */

import { existsSync, mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { colorCoordinate, ScaleKind, viridis, viridisHex } from "./color.js";
import { describeDistribution, PmdGrid, readMetaSidecar, readPmd } from "./pmd.js";
import { encodePng } from "./png.js";
import { el, fmt, linearTicks, svgDocument, text, tickLabel } from "./svg.js";

export interface PanelSpec {
  /** pmd.csv emitted by the engine CLI. */
  input: string;
  /** Panel caption; defaults to the distribution line from the sidecar. */
  title?: string;
  /** Color scale; PMDs span decades, so log is the default. */
  scale?: ScaleKind;
  /** Decades below peak shown by the log scale. */
  decades?: number;
  /** Draw the yield_norm column instead of raw yields. */
  normalized?: boolean;
}

export interface CompositeLayout {
  rows: number;
  columns: number;
}

const PANEL_W = 480;
const PANEL_H = 240;
const MARGIN = { left: 64, right: 86, top: 28, bottom: 40 };
const PLOT_W = PANEL_W - MARGIN.left - MARGIN.right;
const PLOT_H = PANEL_H - MARGIN.top - MARGIN.bottom;

function heatmapPixels(grid: PmdGrid, scale: ScaleKind, decades: number): Uint8Array {
  const nx = grid.px.length;
  const ny = grid.py.length;
  const pixels = new Uint8Array(4 * nx * ny);
  for (let row = 0; row < ny; row++) {
    // image rows run top to bottom; +p_y is the top of the panel
    const iy = ny - 1 - row;
    for (let ix = 0; ix < nx; ix++) {
      const v = grid.values[ix * ny + iy]!;
      const [r, g, b] = viridis(colorCoordinate(v, grid.peak, scale, decades));
      const at = 4 * (row * nx + ix);
      pixels[at] = r;
      pixels[at + 1] = g;
      pixels[at + 2] = b;
      pixels[at + 3] = 255;
    }
  }
  return pixels;
}

function colorbar(x: number, y: number, scale: ScaleKind, decades: number, gradientId: string): string {
  const stops = Array.from({ length: 9 }, (_, i) => i / 8)
    .map((t) =>
      el("stop", {
        offset: `${Math.round(100 * t)}%`,
        "stop-color": viridisHex(t),
      }),
    )
    .join("");
  // gradient runs bottom (floor) to top (peak)
  const defs = el(
    "defs",
    {},
    el(
      "linearGradient",
      { id: gradientId, x1: 0, y1: 1, x2: 0, y2: 0 },
      stops,
    ),
  );
  const barW = 12;
  const bar = el("rect", {
    x,
    y,
    width: barW,
    height: PLOT_H,
    fill: `url(#${gradientId})`,
    stroke: "#333",
    "stroke-width": 0.5,
  });
  const topLabel = scale === "log" ? "1" : "peak";
  const botLabel = scale === "log" ? `1e-${decades}` : "0";
  const labels =
    text(topLabel, { x: x + barW + 4, y: y + 9, "font-size": 9 }) +
    text(botLabel, { x: x + barW + 4, y: y + PLOT_H, "font-size": 9 });
  const cap = text(scale === "log" ? "Y / peak (log)" : "Y / peak", {
    x: x + barW + 4,
    y: y + PLOT_H / 2,
    "font-size": 9,
    transform: `rotate(90 ${fmt(x + barW + 4)} ${fmt(y + PLOT_H / 2)})`,
    "text-anchor": "middle",
  });
  return defs + bar + labels + cap;
}

/** One panel as an SVG fragment translated to (0, 0); caller positions it. */
function panelFragment(spec: PanelSpec, index: number): string {
  const grid = readPmd(spec.input, spec.normalized ? "yield_norm" : "yield");
  const scale = spec.scale ?? "log";
  const decades = spec.decades ?? 6;
  const title =
    spec.title ?? describeDistribution(readMetaSidecar(spec.input)) ?? spec.input;

  const png = encodePng(
    grid.px.length,
    grid.py.length,
    heatmapPixels(grid, scale, decades),
  );
  const href = `data:image/png;base64,${png.toString("base64")}`;

  const x0 = grid.px[0]!;
  const x1 = grid.px[grid.px.length - 1]!;
  const y0 = grid.py[0]!;
  const y1 = grid.py[grid.py.length - 1]!;
  const sx = (v: number) => MARGIN.left + ((v - x0) / (x1 - x0)) * PLOT_W;
  const sy = (v: number) => MARGIN.top + ((y1 - v) / (y1 - y0)) * PLOT_H;

  const parts: string[] = [];
  parts.push(
    el("image", {
      x: MARGIN.left,
      y: MARGIN.top,
      width: PLOT_W,
      height: PLOT_H,
      href,
      preserveAspectRatio: "none",
      "image-rendering": "pixelated",
    }),
  );
  parts.push(
    el("rect", {
      x: MARGIN.left,
      y: MARGIN.top,
      width: PLOT_W,
      height: PLOT_H,
      fill: "none",
      stroke: "#333",
      "stroke-width": 0.8,
    }),
  );
  for (const v of linearTicks(x0, x1)) {
    parts.push(
      el("line", {
        x1: sx(v), y1: MARGIN.top + PLOT_H,
        x2: sx(v), y2: MARGIN.top + PLOT_H + 4,
        stroke: "#333", "stroke-width": 0.8,
      }),
      text(tickLabel(v), {
        x: sx(v), y: MARGIN.top + PLOT_H + 14,
        "font-size": 9, "text-anchor": "middle",
      }),
    );
  }
  for (const v of linearTicks(y0, y1, 4)) {
    parts.push(
      el("line", {
        x1: MARGIN.left - 4, y1: sy(v),
        x2: MARGIN.left, y2: sy(v),
        stroke: "#333", "stroke-width": 0.8,
      }),
      text(tickLabel(v), {
        x: MARGIN.left - 6, y: sy(v) + 3,
        "font-size": 9, "text-anchor": "end",
      }),
    );
  }
  parts.push(
    text("p_x (a.u.)", {
      x: MARGIN.left + PLOT_W / 2, y: PANEL_H - 8,
      "font-size": 10, "text-anchor": "middle",
    }),
    text("p_y (a.u.)", {
      x: 14, y: MARGIN.top + PLOT_H / 2,
      "font-size": 10, "text-anchor": "middle",
      transform: `rotate(-90 14 ${fmt(MARGIN.top + PLOT_H / 2)})`,
    }),
    text(title, {
      x: MARGIN.left + PLOT_W / 2, y: MARGIN.top - 8,
      "font-size": 11, "text-anchor": "middle",
    }),
  );
  parts.push(
    colorbar(MARGIN.left + PLOT_W + 14, MARGIN.top, scale, decades, `cb${index}`),
  );
  return parts.join("");
}

function writeFileEnsuringDir(path: string, content: string | Buffer): void {
  mkdirSync(dirname(path), { recursive: true });
  writeFileSync(path, content);
}

function checkInputsExist(specs: PanelSpec[]): void {
  for (const spec of specs) {
    if (!existsSync(spec.input)) {
      throw new Error(`panel input does not exist: ${spec.input}`);
    }
  }
}

/** Single heatmap panel -> SVG file. */
export function renderPmdPanel(spec: PanelSpec, output: string): void {
  checkInputsExist([spec]);
  const body = panelFragment(spec, 0);
  writeFileEnsuringDir(output, svgDocument(PANEL_W, PANEL_H, body));
}

/**
 * Grid of panels in one SVG (the five-row figure is the rows x 1 case).
 * The layout must have exactly one cell per panel.
 */
export function renderPmdComposite(
  specs: PanelSpec[],
  output: string,
  layout?: CompositeLayout,
): void {
  if (specs.length === 0) throw new Error("composite needs at least one panel");
  const shape = layout ?? { rows: specs.length, columns: 1 };
  if (shape.rows * shape.columns !== specs.length) {
    throw new Error(
      `layout has ${shape.rows * shape.columns} cells for ${specs.length} panels`,
    );
  }
  checkInputsExist(specs);
  const body = specs
    .map((spec, i) => {
      const row = Math.floor(i / shape.columns);
      const col = i % shape.columns;
      return el(
        "g",
        { transform: `translate(${fmt(col * PANEL_W)} ${fmt(row * PANEL_H)})` },
        panelFragment(spec, i),
      );
    })
    .join("");
  writeFileEnsuringDir(
    output,
    svgDocument(shape.columns * PANEL_W, shape.rows * PANEL_H, body),
  );
}
