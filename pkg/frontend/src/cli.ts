#!/usr/bin/env node
/** Figure CLI over engine outputs.
 *
 *   qsfa-figs panel --input out/pmd.csv --out figs/pmd.svg [--linear] [--raw]
 *   qsfa-figs composite --spec figs/composite.json
 *   qsfa-figs scan --input out/scan_a.csv [--input out/scan_b.csv] --out figs/scan.svg
 *   qsfa-figs tunnel-times --input out/tunnel_times.csv --out figs/tt.svg [--event 1]
 *
 * The composite spec file is JSON:
 *   { "output": "figs/fig.svg", "columns": 1,
 *     "panels": [{ "input": "out/a/pmd.csv", "title": "...",
 *                  "scale": "log", "normalized": false }, ...] }
 */

import { readFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { CompositeLayout, PanelSpec, renderPmdComposite, renderPmdPanel } from "./panels.js";
import { readScan, renderScan } from "./scan.js";
import { readTunnelTimes, renderTunnelTimes } from "./tunnel.js";

function usageError(message: string): never {
  throw new Error(`${message} (run with no arguments for usage)`);
}

function panelCommand(argv: string[]): void {
  const { values } = parseArgs({
    args: argv,
    options: {
      input: { type: "string" },
      out: { type: "string" },
      title: { type: "string" },
      linear: { type: "boolean", default: false },
      raw: { type: "boolean", default: false },
      decades: { type: "string" },
    },
  });
  if (!values.input || !values.out) usageError("panel needs --input and --out");
  renderPmdPanel(
    {
      input: values.input,
      title: values.title,
      scale: values.linear ? "linear" : "log",
      normalized: !values.raw,
      decades: values.decades === undefined ? undefined : Number(values.decades),
    },
    values.out,
  );
  console.log(values.out);
}

interface CompositeFile {
  output: string;
  columns?: number;
  rows?: number;
  panels: PanelSpec[];
}

function compositeCommand(argv: string[]): void {
  const { values } = parseArgs({
    args: argv,
    options: { spec: { type: "string" } },
  });
  if (!values.spec) usageError("composite needs --spec");
  const spec = JSON.parse(readFileSync(values.spec, "utf8")) as CompositeFile;
  if (!spec.output || !Array.isArray(spec.panels)) {
    usageError(`${values.spec}: spec needs "output" and "panels"`);
  }
  const columns = spec.columns ?? 1;
  const layout: CompositeLayout = {
    columns,
    rows: spec.rows ?? Math.ceil(spec.panels.length / columns),
  };
  renderPmdComposite(spec.panels, spec.output, layout);
  console.log(spec.output);
}

function scanCommand(argv: string[]): void {
  const { values } = parseArgs({
    args: argv,
    options: {
      input: { type: "string", multiple: true },
      label: { type: "string", multiple: true },
      out: { type: "string" },
    },
  });
  if (!values.input?.length || !values.out) {
    usageError("scan needs --input (repeatable) and --out");
  }
  const series = values.input.map((path, i) =>
    readScan(path, values.label?.[i]),
  );
  renderScan(series, values.out);
  console.log(values.out);
}

function tunnelCommand(argv: string[]): void {
  const { values } = parseArgs({
    args: argv,
    options: {
      input: { type: "string" },
      out: { type: "string" },
      event: { type: "string" },
    },
  });
  if (!values.input || !values.out) {
    usageError("tunnel-times needs --input and --out");
  }
  renderTunnelTimes(readTunnelTimes(values.input), values.out, {
    event: values.event === undefined ? undefined : Number(values.event),
  });
  console.log(values.out);
}

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  try {
    switch (command) {
      case "panel":
        panelCommand(rest);
        return 0;
      case "composite":
        compositeCommand(rest);
        return 0;
      case "scan":
        scanCommand(rest);
        return 0;
      case "tunnel-times":
        tunnelCommand(rest);
        return 0;
      default:
        console.error(
          "usage: qsfa-figs {panel|composite|scan|tunnel-times} [options]",
        );
        return 2;
    }
  } catch (err) {
    console.error(`qsfa-figs ${command}: ${(err as Error).message}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
