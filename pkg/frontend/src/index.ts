export { num, readTable, requireColumns, SchemaError } from "./csv.js";
export { colorCoordinate, viridis, viridisHex } from "./color.js";
export type { ScaleKind } from "./color.js";
export { describeDistribution, readMetaSidecar, readPmd } from "./pmd.js";
export type { PmdGrid } from "./pmd.js";
export { encodePng } from "./png.js";
export { renderPmdComposite, renderPmdPanel } from "./panels.js";
export type { CompositeLayout, PanelSpec } from "./panels.js";
export { readScan, renderScan } from "./scan.js";
export type { ScanSeries } from "./scan.js";
export { readTunnelTimes, renderTunnelTimes } from "./tunnel.js";
export type { TunnelData, TunnelPlotOptions } from "./tunnel.js";
export { main } from "./cli.js";
