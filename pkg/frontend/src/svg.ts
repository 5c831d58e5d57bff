/** Tiny SVG assembly helpers with deterministic number formatting. */

export function fmt(x: number): string {
  if (!Number.isFinite(x)) throw new Error(`non-finite coordinate ${x}`);
  // fixed notation, up to 2 decimals, trimmed: stable across runs
  const s = x.toFixed(2);
  return s.replace(/\.?0+$/, "") || "0";
}

export function esc(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export type Attrs = Record<string, string | number>;

function attrText(attrs: Attrs): string {
  return Object.entries(attrs)
    .map(([k, v]) => ` ${k}="${typeof v === "number" ? fmt(v) : esc(v)}"`)
    .join("");
}

export function el(name: string, attrs: Attrs, ...children: string[]): string {
  const inner = children.join("");
  return inner.length > 0
    ? `<${name}${attrText(attrs)}>${inner}</${name}>`
    : `<${name}${attrText(attrs)}/>`;
}

export function text(content: string, attrs: Attrs): string {
  return `<text${attrText(attrs)}>${esc(content)}</text>`;
}

export function svgDocument(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" ` +
    `width="${fmt(width)}" height="${fmt(height)}" ` +
    `viewBox="0 0 ${fmt(width)} ${fmt(height)}" ` +
    `font-family="Helvetica, Arial, sans-serif">${body}</svg>\n`
  );
}

/** Nice tick positions covering [lo, hi] with a 1-2-5 step. */
export function linearTicks(lo: number, hi: number, target = 6): number[] {
  if (!(hi > lo)) throw new Error(`degenerate axis [${lo}, ${hi}]`);
  const rawStep = (hi - lo) / target;
  const mag = 10 ** Math.floor(Math.log10(rawStep));
  let step = 10 * mag;
  for (const m of [1, 2, 5]) {
    if (m * mag >= rawStep) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) {
    ticks.push(Math.abs(v) < 1e-12 ? 0 : v);
  }
  return ticks;
}

/** Decade ticks for a log axis over positive data. */
export function decadeTicks(lo: number, hi: number): number[] {
  if (!(lo > 0) || !(hi > lo)) throw new Error(`bad log axis [${lo}, ${hi}]`);
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo)); 10 ** e <= hi * (1 + 1e-9); e++) {
    ticks.push(10 ** e);
  }
  return ticks;
}

export function tickLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) {
    const e = Math.floor(Math.log10(a));
    const m = v / 10 ** e;
    const mt = Math.abs(m - 1) < 1e-9 ? "" : `${fmt(m)}x`;
    return `${mt}1e${e}`;
  }
  return String(Number(v.toPrecision(6)));
}
