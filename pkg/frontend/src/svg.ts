/** Deterministic SVG primitives: fixed canvas, fixed fonts, no timestamps,
 * all numbers rounded to a stable decimal form. */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

export function px(v: number): string {
  // two decimals is plenty at our canvas sizes and keeps output stable
  return v.toFixed(2);
}

export function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function linearScale(
  domain: [number, number],
  range: [number, number]
): (v: number) => number {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0;
  if (span === 0) {
    const mid = (r0 + r1) / 2;
    return () => mid;
  }
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function tickValues(domain: [number, number], count: number): number[] {
  const [lo, hi] = domain;
  const out: number[] = [];
  for (let i = 0; i <= count; i++) {
    out.push(lo + ((hi - lo) * i) / count);
  }
  return out;
}

export function tickLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000 || a < 0.001) return v.toExponential(1);
  return String(Number(v.toPrecision(4)));
}

export const SERIES_COLORS = [
  "#1b6ca8",
  "#d1495b",
  "#3f784c",
  "#8d5a97",
  "#c77d1f",
  "#4f6d7a",
  "#9a3b3b",
  "#2e6f95",
];

// compact viridis-like ramp, linearly interpolated
const RAMP: [number, number, number][] = [
  [68, 1, 84],
  [71, 44, 122],
  [59, 81, 139],
  [44, 113, 142],
  [33, 144, 141],
  [39, 173, 129],
  [92, 200, 99],
  [170, 220, 50],
  [253, 231, 37],
];

export function colormap(t: number): string {
  const c = Math.min(1, Math.max(0, t)) * (RAMP.length - 1);
  const i = Math.min(RAMP.length - 2, Math.floor(c));
  const f = c - i;
  const mix = (a: number, b: number) => Math.round(a + (b - a) * f);
  const [r1, g1, b1] = RAMP[i];
  const [r2, g2, b2] = RAMP[i + 1];
  return `rgb(${mix(r1, r2)},${mix(g1, g2)},${mix(b1, b2)})`;
}

export function polyline(
  points: [number, number][],
  stroke: string,
  width = 1.5
): string {
  const pts = points.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
  return `<polyline fill="none" stroke="${stroke}" stroke-width="${width}" points="${pts}"/>`;
}

export function polygon(points: [number, number][], fill: string): string {
  const pts = points.map(([x, y]) => `${px(x)},${px(y)}`).join(" ");
  return `<polygon fill="${fill}" stroke="none" points="${pts}"/>`;
}

export function rect(
  x: number,
  y: number,
  w: number,
  h: number,
  fill: string
): string {
  return `<rect x="${px(x)}" y="${px(y)}" width="${px(w)}" height="${px(h)}" fill="${fill}"/>`;
}

export function text(
  x: number,
  y: number,
  content: string,
  opts: { anchor?: string; size?: number; rotate?: boolean } = {}
): string {
  const anchor = opts.anchor ?? "middle";
  const size = opts.size ?? 11;
  const transform = opts.rotate
    ? ` transform="rotate(-90 ${px(x)} ${px(y)})"`
    : "";
  return (
    `<text x="${px(x)}" y="${px(y)}" text-anchor="${anchor}" ` +
    `font-size="${size}" ${FONT}${transform}>${escapeXml(content)}</text>`
  );
}

export interface AxisSpec {
  xDomain: [number, number];
  yDomain: [number, number];
  plot: { x: number; y: number; w: number; h: number };
  xLabel?: string;
  yLabel?: string;
  xTicks?: number;
  yTicks?: number;
}

/** Frame, ticks, and labels; returns the markup plus the two scales. */
export function axes(spec: AxisSpec): {
  markup: string;
  sx: (v: number) => number;
  sy: (v: number) => number;
} {
  const { x, y, w, h } = spec.plot;
  const sx = linearScale(spec.xDomain, [x, x + w]);
  const sy = linearScale(spec.yDomain, [y + h, y]);
  const parts: string[] = [];
  parts.push(
    `<rect x="${px(x)}" y="${px(y)}" width="${px(w)}" height="${px(h)}" ` +
      `fill="none" stroke="#333" stroke-width="1"/>`
  );
  for (const t of tickValues(spec.xDomain, spec.xTicks ?? 5)) {
    const tx = sx(t);
    parts.push(
      `<line x1="${px(tx)}" y1="${px(y + h)}" x2="${px(tx)}" y2="${px(
        y + h + 4
      )}" stroke="#333"/>`
    );
    parts.push(text(tx, y + h + 16, tickLabel(t), { size: 9 }));
  }
  for (const t of tickValues(spec.yDomain, spec.yTicks ?? 5)) {
    const ty = sy(t);
    parts.push(
      `<line x1="${px(x - 4)}" y1="${px(ty)}" x2="${px(x)}" y2="${px(
        ty
      )}" stroke="#333"/>`
    );
    parts.push(text(x - 7, ty + 3, tickLabel(t), { anchor: "end", size: 9 }));
  }
  if (spec.xLabel) {
    parts.push(text(x + w / 2, y + h + 34, spec.xLabel, { size: 12 }));
  }
  if (spec.yLabel) {
    parts.push(text(x - 40, y + h / 2, spec.yLabel, { size: 12, rotate: true }));
  }
  return { markup: parts.join("\n"), sx, sy };
}

export function svgDocument(w: number, h: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${w}" height="${h}" ` +
    `viewBox="0 0 ${w} ${h}">\n<rect width="${w}" height="${h}" fill="white"/>\n` +
    body +
    "\n</svg>\n"
  );
}
