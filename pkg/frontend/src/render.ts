import {
  distinct,
  parseCsv,
  requireColumns,
  SchemaError,
  Table,
  toNumber,
} from "./csv";
import {
  axes,
  colormap,
  polygon,
  polyline,
  px,
  rect,
  SERIES_COLORS,
  svgDocument,
  text,
} from "./svg";

export type PlotKind = "trajectory" | "lines" | "heatmap" | "panel";

export const PLOT_KINDS: PlotKind[] = ["trajectory", "lines", "heatmap", "panel"];

const TRAJECTORY_SINGLE = ["step", "coop_freq"];
const TRAJECTORY_BAND = ["step", "mean_coop", "min_coop", "max_coop"];
const SWEEP_2D = ["axis1", "axis2", "mean_coop", "min_coop", "max_coop", "runs"];
const POLICY = ["family", "param_value", "alpha", "mean_coop", "min_coop", "max_coop", "runs"];

const W = 640;
const H = 420;
const PLOT = { x: 64, y: 40, w: W - 64 - 24, h: H - 40 - 60 };

/** Per-step cooperator frequency, with a min-max band across runs when the
 * aggregate schema is supplied. */
function renderTrajectory(table: Table, title: string, opts: RenderOptions): string {
  const cols = table.columns;
  const banded = cols.length === TRAJECTORY_BAND.length && cols[1] === "mean_coop";
  if (banded) {
    requireColumns("trajectory", table, TRAJECTORY_BAND);
  } else {
    requireColumns("trajectory", table, TRAJECTORY_SINGLE);
  }
  const steps = table.rows.map((r) => toNumber(r.step, "step"));
  const xMax = Math.max(1, ...steps);
  const { markup, sx, sy } = axes({
    xDomain: [0, xMax],
    yDomain: [0, 1],
    plot: PLOT,
    xLabel: opts.xLabel ?? "step",
    yLabel: opts.yLabel ?? "cooperator frequency",
  });
  const parts = [markup];
  if (banded) {
    const upper = table.rows.map(
      (r) => [sx(toNumber(r.step, "step")), sy(toNumber(r.max_coop, "max_coop"))] as [number, number]
    );
    const lower = table.rows
      .map(
        (r) => [sx(toNumber(r.step, "step")), sy(toNumber(r.min_coop, "min_coop"))] as [number, number]
      )
      .reverse();
    parts.push(polygon([...upper, ...lower], "rgba(27,108,168,0.25)"));
  }
  const yCol = banded ? "mean_coop" : "coop_freq";
  const line = table.rows.map(
    (r) => [sx(toNumber(r.step, "step")), sy(toNumber(r[yCol], yCol))] as [number, number]
  );
  parts.push(polyline(line, SERIES_COLORS[0]));
  parts.push(text(W / 2, 22, title, { size: 14 }));
  return svgDocument(W, H, parts.join("\n"));
}

interface SweepCell {
  a1: string;
  a2: number;
  mean: number;
}

function readSweep(kind: string, table: Table): SweepCell[] {
  requireColumns(kind, table, SWEEP_2D);
  return table.rows.map((r) => ({
    a1: r.axis1,
    a2: toNumber(r.axis2, "axis2"),
    mean: toNumber(r.mean_coop, "mean_coop"),
  }));
}

function drawSeries(
  cells: SweepCell[],
  plot: { x: number; y: number; w: number; h: number },
  xLabel: string,
  yLabel: string,
  legendPrefix: string
): string {
  const seriesNames = distinct(cells.map((c) => c.a1));
  const xs = cells.map((c) => c.a2);
  const xDomain: [number, number] = [Math.min(...xs), Math.max(...xs)];
  const { markup, sx, sy } = axes({
    xDomain,
    yDomain: [0, 1],
    plot,
    xLabel,
    yLabel,
    xTicks: 4,
    yTicks: 4,
  });
  const parts = [markup];
  seriesNames.forEach((name, idx) => {
    const color = SERIES_COLORS[idx % SERIES_COLORS.length];
    const pts = cells
      .filter((c) => c.a1 === name)
      .map((c) => [sx(c.a2), sy(c.mean)] as [number, number]);
    parts.push(polyline(pts, color));
    const ly = plot.y + 14 + 13 * idx;
    const lx = plot.x + plot.w - 6;
    parts.push(
      `<line x1="${px(lx - 30)}" y1="${px(ly - 3)}" x2="${px(lx - 14)}" ` +
        `y2="${px(ly - 3)}" stroke="${color}" stroke-width="2"/>`
    );
    parts.push(
      text(lx - 34, ly, `${legendPrefix}${name}`, { anchor: "end", size: 9 })
    );
  });
  return parts.join("\n");
}

/** One line per axis1 value, x = axis2, y = mean cooperation. */
function renderLines(table: Table, title: string, opts: RenderOptions): string {
  const cells = readSweep("lines", table);
  const body = drawSeries(cells, PLOT, opts.xLabel ?? "axis2",
    opts.yLabel ?? "mean cooperator frequency", "axis1=");
  return svgDocument(W, H, body + "\n" + text(W / 2, 22, title, { size: 14 }));
}

/** The sweep grid verbatim: axis1 rows, axis2 columns, mean_coop color. */
function renderHeatmap(table: Table, title: string, opts: RenderOptions): string {
  const cells = readSweep("heatmap", table);
  const rowsVals = distinct(cells.map((c) => c.a1));
  const colsVals = distinct(cells.map((c) => String(c.a2)));
  if (rowsVals.length * colsVals.length !== cells.length) {
    throw new SchemaError(
      "heatmap",
      [`complete ${rowsVals.length}x${colsVals.length} grid`],
      [`${cells.length} cells`]
    );
  }
  const plot = { x: 80, y: 40, w: W - 80 - 90, h: H - 40 - 70 };
  const cw = plot.w / colsVals.length;
  const ch = plot.h / rowsVals.length;
  const parts: string[] = [];
  cells.forEach((cell, idx) => {
    const i = Math.floor(idx / colsVals.length); // axis1 index (row-major emit)
    const j = idx % colsVals.length;
    // first axis1 value at the bottom so both axes increase outward
    const y = plot.y + plot.h - (i + 1) * ch;
    parts.push(rect(plot.x + j * cw, y, cw, ch, colormap(cell.mean)));
  });
  parts.push(
    `<rect x="${px(plot.x)}" y="${px(plot.y)}" width="${px(plot.w)}" ` +
      `height="${px(plot.h)}" fill="none" stroke="#333"/>`
  );
  colsVals.forEach((v, j) => {
    if (colsVals.length <= 12 || j % 2 === 0) {
      parts.push(text(plot.x + (j + 0.5) * cw, plot.y + plot.h + 14, v, { size: 8 }));
    }
  });
  rowsVals.forEach((v, i) => {
    if (rowsVals.length <= 12 || i % 2 === 0) {
      parts.push(
        text(plot.x - 6, plot.y + plot.h - (i + 0.5) * ch + 3, v, {
          anchor: "end",
          size: 8,
        })
      );
    }
  });
  parts.push(text(plot.x + plot.w / 2, plot.y + plot.h + 32,
    opts.xLabel ?? "axis2", { size: 12 }));
  parts.push(text(plot.x - 52, plot.y + plot.h / 2,
    opts.yLabel ?? "axis1", { size: 12, rotate: true }));
  // color bar, 0 at the bottom
  const barX = plot.x + plot.w + 24;
  const barW = 14;
  const n = 64;
  for (let i = 0; i < n; i++) {
    const t = (i + 0.5) / n;
    const y = plot.y + plot.h - ((i + 1) * plot.h) / n;
    parts.push(rect(barX, y, barW, plot.h / n + 0.5, colormap(t)));
  }
  parts.push(
    `<rect x="${px(barX)}" y="${px(plot.y)}" width="${px(barW)}" ` +
      `height="${px(plot.h)}" fill="none" stroke="#333"/>`
  );
  parts.push(text(barX + barW + 4, plot.y + plot.h + 3, "0", { anchor: "start", size: 9 }));
  parts.push(text(barX + barW + 4, plot.y + 7, "1", { anchor: "start", size: 9 }));
  parts.push(text(W / 2, 22, title, { size: 14 }));
  return svgDocument(W, H, parts.join("\n"));
}

/** 2x3 grid: reward family on top, fine family below, one column per
 * scenario file.  Accepts three per-scenario policy CSVs, or six sweep CSVs
 * in row-major order (three reward sweeps, then three fine sweeps). */
function renderPanel(tables: Table[], names: string[], title: string,
  opts: RenderOptions): string {
  const cellW = 300;
  const cellH = 230;
  const width = 3 * cellW + 40;
  const height = 2 * cellH + 60;
  const parts: string[] = [];

  const sub = (row: number, col: number) => ({
    x: 56 + col * cellW,
    y: 46 + row * cellH,
    w: cellW - 66,
    h: cellH - 64,
  });

  if (tables.length === 3) {
    tables.forEach((table) => requireColumns("panel", table, POLICY));
    tables.forEach((table, col) => {
      for (const [row, family] of (["reward", "fine"] as const).entries()) {
        const rows = table.rows.filter((r) => r.family === family);
        if (rows.length === 0) {
          throw new SchemaError("panel", [`family=${family} rows`], ["none"]);
        }
        const cells: SweepCell[] = rows.map((r) => ({
          a1: r.param_value,
          a2: toNumber(r.alpha, "alpha"),
          mean: toNumber(r.mean_coop, "mean_coop"),
        }));
        const plot = sub(row, col);
        parts.push(
          drawSeries(cells, plot, opts.xLabel ?? "alpha",
            row === 0 ? "reward" : "fine",
            family === "reward" ? "R=" : "phi=")
        );
        if (row === 0) {
          parts.push(text(plot.x + plot.w / 2, plot.y - 8, names[col], { size: 10 }));
        }
      }
    });
  } else if (tables.length === 6) {
    tables.forEach((table, idx) => {
      const cells = readSweep("panel", table);
      const row = Math.floor(idx / 3);
      const col = idx % 3;
      const plot = sub(row, col);
      parts.push(
        drawSeries(cells, plot, opts.xLabel ?? "alpha",
          row === 0 ? "reward" : "fine",
          row === 0 ? "R=" : "phi=")
      );
      if (row === 0) {
        parts.push(text(plot.x + plot.w / 2, plot.y - 8, names[col], { size: 10 }));
      }
    });
  } else {
    throw new SchemaError(
      "panel",
      ["3 policy CSVs or 6 sweep CSVs"],
      [`${tables.length} inputs`]
    );
  }
  parts.push(text(width / 2, 20, title, { size: 14 }));
  return svgDocument(width, height, parts.join("\n"));
}

export interface RenderOptions {
  title?: string;
  xLabel?: string;
  yLabel?: string;
}

export function render(
  kind: PlotKind,
  csvTexts: string[],
  inputNames: string[],
  options: RenderOptions | string = {}
): string {
  const opts: RenderOptions =
    typeof options === "string" ? { title: options } : options;
  const tables = csvTexts.map(parseCsv);
  const heading = opts.title ?? "";
  switch (kind) {
    case "trajectory":
      return renderTrajectory(tables[0], heading, opts);
    case "lines":
      return renderLines(tables[0], heading, opts);
    case "heatmap":
      return renderHeatmap(tables[0], heading, opts);
    case "panel":
      return renderPanel(tables, inputNames, heading, opts);
    default: {
      const never: never = kind;
      throw new Error(`unknown kind ${never}`);
    }
  }
}
