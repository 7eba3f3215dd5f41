import { mkdtempSync, readFileSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import { join } from "path";
import { describe, expect, it } from "vitest";

import { SchemaError } from "../src/csv";
import { runCli } from "../src/cli";
import { PlotKind, render } from "../src/render";

const FIXTURES = join(__dirname, "..", "fixtures");

function fixture(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf8");
}

function renderFixture(kind: PlotKind, names: string[]): string {
  return render(
    kind,
    names.map(fixture),
    names.map((n) => n.replace(/\.csv$/, "")),
    "test"
  );
}

const GOLDEN: [PlotKind, string[]][] = [
  ["trajectory", ["trajectory_single.csv"]],
  ["trajectory", ["trajectory_band.csv"]],
  ["lines", ["lines.csv"]],
  ["heatmap", ["heatmap.csv"]],
  [
    "panel",
    [
      "policy_thL0.8_thH0.2.csv",
      "policy_thL0.5_thH0.5.csv",
      "policy_thL0.2_thH0.8.csv",
    ],
  ],
];

describe("golden fixtures", () => {
  for (const [kind, names] of GOLDEN) {
    it(`${kind} (${names[0]}) renders a non-empty image`, () => {
      const svg = renderFixture(kind, names);
      expect(svg.length).toBeGreaterThan(500);
      expect(svg.startsWith("<svg")).toBe(true);
      expect(svg.trimEnd().endsWith("</svg>")).toBe(true);
    });

    it(`${kind} (${names[0]}) re-renders pixel-identically`, () => {
      expect(renderFixture(kind, names)).toBe(renderFixture(kind, names));
    });
  }
});

describe("plot semantics", () => {
  it("constant trajectory of 1.0 draws a flat line at the top of the frame", () => {
    const csv = "step,coop_freq\n0,1.0\n1,1.0\n2,1.0\n";
    const svg = render("trajectory", [csv], ["flat"], "");
    const match = svg.match(/<polyline[^>]*points="([^"]+)"/);
    expect(match).not.toBeNull();
    const ys = match![1].split(" ").map((p) => Number(p.split(",")[1]));
    expect(new Set(ys).size).toBe(1); // flat
    // y=1 maps to the top edge of the plot area (y = 40 in canvas coords)
    expect(ys[0]).toBeCloseTo(40, 1);
  });

  it("121-cell sweep renders an 11x11 cell grid", () => {
    const svg = renderFixture("heatmap", ["heatmap.csv"]);
    const cells = svg.match(/<rect[^>]*fill="rgb/g) ?? [];
    expect(cells.length).toBe(121 + 64); // grid cells + color bar segments
  });

  it("panel lays out a 2x3 grid of subplots", () => {
    const svg = renderFixture("panel", [
      "policy_thL0.8_thH0.2.csv",
      "policy_thL0.5_thH0.5.csv",
      "policy_thL0.2_thH0.8.csv",
    ]);
    const frames = svg.match(/fill="none" stroke="#333" stroke-width="1"/g) ?? [];
    expect(frames.length).toBe(6);
  });

  it("panel also accepts six sweep CSVs, reward row first", () => {
    const sweep = fixture("lines.csv");
    const svg = render("panel", Array(6).fill(sweep),
      ["r1", "r2", "r3", "f1", "f2", "f3"], "");
    const frames = svg.match(/fill="none" stroke="#333" stroke-width="1"/g) ?? [];
    expect(frames.length).toBe(6);
  });
});

describe("schema validation", () => {
  it("rejects a trajectory file fed to the heatmap kind", () => {
    expect(() =>
      render("heatmap", [fixture("trajectory_single.csv")], ["t"], "")
    ).toThrowError(SchemaError);
    try {
      render("heatmap", [fixture("trajectory_single.csv")], ["t"], "");
    } catch (err) {
      expect((err as Error).message).toContain("axis1");
      expect((err as Error).message).toContain("coop_freq");
    }
  });

  it("rejects an incomplete heatmap grid", () => {
    const csv =
      "axis1,axis2,mean_coop,min_coop,max_coop,runs\n" +
      "0.0,0.1,0.5,0.4,0.6,2\n0.0,0.2,0.5,0.4,0.6,2\n1.0,0.1,0.5,0.4,0.6,2\n";
    expect(() => render("heatmap", [csv], ["x"], "")).toThrowError(SchemaError);
  });

  it("rejects a panel with the wrong number of inputs", () => {
    expect(() =>
      render("panel", [fixture("lines.csv")], ["x"], "")
    ).toThrowError(SchemaError);
  });
});

describe("command line", () => {
  it("renders via the CLI and is byte-identical across runs", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const out1 = join(dir, "a.svg");
    const out2 = join(dir, "b.svg");
    const input = join(FIXTURES, "heatmap.csv");
    expect(runCli(["heatmap", input, out1, "--title", "audit balance"])).toBe(0);
    expect(runCli(["heatmap", input, out2, "--title", "audit balance"])).toBe(0);
    expect(readFileSync(out1)).toEqual(readFileSync(out2));
    expect(readFileSync(out1, "utf8")).toContain("audit balance");
  });

  it("applies axis label overrides", () => {
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const out = join(dir, "l.svg");
    const input = join(FIXTURES, "lines.csv");
    expect(
      runCli(["lines", input, out, "--xlabel", "evasion fraction",
        "--ylabel=cooperators"])
    ).toBe(0);
    const svg = readFileSync(out, "utf8");
    expect(svg).toContain("evasion fraction");
    expect(svg).toContain("cooperators");
  });

  it("returns 2 on usage errors and 1 on schema errors", () => {
    expect(runCli(["heatmap"])).toBe(2);
    expect(runCli(["mystery", "a.csv", "b.svg"])).toBe(2);
    const dir = mkdtempSync(join(tmpdir(), "figs-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "step,coop_freq\n0,0.5\n");
    expect(runCli(["heatmap", bad, join(dir, "out.svg")])).toBe(1);
  });
});
