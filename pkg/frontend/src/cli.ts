#!/usr/bin/env node
/** render_figure <kind> <input.csv[,input2.csv,...]> <output.svg> [--title t]
 *
 * Kinds: trajectory | lines | heatmap | panel.  Inputs are CSV files written
 * by the simulation CLI; the panel kind takes three per-scenario policy CSVs
 * (or six sweep CSVs, reward row first).  Output is a deterministic SVG:
 * identical inputs produce byte-identical images.
 */

import { readFileSync, writeFileSync } from "fs";
import { basename } from "path";
import { SchemaError } from "./csv";
import { PLOT_KINDS, PlotKind, render } from "./render";

export function runCli(argv: string[]): number {
  const args = argv.filter((a) => a !== "--");
  const opts: { title?: string; xLabel?: string; yLabel?: string } = {};
  const flagNames: Record<string, "title" | "xLabel" | "yLabel"> = {
    "--title": "title",
    "--xlabel": "xLabel",
    "--ylabel": "yLabel",
  };
  const positional: string[] = [];
  for (let i = 0; i < args.length; i++) {
    const eq = args[i].indexOf("=");
    const name = eq >= 0 ? args[i].slice(0, eq) : args[i];
    if (name in flagNames) {
      opts[flagNames[name]] = eq >= 0 ? args[i].slice(eq + 1) : args[++i];
    } else if (args[i].startsWith("--")) {
      process.stderr.write(`unknown option ${args[i]}\n`);
      return 2;
    } else {
      positional.push(args[i]);
    }
  }
  if (positional.length !== 3) {
    process.stderr.write(
      "usage: render_figure <kind> <input.csv[,more.csv]> <output.svg> " +
        "[--title t] [--xlabel x] [--ylabel y]\n" +
        `       kinds: ${PLOT_KINDS.join(" | ")}\n`
    );
    return 2;
  }
  const [kindRaw, inputRaw, output] = positional;
  if (!PLOT_KINDS.includes(kindRaw as PlotKind)) {
    process.stderr.write(
      `unknown kind "${kindRaw}" (expected ${PLOT_KINDS.join(" | ")})\n`
    );
    return 2;
  }
  const kind = kindRaw as PlotKind;
  const inputs = inputRaw.split(",").filter((p) => p.length > 0);
  try {
    const texts = inputs.map((p) => readFileSync(p, "utf8"));
    const names = inputs.map((p) => basename(p).replace(/\.csv$/, ""));
    const svg = render(kind, texts, names, opts);
    writeFileSync(output, svg);
    process.stdout.write(`wrote ${output}\n`);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`${err.message}\n`);
    } else {
      process.stderr.write(`error: ${(err as Error).message}\n`);
    }
    return 1;
  }
}

if (require.main === module) {
  process.exit(runCli(process.argv.slice(2)));
}
