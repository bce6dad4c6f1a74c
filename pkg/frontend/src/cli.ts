#!/usr/bin/env node
/**
 * Command line entry point:
 *
 *   plot --runs <dir>[,<dir>...] --panels regret,weight,ema --out <path>
 */

import { realpathSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { defaultLabels, PanelName, PANEL_NAMES, RegretMetric, renderPanels } from "./panels.js";

const USAGE = `usage: plot --runs <dir>[,<dir>...] --panels regret,weight,ema --out <path>

  --runs    run directories, one plotted series each (repeatable or comma separated)
  --labels  comma separated legend labels matching --runs (default: directory names)
  --panels  comma separated subset of ${PANEL_NAMES.join(",")} (default: all)
  --metric  regret metric, expected or realized (default: expected)
  --out     output .svg file (stacked panels) or directory (one file per panel)
`;

function splitList(values: string[]): string[] {
  return values.flatMap((value) => value.split(",")).filter((item) => item.length > 0);
}

export function runCli(argv: string[]): number {
  // tolerate an explicit leading subcommand so `plot --runs ...` and
  // `node cli.js plot --runs ...` behave the same
  const args = argv[0] === "plot" ? argv.slice(1) : argv;
  let parsed;
  try {
    parsed = parseArgs({
      args,
      options: {
        runs: { type: "string", multiple: true },
        labels: { type: "string" },
        panels: { type: "string", default: "regret,weight,ema" },
        metric: { type: "string", default: "expected" },
        out: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
      allowPositionals: false,
    });
  } catch (err) {
    console.error(`plot: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  if (parsed.values.help) {
    console.log(USAGE);
    return 0;
  }

  try {
    const runs = splitList(parsed.values.runs ?? []);
    if (runs.length === 0) {
      throw new Error("--runs is required");
    }
    if (!parsed.values.out) {
      throw new Error("--out is required");
    }
    const labels = parsed.values.labels
      ? splitList([parsed.values.labels])
      : defaultLabels(runs);
    const panels = splitList([parsed.values.panels!]) as PanelName[];
    const rendered = renderPanels({
      runs,
      labels,
      panels,
      out: parsed.values.out,
      metric: parsed.values.metric as RegretMetric,
    });
    for (const item of rendered) {
      console.log(`wrote ${item.path}`);
    }
    return 0;
  } catch (err) {
    console.error(`plot: ${(err as Error).message}`);
    return 2;
  }
}

const invokedAs = process.argv[1] ? pathToFileURL(realpathSync(process.argv[1])).href : "";
if (import.meta.url === invokedAs) {
  process.exit(runCli(process.argv.slice(2)));
}
