/**
 * Turns run directories full of rounds_seed*.csv logs into regret,
 * weight, and calibration-error panels. Each run directory becomes one
 * line per panel; runs with several seed logs are drawn as the mean
 * with a shaded standard-error band.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { basename, dirname, join } from "node:path";

import { aggregateSeries, SeriesStats } from "./aggregate.js";
import { findRoundsCsvs, readRoundsCsv, RoundRow } from "./csv.js";
import { ChartSeries, renderChart, svgDocument } from "./svg.js";

export const PANEL_NAMES = ["regret", "weight", "ema"] as const;
export type PanelName = (typeof PANEL_NAMES)[number];

export type RegretMetric = "expected" | "realized";

export interface PlotSpec {
  /** Run directories, one plotted series each. */
  runs: string[];
  /** Legend labels, parallel to runs. */
  labels: string[];
  panels: PanelName[];
  /** Output .svg file (panels stacked) or directory (one file per panel). */
  out: string;
  metric: RegretMetric;
}

export interface LoadedRun {
  label: string;
  seeds: RoundRow[][];
}

export function validateSpec(spec: PlotSpec): void {
  if (spec.runs.length === 0) {
    throw new Error("at least one run directory is required");
  }
  if (spec.labels.length !== spec.runs.length) {
    throw new Error(`got ${spec.labels.length} labels for ${spec.runs.length} runs`);
  }
  if (new Set(spec.labels).size !== spec.labels.length) {
    throw new Error(`labels must be unique, got: ${spec.labels.join(", ")}`);
  }
  if (spec.panels.length === 0) {
    throw new Error("at least one panel is required");
  }
  for (const panel of spec.panels) {
    if (!PANEL_NAMES.includes(panel)) {
      throw new Error(`unknown panel "${panel}" (choose from ${PANEL_NAMES.join(", ")})`);
    }
  }
  if (spec.metric !== "expected" && spec.metric !== "realized") {
    throw new Error(`unknown regret metric "${spec.metric}" (expected or realized)`);
  }
  if (!spec.out) {
    throw new Error("an output path is required");
  }
}

export function loadRun(dir: string, label: string): LoadedRun {
  const files = findRoundsCsvs(dir);
  if (files.length === 0) {
    throw new Error(`no rounds_seed*.csv files under ${dir}`);
  }
  return { label, seeds: files.map(readRoundsCsv) };
}

function panelValue(row: RoundRow, panel: PanelName, metric: RegretMetric): number {
  switch (panel) {
    case "regret":
      return metric === "realized" ? row.cumRegretRealized : row.cumRegretExpected;
    case "weight":
      return row.weight;
    case "ema":
      return row.emaError;
  }
}

export function panelSeries(run: LoadedRun, panel: PanelName, metric: RegretMetric): SeriesStats {
  const perSeed = run.seeds.map((rows) => ({
    t: rows.map((row) => row.t),
    values: rows.map((row) => panelValue(row, panel, metric)),
  }));
  return aggregateSeries(run.label, perSeed);
}

function panelTitle(panel: PanelName, metric: RegretMetric): { title: string; yLabel: string } {
  switch (panel) {
    case "regret":
      return { title: `Cumulative ${metric} regret`, yLabel: "cumulative regret" };
    case "weight":
      return { title: "Pseudo-observation weight", yLabel: "weight w_t" };
    case "ema":
      return { title: "Calibration error (EMA of squared probe error)", yLabel: "ema_error" };
  }
}

export function buildPanelSvg(runs: LoadedRun[], panel: PanelName, metric: RegretMetric): string {
  const series: ChartSeries[] = runs.map((run) => {
    const stats = panelSeries(run, panel, metric);
    const chartSeries: ChartSeries = { label: stats.label, x: stats.t, y: stats.mean };
    if (stats.stderr !== null) {
      chartSeries.band = {
        lo: stats.mean.map((m, i) => m - stats.stderr![i]),
        hi: stats.mean.map((m, i) => m + stats.stderr![i]),
      };
    }
    return chartSeries;
  });
  const { title, yLabel } = panelTitle(panel, metric);
  return renderChart({ title, xLabel: "round t", yLabel, series });
}

export interface RenderedPanel {
  panel: PanelName | "all";
  path: string;
}

/**
 * Render every requested panel and write the SVG output. Inputs are
 * only ever read; re-rendering the same inputs writes identical bytes.
 */
export function renderPanels(spec: PlotSpec): RenderedPanel[] {
  validateSpec(spec);
  const runs = spec.runs.map((dir, i) => loadRun(dir, spec.labels[i]));
  const fragments = spec.panels.map((panel) => buildPanelSvg(runs, panel, spec.metric));

  if (spec.out.endsWith(".svg")) {
    mkdirSync(dirname(spec.out), { recursive: true });
    writeFileSync(spec.out, svgDocument(fragments), "utf8");
    return [{ panel: "all", path: spec.out }];
  }
  mkdirSync(spec.out, { recursive: true });
  return spec.panels.map((panel, i) => {
    const path = join(spec.out, `${panel}.svg`);
    writeFileSync(path, svgDocument([fragments[i]]), "utf8");
    return { panel, path };
  });
}

/** Default legend labels: directory basenames, which must not collide. */
export function defaultLabels(runs: string[]): string[] {
  const labels = runs.map((dir) => basename(dir.replace(/\/+$/, "")) || dir);
  if (new Set(labels).size !== labels.length) {
    throw new Error("run directory names collide; pass explicit --labels");
  }
  return labels;
}
