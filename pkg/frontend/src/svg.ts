/**
 * Minimal deterministic SVG line charts: axes with nice ticks, one
 * polyline per series, an optional shaded band around each line, and a
 * legend. No drawing dependency; the output is plain markup, so tests
 * can read the plotted coordinates straight back out of it.
 */

export interface Band {
  lo: number[];
  hi: number[];
}

export interface ChartSeries {
  label: string;
  x: number[];
  y: number[];
  band?: Band;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  series: ChartSeries[];
}

export const CHART_WIDTH = 640;
export const CHART_HEIGHT = 360;

const MARGIN = { top: 34, right: 16, bottom: 42, left: 62 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Pixel coordinate, fixed precision so re-renders are byte identical. */
function px(value: number): string {
  const text = value.toFixed(2);
  return text === "-0.00" ? "0.00" : text;
}

/** Tick label without accumulated float noise (0.30000000000000004 -> "0.3"). */
export function formatTick(value: number): string {
  return String(Number(value.toPrecision(10)));
}

function niceStep(span: number, maxTicks: number): number {
  const rough = span / Math.max(1, maxTicks);
  const magnitude = 10 ** Math.floor(Math.log10(rough));
  for (const multiple of [1, 2, 5, 10]) {
    if (rough <= multiple * magnitude) return multiple * magnitude;
  }
  return 10 * magnitude;
}

export function ticks(lo: number, hi: number, maxTicks = 6): number[] {
  if (!(hi > lo)) return [lo];
  const step = niceStep(hi - lo, maxTicks);
  const first = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = first; v <= hi + step * 1e-9; v += step) {
    out.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return out;
}

interface Range {
  lo: number;
  hi: number;
}

function dataRange(values: number[]): Range {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) throw new Error("no data to scale");
  if (lo === hi) {
    // flat series: open up a window around the single value
    const pad = Math.max(Math.abs(lo) * 0.1, 0.5);
    return { lo: lo - pad, hi: hi + pad };
  }
  const pad = (hi - lo) * 0.05;
  return { lo: lo - pad, hi: hi + pad };
}

/** Render one chart as a self-positioned <g> fragment of size CHART_WIDTH x CHART_HEIGHT. */
export function renderChart(options: ChartOptions): string {
  if (options.series.length === 0) {
    throw new Error(`${options.title}: no series to plot`);
  }
  const xs: number[] = [];
  const ys: number[] = [];
  for (const series of options.series) {
    if (series.y.length !== series.x.length) {
      throw new Error(`${series.label}: x and y lengths differ`);
    }
    if (series.x.length === 0) {
      throw new Error(`${series.label}: empty series`);
    }
    xs.push(...series.x);
    ys.push(...series.y);
    if (series.band) {
      ys.push(...series.band.lo, ...series.band.hi);
    }
  }
  const xRange = dataRange(xs);
  const yRange = dataRange(ys);

  const plotLeft = MARGIN.left;
  const plotTop = MARGIN.top;
  const plotWidth = CHART_WIDTH - MARGIN.left - MARGIN.right;
  const plotHeight = CHART_HEIGHT - MARGIN.top - MARGIN.bottom;
  const plotRight = plotLeft + plotWidth;
  const plotBottom = plotTop + plotHeight;

  const toX = (v: number): number => plotLeft + ((v - xRange.lo) / (xRange.hi - xRange.lo)) * plotWidth;
  const toY = (v: number): number => plotBottom - ((v - yRange.lo) / (yRange.hi - yRange.lo)) * plotHeight;

  const parts: string[] = [];
  parts.push(`<rect x="0" y="0" width="${CHART_WIDTH}" height="${CHART_HEIGHT}" fill="white"/>`);

  for (const tick of ticks(xRange.lo, xRange.hi)) {
    const x = px(toX(tick));
    parts.push(`<line x1="${x}" y1="${px(plotBottom)}" x2="${x}" y2="${px(plotBottom + 4)}" stroke="#333"/>`);
    parts.push(
      `<text x="${x}" y="${px(plotBottom + 16)}" font-size="11" text-anchor="middle" fill="#333">${formatTick(tick)}</text>`,
    );
  }
  for (const tick of ticks(yRange.lo, yRange.hi)) {
    const y = px(toY(tick));
    parts.push(`<line x1="${px(plotLeft - 4)}" y1="${y}" x2="${px(plotLeft)}" y2="${y}" stroke="#333"/>`);
    parts.push(
      `<text x="${px(plotLeft - 7)}" y="${y}" dy="3.5" font-size="11" text-anchor="end" fill="#333">${formatTick(tick)}</text>`,
    );
    parts.push(`<line x1="${px(plotLeft)}" y1="${y}" x2="${px(plotRight)}" y2="${y}" stroke="#eee"/>`);
  }
  parts.push(`<line x1="${px(plotLeft)}" y1="${px(plotBottom)}" x2="${px(plotRight)}" y2="${px(plotBottom)}" stroke="#333"/>`);
  parts.push(`<line x1="${px(plotLeft)}" y1="${px(plotTop)}" x2="${px(plotLeft)}" y2="${px(plotBottom)}" stroke="#333"/>`);

  options.series.forEach((series, index) => {
    const color = PALETTE[index % PALETTE.length];
    if (series.band) {
      const forward = series.x.map((x, i) => `${px(toX(x))},${px(toY(series.band!.hi[i]))}`);
      const backward = series.x
        .map((x, i) => `${px(toX(x))},${px(toY(series.band!.lo[i]))}`)
        .reverse();
      parts.push(
        `<path class="band" d="M ${forward.join(" L ")} L ${backward.join(" L ")} Z" fill="${color}" fill-opacity="0.15" stroke="none"/>`,
      );
    }
    const points = series.x.map((x, i) => `${px(toX(x))},${px(toY(series.y[i]))}`).join(" ");
    parts.push(
      `<polyline class="series" points="${points}" fill="none" stroke="${color}" stroke-width="1.5"/>`,
    );
  });

  // legend, top-right inside the plot area
  options.series.forEach((series, index) => {
    const color = PALETTE[index % PALETTE.length];
    const y = plotTop + 12 + index * 16;
    parts.push(`<line x1="${px(plotRight - 120)}" y1="${px(y)}" x2="${px(plotRight - 100)}" y2="${px(y)}" stroke="${color}" stroke-width="2"/>`);
    parts.push(
      `<text x="${px(plotRight - 94)}" y="${px(y)}" dy="3.5" font-size="11" fill="#333">${escapeXml(series.label)}</text>`,
    );
  });

  parts.push(
    `<text x="${px(CHART_WIDTH / 2)}" y="20" font-size="14" text-anchor="middle" fill="#111">${escapeXml(options.title)}</text>`,
  );
  parts.push(
    `<text x="${px(plotLeft + plotWidth / 2)}" y="${px(CHART_HEIGHT - 8)}" font-size="12" text-anchor="middle" fill="#333">${escapeXml(options.xLabel)}</text>`,
  );
  parts.push(
    `<text x="14" y="${px(plotTop + plotHeight / 2)}" font-size="12" text-anchor="middle" fill="#333" transform="rotate(-90 14 ${px(plotTop + plotHeight / 2)})">${escapeXml(options.yLabel)}</text>`,
  );

  return `<g>${parts.join("")}</g>`;
}

/** Stack chart fragments vertically into one standalone SVG document. */
export function svgDocument(fragments: string[]): string {
  const height = CHART_HEIGHT * fragments.length;
  const body = fragments
    .map((fragment, i) => `<g transform="translate(0 ${CHART_HEIGHT * i})">${fragment}</g>`)
    .join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${CHART_WIDTH}" height="${height}" ` +
    `viewBox="0 0 ${CHART_WIDTH} ${height}" font-family="sans-serif">\n${body}\n</svg>\n`
  );
}
