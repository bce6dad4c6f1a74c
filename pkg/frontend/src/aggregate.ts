/**
 * Collapses per-seed value series into one plotted series per run:
 * the mean trajectory, plus a standard-error half-width when a run
 * carries more than one seed.
 */

export interface SeedSeries {
  t: number[];
  values: number[];
}

export interface SeriesStats {
  label: string;
  t: number[];
  mean: number[];
  /** Standard error of the mean per round; null for single-seed runs. */
  stderr: number[] | null;
}

export function aggregateSeries(label: string, perSeed: SeedSeries[]): SeriesStats {
  if (perSeed.length === 0) {
    throw new Error(`${label}: no series to aggregate`);
  }
  const grid = perSeed[0].t;
  for (const series of perSeed) {
    if (series.values.length !== series.t.length) {
      throw new Error(`${label}: series length does not match its round grid`);
    }
    if (series.t.length !== grid.length || series.t.some((t, i) => t !== grid[i])) {
      throw new Error(`${label}: seed logs disagree on the round grid`);
    }
  }

  const n = perSeed.length;
  const mean = grid.map((_, i) => {
    let total = 0;
    for (const series of perSeed) total += series.values[i];
    return total / n;
  });
  if (n === 1) {
    return { label, t: [...grid], mean, stderr: null };
  }
  const stderr = grid.map((_, i) => {
    let squares = 0;
    for (const series of perSeed) squares += (series.values[i] - mean[i]) ** 2;
    return Math.sqrt(squares / (n - 1)) / Math.sqrt(n);
  });
  return { label, t: [...grid], mean, stderr };
}
