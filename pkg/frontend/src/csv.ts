/**
 * Reader for the per-round CSV logs written by the bandit runner.
 *
 * The log contract: comma separated, LF line endings, a fixed header row,
 * floats serialized with full precision. No field ever contains a comma
 * (per-arm predictions are packed with ':' and ';'), so a plain split is
 * exact. Only the columns the panels consume are parsed here.
 */

import { readdirSync, readFileSync, statSync } from "node:fs";
import { join } from "node:path";

export interface RoundRow {
  t: number;
  cumRegretRealized: number;
  cumRegretExpected: number;
  weight: number;
  emaError: number;
}

const REQUIRED_COLUMNS = [
  "t",
  "cum_regret_realized",
  "cum_regret_expected",
  "weight",
  "ema_error",
] as const;

export function parseRoundsCsv(text: string, source: string): RoundRow[] {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${source}: empty CSV`);
  }
  const header = lines[0].split(",");
  const index = new Map<string, number>();
  header.forEach((name, i) => index.set(name, i));
  for (const column of REQUIRED_COLUMNS) {
    if (!index.has(column)) {
      throw new Error(`${source}: missing column "${column}"`);
    }
  }
  if (lines.length === 1) {
    throw new Error(`${source}: no data rows`);
  }

  const numberAt = (fields: string[], column: string, lineNo: number): number => {
    const raw = fields[index.get(column)!];
    const value = Number(raw);
    if (raw === undefined || raw === "" || !Number.isFinite(value)) {
      throw new Error(`${source}:${lineNo}: bad ${column} value ${JSON.stringify(raw ?? "")}`);
    }
    return value;
  };

  const rows: RoundRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    rows.push({
      t: numberAt(fields, "t", i + 1),
      cumRegretRealized: numberAt(fields, "cum_regret_realized", i + 1),
      cumRegretExpected: numberAt(fields, "cum_regret_expected", i + 1),
      weight: numberAt(fields, "weight", i + 1),
      emaError: numberAt(fields, "ema_error", i + 1),
    });
  }
  return rows;
}

export function readRoundsCsv(path: string): RoundRow[] {
  return parseRoundsCsv(readFileSync(path, "utf8"), path);
}

const ROUNDS_NAME = /^rounds_seed\d+\.csv$/;

/** Collect every rounds CSV under a run directory, sorted for stable order. */
export function findRoundsCsvs(dir: string): string[] {
  const found: string[] = [];
  const walk = (current: string): void => {
    for (const entry of readdirSync(current).sort()) {
      const path = join(current, entry);
      if (statSync(path).isDirectory()) {
        walk(path);
      } else if (ROUNDS_NAME.test(entry)) {
        found.push(path);
      }
    }
  };
  walk(dir);
  return found;
}
