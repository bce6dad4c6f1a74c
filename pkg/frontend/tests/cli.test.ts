import { execFileSync } from "node:child_process";
import { existsSync, mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { afterEach, describe, expect, it, vi } from "vitest";

import { runCli } from "../src/cli";

const HERE = dirname(fileURLToPath(import.meta.url));
const SWEEP = join(HERE, "fixtures", "sweep");
const ZERO_RUN = join(SWEEP, "no_llm_zero");
const GATED_RUN = join(SWEEP, "cal_gated_oracle");
const DIST_CLI = join(HERE, "..", "dist", "cli.js");

afterEach(() => {
  vi.restoreAllMocks();
});

describe("runCli", () => {
  it("renders the requested panels and reports the written files", () => {
    const out = mkdtempSync(join(tmpdir(), "cli-"));
    const log = vi.spyOn(console, "log").mockImplementation(() => {});
    const code = runCli([
      "plot",
      "--runs",
      `${ZERO_RUN},${GATED_RUN}`,
      "--panels",
      "regret,weight,ema",
      "--out",
      out,
    ]);
    expect(code).toBe(0);
    for (const panel of ["regret", "weight", "ema"]) {
      expect(existsSync(join(out, `${panel}.svg`))).toBe(true);
      expect(log).toHaveBeenCalledWith(`wrote ${join(out, `${panel}.svg`)}`);
    }
  });

  it("merges repeated --runs flags with comma lists", () => {
    vi.spyOn(console, "log").mockImplementation(() => {});
    const out = join(mkdtempSync(join(tmpdir(), "cli-")), "both.svg");
    const code = runCli(["--runs", ZERO_RUN, "--runs", GATED_RUN, "--out", out]);
    expect(code).toBe(0);
    const svg = readFileSync(out, "utf8");
    expect(svg).toContain("no_llm_zero");
    expect(svg).toContain("cal_gated_oracle");
  });

  it("honors --labels and --metric", () => {
    vi.spyOn(console, "log").mockImplementation(() => {});
    const out = join(mkdtempSync(join(tmpdir(), "cli-")), "r.svg");
    const code = runCli([
      "--runs",
      ZERO_RUN,
      "--labels",
      "baseline",
      "--panels",
      "regret",
      "--metric",
      "realized",
      "--out",
      out,
    ]);
    expect(code).toBe(0);
    const svg = readFileSync(out, "utf8");
    expect(svg).toContain("baseline");
    expect(svg).toContain("Cumulative realized regret");
  });

  it("fails with a clear message when --runs or --out is missing", () => {
    const error = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(runCli(["--out", "/tmp/x.svg"])).toBe(2);
    expect(error).toHaveBeenCalledWith("plot: --runs is required");
    expect(runCli(["--runs", ZERO_RUN])).toBe(2);
    expect(error).toHaveBeenCalledWith("plot: --out is required");
  });

  it("rejects unknown panels, metrics, and flags", () => {
    const error = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(runCli(["--runs", ZERO_RUN, "--panels", "pie", "--out", "/tmp/x.svg"])).toBe(2);
    expect(error).toHaveBeenCalledWith('plot: unknown panel "pie" (choose from regret, weight, ema)');
    expect(runCli(["--runs", ZERO_RUN, "--metric", "vibes", "--out", "/tmp/x.svg"])).toBe(2);
    expect(runCli(["--frobnicate"])).toBe(2);
  });

  it("reports label count mismatches", () => {
    const error = vi.spyOn(console, "error").mockImplementation(() => {});
    expect(
      runCli(["--runs", `${ZERO_RUN},${GATED_RUN}`, "--labels", "only-one", "--out", "/tmp/x.svg"]),
    ).toBe(2);
    expect(error).toHaveBeenCalledWith("plot: got 1 labels for 2 runs");
  });

  it("prints usage for --help", () => {
    const log = vi.spyOn(console, "log").mockImplementation(() => {});
    expect(runCli(["--help"])).toBe(0);
    expect(log.mock.calls[0][0]).toContain("usage: plot --runs");
  });
});

describe("built binary", () => {
  it("runs the compiled dist/cli.js end to end", () => {
    const out = join(mkdtempSync(join(tmpdir(), "cli-")), "panels.svg");
    const stdout = execFileSync(
      process.execPath,
      [DIST_CLI, "plot", "--runs", GATED_RUN, "--panels", "weight", "--out", out],
      { encoding: "utf8" },
    );
    expect(stdout).toContain(`wrote ${out}`);
    expect(readFileSync(out, "utf8")).toContain("Pseudo-observation weight");
  });
});
