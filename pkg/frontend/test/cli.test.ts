import { existsSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { afterAll, afterEach, describe, expect, it, vi } from "vitest";

import { main } from "../src/cli.js";
import { cleanupTempDirs, fixture, tempDir } from "./util.js";

afterAll(cleanupTempDirs);
afterEach(() => {
  vi.restoreAllMocks();
});

function quiet(): void {
  vi.spyOn(console, "log").mockImplementation(() => {});
  vi.spyOn(console, "error").mockImplementation(() => {});
}

describe("qsfa-figs CLI", () => {
  it("prints usage and exits 2 without a known subcommand", () => {
    quiet();
    expect(main([])).toBe(2);
    expect(main(["draw-everything"])).toBe(2);
    expect(console.error).toHaveBeenCalledWith(
      expect.stringContaining("usage: qsfa-figs"),
    );
  });

  it("renders a single panel end to end", () => {
    quiet();
    const out = join(tempDir(), "panel.svg");
    const code = main([
      "panel",
      "--input", fixture("pmd_squeezed/pmd.csv"),
      "--out", out,
    ]);
    expect(code).toBe(0);
    expect(existsSync(out)).toBe(true);
    expect(readFileSync(out, "utf8")).toContain("<image");
  });

  it("renders the five-row composite from a JSON spec", () => {
    quiet();
    const dir = tempDir();
    const out = join(dir, "fig.svg");
    const spec = {
      output: out,
      columns: 1,
      panels: [
        "pmd_mono", "pmd_coherent", "pmd_thermal",
        "pmd_squeezed", "pmd_antisqueezed",
      ].map((name) => ({ input: fixture(`${name}/pmd.csv`) })),
    };
    const specPath = join(dir, "spec.json");
    writeFileSync(specPath, JSON.stringify(spec));
    expect(main(["composite", "--spec", specPath])).toBe(0);
    const svg = readFileSync(out, "utf8");
    expect(svg.split("<image").length - 1).toBe(5);
  });

  it("renders the intensity scan with labels", () => {
    quiet();
    const out = join(tempDir(), "scan.svg");
    const code = main([
      "scan",
      "--input", fixture("scan_coherent/scan.csv"), "--label", "coherent",
      "--input", fixture("scan_squeezed/scan.csv"), "--label", "squeezed",
      "--out", out,
    ]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("coherent (slope 0.50)");
  });

  it("renders the release-time scatter with an event filter", () => {
    quiet();
    const out = join(tempDir(), "tt.svg");
    const code = main([
      "tunnel-times",
      "--input", fixture("tunnel/tunnel_times.csv"),
      "--out", out,
      "--event", "1",
    ]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf8")).toContain("event 1");
  });

  it("exits 1 with a prefixed message on missing options or bad inputs", () => {
    quiet();
    expect(main(["panel", "--input", "only.csv"])).toBe(1);
    expect(console.error).toHaveBeenCalledWith(
      expect.stringContaining("qsfa-figs panel:"),
    );
    expect(
      main(["scan", "--input", "/no/such.csv", "--out", join(tempDir(), "x.svg")]),
    ).toBe(1);
    expect(main(["panel", "--bogus-flag"])).toBe(1);
  });
});
