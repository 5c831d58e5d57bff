/** Shared helpers for the test suite (not itself a test file). */

import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

/** Absolute path of a regenerated engine-output fixture. */
export function fixture(rel: string): string {
  return fileURLToPath(new URL(`./fixtures/${rel}`, import.meta.url));
}

const created: string[] = [];

/** Fresh scratch directory, removed by cleanupTempDirs() in afterAll. */
export function tempDir(): string {
  const dir = mkdtempSync(join(tmpdir(), "qsfa-figs-test-"));
  created.push(dir);
  return dir;
}

export function cleanupTempDirs(): void {
  while (created.length > 0) {
    rmSync(created.pop()!, { recursive: true, force: true });
  }
}
