/** Strict readers for the CLI's CSV outputs.
 *
 * The CLI writes plain comma-separated fields (repr-formatted floats,
 * empty string for blanks) and never quotes, so splitting on commas is
 * the complete grammar.  Schema violations are reported with the
 * offending column so a stale or truncated file is diagnosed, not
 * rendered.
 */

import { readFileSync } from "node:fs";

export class SchemaError extends Error {}

export interface Table {
  path: string;
  header: string[];
  rows: string[][];
}

export function readTable(path: string): Table {
  const text = readFileSync(path, "utf8");
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${path}: file is empty`);
  }
  const header = lines[0]!.split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  for (const [i, row] of rows.entries()) {
    if (row.length !== header.length) {
      throw new SchemaError(
        `${path}: row ${i + 2} has ${row.length} fields, header has ${header.length}`,
      );
    }
  }
  return { path, header, rows };
}

export function requireColumns(table: Table, expected: string[]): void {
  for (const [i, name] of expected.entries()) {
    if (table.header[i] !== name) {
      throw new SchemaError(
        `${table.path}: expected column ${i + 1} to be '${name}', ` +
          `found '${table.header[i] ?? "<missing>"}'`,
      );
    }
  }
  if (table.header.length !== expected.length) {
    throw new SchemaError(
      `${table.path}: unexpected extra column '${table.header[expected.length]}'`,
    );
  }
}

export function num(table: Table, row: number, col: number): number {
  const field = table.rows[row]![col]!;
  const value = Number(field);
  if (field === "" || !Number.isFinite(value)) {
    throw new SchemaError(
      `${table.path}: row ${row + 2}, column '${table.header[col]}': ` +
        `'${field}' is not a finite number`,
    );
  }
  return value;
}
