import { readFileSync } from "node:fs";

/** Raised for any input the renderer refuses to draw from. */
export class SchemaError extends Error {}

export interface Table {
  path: string;
  columns: string[];
  rows: Record<string, string>[];
}

/**
 * Strict reader for the harness CSV dialect: comma-separated, header row,
 * no quoting (the writer never emits commas inside fields).
 */
export function parseCsv(text: string, path: string): Table {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${path}: file is empty`);
  }
  const columns = lines[0].split(",");
  const rows = lines.slice(1).map((line, index) => {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `${path}: row ${index + 2} has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    const row: Record<string, string> = {};
    columns.forEach((name, i) => (row[name] = cells[i]));
    return row;
  });
  if (rows.length === 0) {
    throw new SchemaError(`${path}: no data rows`);
  }
  return { path, columns, rows };
}

export function readCsv(path: string): Table {
  return parseCsv(readFileSync(path, "utf8"), path);
}

export function requireColumns(table: Table, names: string[]): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new SchemaError(`${table.path}: missing required column "${name}"`);
    }
  }
}

export function numericCell(row: Record<string, string>, column: string): number | null {
  const cell = row[column];
  if (cell === undefined || cell === "") return null;
  const value = Number(cell);
  if (Number.isNaN(value)) {
    throw new SchemaError(`column "${column}": cannot parse "${cell}" as a number`);
  }
  return value;
}
