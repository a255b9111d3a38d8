import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { readCsv, SchemaError } from "./csv.js";
import { renderChart } from "./charts.js";
import { buildModel, FAMILY_NAMES } from "./families.js";

export interface FigureInput {
  path: string;
  label?: string;
}

export interface FigureSpec {
  family: string;
  inputs: FigureInput[];
  output: string;
}

export function parseSpecFile(path: string): FigureSpec {
  let raw: unknown;
  try {
    raw = JSON.parse(readFileSync(path, "utf8"));
  } catch (err) {
    throw new SchemaError(`${path}: not valid JSON (${(err as Error).message})`);
  }
  const spec = raw as Partial<FigureSpec>;
  if (typeof spec.family !== "string" || !FAMILY_NAMES.includes(spec.family)) {
    throw new SchemaError(
      `${path}: "family" must be one of ${FAMILY_NAMES.join(", ")}`,
    );
  }
  if (!Array.isArray(spec.inputs) || spec.inputs.length === 0) {
    throw new SchemaError(`${path}: "inputs" must be a non-empty array`);
  }
  for (const input of spec.inputs) {
    if (typeof (input as FigureInput).path !== "string") {
      throw new SchemaError(`${path}: every input needs a "path"`);
    }
  }
  if (typeof spec.output !== "string" || spec.output.length === 0) {
    throw new SchemaError(`${path}: "output" must be a file path`);
  }
  return spec as FigureSpec;
}

/** Build the SVG for a spec; throws SchemaError without touching the output. */
export function buildFigure(spec: FigureSpec): string {
  const tables = spec.inputs.map((input) => readCsv(input.path));
  const model = buildModel(spec.family, tables, spec.inputs.map((i) => i.label));
  return renderChart(model);
}

/** Render and write; on any error no output file is created. */
export function renderToFile(spec: FigureSpec): void {
  const svg = buildFigure(spec);
  mkdirSync(dirname(spec.output) || ".", { recursive: true });
  writeFileSync(spec.output, svg);
}
