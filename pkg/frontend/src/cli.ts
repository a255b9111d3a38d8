#!/usr/bin/env node
/**
 * Render figure families from harness sweep CSVs.
 *
 *   lbrs-figures render --spec figure.json
 *   lbrs-figures render --family reward-vs-p --input b.csv --input p.csv \
 *       --labels "B-LBRS,P-LBRS" --out reward_vs_p.svg
 */

import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { SchemaError } from "./csv.js";
import { FAMILY_NAMES } from "./families.js";
import { FigureSpec, parseSpecFile, renderToFile } from "./render.js";

const USAGE = `usage:
  lbrs-figures render --spec <file.json>
  lbrs-figures render --family <name> --input <csv> [--input <csv> ...]
                      [--labels <a,b,...>] --out <file.svg>

families: ${FAMILY_NAMES.join(", ")}`;

export function main(argv: string[]): number {
  if (argv[0] !== "render") {
    console.error(USAGE);
    return 2;
  }
  let spec: FigureSpec;
  try {
    const { values } = parseArgs({
      args: argv.slice(1),
      options: {
        spec: { type: "string" },
        family: { type: "string" },
        input: { type: "string", multiple: true },
        labels: { type: "string" },
        out: { type: "string" },
      },
    });
    if (values.spec !== undefined) {
      spec = parseSpecFile(values.spec);
    } else {
      if (values.family === undefined || values.out === undefined ||
          values.input === undefined || values.input.length === 0) {
        console.error(USAGE);
        return 2;
      }
      const labels = values.labels === undefined ? [] : values.labels.split(",");
      spec = {
        family: values.family,
        inputs: values.input.map((path, i) => ({ path, label: labels[i] })),
        output: values.out,
      };
    }
    renderToFile(spec);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    if (err instanceof Error && (err as NodeJS.ErrnoException).code === "ENOENT") {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
  console.log(`wrote ${spec.output}`);
  return 0;
}

if (process.argv[1] !== undefined &&
    import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exit(main(process.argv.slice(2)));
}
