import { describe, expect, it } from "vitest";
import { existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { SchemaError } from "../src/csv.js";
import { LOWER_IS_BETTER } from "../src/families.js";
import { buildFigure, parseSpecFile, renderToFile, FigureSpec } from "../src/render.js";

const FIXTURES = join(__dirname, "fixtures");
const fixture = (name: string) => join(FIXTURES, name);
const tmp = () => mkdtempSync(join(tmpdir(), "figs-"));

const count = (svg: string, re: RegExp) => (svg.match(re) ?? []).length;

describe("figure families", () => {
  it("renders reward-vs-p as lines with one series per input", () => {
    const svg = buildFigure({
      family: "reward-vs-p",
      inputs: [
        { path: fixture("p_sweep_b_lbrs.csv") },
        { path: fixture("p_sweep_p_lbrs.csv") },
      ],
      output: "unused.svg",
    });
    expect(svg.startsWith("<svg")).toBe(true);
    expect(count(svg, /class="series"/g)).toBe(2);
    expect(count(svg, /class="marker"/g)).toBe(6); // 2 series x 3 p values
    expect(svg).toContain(">B-LBRS<");
    expect(svg).toContain(">P-LBRS<");
    expect(svg).not.toContain(LOWER_IS_BETTER);
  });

  it("annotates diversity figures with the score direction", () => {
    for (const family of ["diversity-vs-p", "diversity-vs-lambda", "diversity-bars"]) {
      const input =
        family === "diversity-vs-p"
          ? fixture("p_sweep_b_lbrs.csv")
          : family === "diversity-vs-lambda"
            ? fixture("lambda_sweep_qth2.csv")
            : fixture("agent_comparison.csv");
      const svg = buildFigure({ family, inputs: [{ path: input }], output: "u.svg" });
      expect(svg).toContain(LOWER_IS_BETTER);
    }
  });

  it("renders reward-vs-lambda with explicit labels", () => {
    const svg = buildFigure({
      family: "reward-vs-lambda",
      inputs: [
        { path: fixture("lambda_sweep_qth2.csv"), label: "q_th=2" },
        { path: fixture("lambda_sweep_qthm2.csv"), label: "q_th=-2" },
      ],
      output: "u.svg",
    });
    expect(svg).toContain(">q_th=2<");
    expect(svg).toContain(">q_th=-2<");
    expect(count(svg, /class="series"/g)).toBe(2);
  });

  it("renders the agent comparison as agents x values grouped bars", () => {
    const inputs = ["b_lbrs", "p_lbrs", "h_lbrs", "random", "epsgreedy"].map(
      (name) => ({ path: fixture(`k_sweep_${name}.csv`) }),
    );
    const svg = buildFigure({ family: "compare-vs-k", inputs, output: "u.svg" });
    expect(count(svg, /class="bar"/g)).toBe(15); // 5 agents x 3 slate sizes
    expect(svg).toContain(">EpsGreedy<");
  });

  it("renders compare-vs-M from M sweeps", () => {
    const inputs = ["b_lbrs", "random"].map((name) => ({
      path: fixture(`m_sweep_${name}.csv`),
    }));
    const svg = buildFigure({ family: "compare-vs-M", inputs, output: "u.svg" });
    expect(count(svg, /class="bar"/g)).toBe(4); // 2 agents x 2 catalog sizes
  });

  it("renders diversity-bars with three series per agent", () => {
    const svg = buildFigure({
      family: "diversity-bars",
      inputs: [{ path: fixture("agent_comparison.csv") }],
      output: "u.svg",
    });
    expect(count(svg, /class="bar"/g)).toBe(15); // 5 agents x 3 metrics
    expect(svg).toContain(">ILS<");
    expect(svg).toContain(">BLS<");
    expect(svg).toContain(">combined<");
  });

  it("rejects a CSV from the wrong sweep", () => {
    expect(() =>
      buildFigure({
        family: "reward-vs-p",
        inputs: [{ path: fixture("lambda_sweep_qth2.csv") }],
        output: "u.svg",
      }),
    ).toThrow(/expected a "p" sweep/);
  });

  it("rejects unknown families", () => {
    expect(() =>
      buildFigure({
        family: "reward-vs-everything",
        inputs: [{ path: fixture("p_sweep_b_lbrs.csv") }],
        output: "u.svg",
      }),
    ).toThrow(SchemaError);
  });

  it("names the missing column on schema mismatch and writes nothing", () => {
    const dir = tmp();
    const broken = join(dir, "broken.csv");
    const original = readFileSync(fixture("p_sweep_b_lbrs.csv"), "utf8");
    const without = original
      .split("\n")
      .map((line) => line.split(",").filter((_, i) => i !== 6).join(","))
      .join("\n"); // drop avg_diversity
    writeFileSync(broken, without);
    const out = join(dir, "out.svg");
    const spec: FigureSpec = {
      family: "diversity-vs-p",
      inputs: [{ path: broken }],
      output: out,
    };
    expect(() => renderToFile(spec)).toThrow(/avg_diversity/);
    expect(existsSync(out)).toBe(false);
  });

  it("refuses an empty CSV and writes nothing", () => {
    const dir = tmp();
    const empty = join(dir, "empty.csv");
    writeFileSync(empty, "");
    const out = join(dir, "out.svg");
    expect(() =>
      renderToFile({ family: "reward-vs-p", inputs: [{ path: empty }], output: out }),
    ).toThrow(/empty/);
    expect(existsSync(out)).toBe(false);
  });

  it("re-renders byte-identically", () => {
    const dir = tmp();
    const spec: FigureSpec = {
      family: "reward-vs-lambda",
      inputs: [{ path: fixture("lambda_sweep_qth2.csv") }],
      output: join(dir, "fig.svg"),
    };
    renderToFile(spec);
    const first = readFileSync(spec.output);
    renderToFile(spec);
    const second = readFileSync(spec.output);
    expect(second.equals(first)).toBe(true);
  });
});

describe("spec files", () => {
  it("parses a valid spec", () => {
    const dir = tmp();
    const path = join(dir, "spec.json");
    writeFileSync(
      path,
      JSON.stringify({
        family: "diversity-bars",
        inputs: [{ path: fixture("agent_comparison.csv") }],
        output: join(dir, "bars.svg"),
      }),
    );
    const spec = parseSpecFile(path);
    renderToFile(spec);
    expect(existsSync(spec.output)).toBe(true);
  });

  it("rejects bad specs with a reason", () => {
    const dir = tmp();
    const path = join(dir, "spec.json");
    writeFileSync(path, JSON.stringify({ family: "nope", inputs: [], output: "x" }));
    expect(() => parseSpecFile(path)).toThrow(/family/);
    writeFileSync(path, "{not json");
    expect(() => parseSpecFile(path)).toThrow(/not valid JSON/);
  });
});
