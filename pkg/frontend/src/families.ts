import { numericCell, requireColumns, SchemaError, Table } from "./csv.js";
import { ChartModel, Series } from "./charts.js";

export const LOWER_IS_BETTER = "lower is better";

export interface FamilyDef {
  kind: "line" | "bar";
  /** sweep parameter the input CSVs must carry, or null to accept any */
  parameter: string | null;
  metric: string;
  ci: string;
  title: string;
  yLabel: string;
  xLabel: string;
  lowerIsBetter: boolean;
}

export const FAMILIES: Record<string, FamilyDef> = {
  "reward-vs-p": {
    kind: "line", parameter: "p",
    metric: "avg_reward_session", ci: "ci_reward_session",
    title: "Average session reward vs recommendation probability",
    yLabel: "avg reward per session", xLabel: "p", lowerIsBetter: false,
  },
  "diversity-vs-p": {
    kind: "line", parameter: "p",
    metric: "avg_diversity", ci: "ci_diversity",
    title: "Diversity score vs recommendation probability",
    yLabel: "diversity score", xLabel: "p", lowerIsBetter: true,
  },
  "reward-vs-lambda": {
    kind: "line", parameter: "lambda",
    metric: "avg_reward_session", ci: "ci_reward_session",
    title: "Average session reward vs heterogeneity coefficient",
    yLabel: "avg reward per session", xLabel: "lambda", lowerIsBetter: false,
  },
  "diversity-vs-lambda": {
    kind: "line", parameter: "lambda",
    metric: "avg_diversity", ci: "ci_diversity",
    title: "Diversity score vs heterogeneity coefficient",
    yLabel: "diversity score", xLabel: "lambda", lowerIsBetter: true,
  },
  "compare-vs-k": {
    kind: "bar", parameter: "k",
    metric: "avg_reward_session", ci: "ci_reward_session",
    title: "Agent comparison across slate sizes",
    yLabel: "avg reward per session", xLabel: "k", lowerIsBetter: false,
  },
  "compare-vs-M": {
    kind: "bar", parameter: "M",
    metric: "avg_reward_session", ci: "ci_reward_session",
    title: "Agent comparison across catalog sizes",
    yLabel: "avg reward per session", xLabel: "M", lowerIsBetter: false,
  },
  "diversity-bars": {
    kind: "bar", parameter: null,
    metric: "avg_diversity", ci: "ci_diversity",
    title: "Diversity components by agent",
    yLabel: "score", xLabel: "agent", lowerIsBetter: true,
  },
};

export const FAMILY_NAMES = Object.keys(FAMILIES);

interface Aggregated {
  categories: string[];
  mean: Map<string, number>;
  halfWidth: Map<string, number>;
  agent: string;
}

/** Mean over replicates per parameter value, preserving first-seen order. */
function aggregate(table: Table, def: FamilyDef): Aggregated {
  requireColumns(table, ["parameter", "value", "agent", def.metric, def.ci]);
  if (def.parameter !== null) {
    for (const row of table.rows) {
      if (row.parameter !== def.parameter) {
        throw new SchemaError(
          `${table.path}: expected a "${def.parameter}" sweep, found parameter ` +
            `"${row.parameter}"`,
        );
      }
    }
  }
  const categories: string[] = [];
  const sums = new Map<string, { y: number; ci: number; n: number }>();
  const agents = new Set<string>();
  for (const row of table.rows) {
    const key = row.value;
    const y = numericCell(row, def.metric);
    if (y === null) {
      throw new SchemaError(`${table.path}: empty "${def.metric}" cell`);
    }
    const ci = numericCell(row, def.ci) ?? 0;
    if (!sums.has(key)) {
      sums.set(key, { y: 0, ci: 0, n: 0 });
      categories.push(key);
    }
    const bucket = sums.get(key)!;
    bucket.y += y;
    bucket.ci += ci;
    bucket.n += 1;
    agents.add(row.agent);
  }
  const mean = new Map<string, number>();
  const halfWidth = new Map<string, number>();
  for (const [key, { y, ci, n }] of sums) {
    mean.set(key, y / n);
    halfWidth.set(key, ci / n);
  }
  const agent = agents.size === 1 ? [...agents][0] : [...agents].sort().join("/");
  return { categories, mean, halfWidth, agent };
}

function formatCategory(raw: string): string {
  const value = Number(raw);
  if (Number.isNaN(value) || raw === "") return raw;
  return String(value);
}

export function buildModel(
  family: string,
  tables: Table[],
  labels: (string | undefined)[],
): ChartModel {
  const def = FAMILIES[family];
  if (def === undefined) {
    throw new SchemaError(
      `unknown figure family "${family}" (expected one of ${FAMILY_NAMES.join(", ")})`,
    );
  }
  if (tables.length === 0) {
    throw new SchemaError("at least one input CSV is required");
  }

  if (family === "diversity-bars") {
    return diversityBars(tables, def);
  }

  const aggregated = tables.map((t) => aggregate(t, def));
  const categories: string[] = [];
  for (const agg of aggregated) {
    for (const c of agg.categories) {
      if (!categories.includes(c)) categories.push(c);
    }
  }
  const series: Series[] = aggregated.map((agg, i) => ({
    label: labels[i] ?? agg.agent,
    values: categories.map((c) => agg.mean.get(c) ?? null),
    halfWidths: categories.map((c) => agg.halfWidth.get(c) ?? null),
  }));
  return {
    kind: def.kind,
    title: def.title,
    note: def.lowerIsBetter ? LOWER_IS_BETTER : undefined,
    xLabel: def.xLabel,
    yLabel: def.yLabel,
    categories: categories.map(formatCategory),
    series,
  };
}

/** One group per agent with its ILS, BLS, and combined score side by side. */
function diversityBars(tables: Table[], def: FamilyDef): ChartModel {
  const metrics: [string, string][] = [
    ["avg_ils", "ILS"],
    ["avg_bls", "BLS"],
    ["avg_diversity", "combined"],
  ];
  const agents: string[] = [];
  const perMetric = new Map<string, Map<string, { v: number; n: number }>>(
    metrics.map(([col]) => [col, new Map()]),
  );
  for (const table of tables) {
    requireColumns(table, ["agent", ...metrics.map(([col]) => col)]);
    for (const row of table.rows) {
      const agent = row.agent;
      if (!agents.includes(agent)) agents.push(agent);
      for (const [col] of metrics) {
        const value = numericCell(row, col);
        if (value === null) {
          throw new SchemaError(`${table.path}: empty "${col}" cell`);
        }
        const bucket = perMetric.get(col)!;
        const prior = bucket.get(agent) ?? { v: 0, n: 0 };
        bucket.set(agent, { v: prior.v + value, n: prior.n + 1 });
      }
    }
  }
  const series: Series[] = metrics.map(([col, label]) => ({
    label,
    values: agents.map((agent) => {
      const cell = perMetric.get(col)!.get(agent)!;
      return cell.v / cell.n;
    }),
  }));
  return {
    kind: "bar",
    title: def.title,
    note: LOWER_IS_BETTER,
    xLabel: def.xLabel,
    yLabel: def.yLabel,
    categories: agents,
    series,
  };
}
