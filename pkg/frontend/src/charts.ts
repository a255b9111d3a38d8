/**
 * Minimal deterministic SVG charts: no timestamps, no randomness, fixed
 * geometry, so re-rendering identical data yields identical bytes.
 */

export interface Series {
  label: string;
  /** One entry per category; null leaves a gap. */
  values: (number | null)[];
  /** Optional symmetric error half-widths, same length. */
  halfWidths?: (number | null)[];
}

export interface ChartModel {
  kind: "line" | "bar";
  title: string;
  note?: string;
  xLabel: string;
  yLabel: string;
  categories: string[];
  series: Series[];
}

const WIDTH = 760;
const HEIGHT = 460;
const MARGIN = { top: 56, right: 170, bottom: 58, left: 70 };
const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

const fmt = (x: number): string => {
  const s = x.toFixed(3);
  return s.replace(/\.?0+$/, "") || "0";
};

function tickValues(lo: number, hi: number, count = 5): number[] {
  if (lo === hi) {
    hi = lo + (lo === 0 ? 1 : Math.abs(lo) * 0.1);
  }
  const span = hi - lo;
  const step0 = span / count;
  const magnitude = Math.pow(10, Math.floor(Math.log10(step0)));
  const candidates = [1, 2, 2.5, 5, 10].map((m) => m * magnitude);
  const step = candidates.find((c) => span / c <= count) ?? candidates[4];
  const start = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderChart(model: ChartModel): string {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const n = model.categories.length;

  let lo = Infinity;
  let hi = -Infinity;
  for (const s of model.series) {
    s.values.forEach((v, i) => {
      if (v === null) return;
      const h = s.halfWidths?.[i] ?? 0;
      lo = Math.min(lo, v - (h ?? 0));
      hi = Math.max(hi, v + (h ?? 0));
    });
  }
  if (!Number.isFinite(lo)) {
    lo = 0;
    hi = 1;
  }
  if (model.kind === "bar") lo = Math.min(0, lo);
  const pad = (hi - lo || 1) * 0.06;
  lo = model.kind === "bar" && lo === 0 ? 0 : lo - pad;
  hi = hi + pad;

  const y = (v: number) => MARGIN.top + plotH - ((v - lo) / (hi - lo)) * plotH;
  const xCenter = (i: number) => MARGIN.left + ((i + 0.5) / n) * plotW;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-size="16">` +
      `${escapeXml(model.title)}</text>`,
  );
  if (model.note) {
    parts.push(
      `<text x="${WIDTH / 2}" y="42" text-anchor="middle" font-size="11" ` +
        `font-style="italic" fill="#555">${escapeXml(model.note)}</text>`,
    );
  }

  for (const tick of tickValues(lo, hi)) {
    const ty = y(tick);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${ty.toFixed(2)}" x2="${MARGIN.left + plotW}" ` +
        `y2="${ty.toFixed(2)}" stroke="#ddd"/>`,
      `<text x="${MARGIN.left - 8}" y="${(ty + 4).toFixed(2)}" text-anchor="end" ` +
        `font-size="11">${fmt(tick)}</text>`,
    );
  }
  model.categories.forEach((cat, i) => {
    parts.push(
      `<text x="${xCenter(i).toFixed(2)}" y="${MARGIN.top + plotH + 18}" ` +
        `text-anchor="middle" font-size="11">${escapeXml(cat)}</text>`,
    );
  });
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#333"/>`,
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 16}" text-anchor="middle" ` +
      `font-size="12">${escapeXml(model.xLabel)}</text>`,
    `<text x="20" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="12" ` +
      `transform="rotate(-90 20 ${MARGIN.top + plotH / 2})">${escapeXml(model.yLabel)}</text>`,
  );

  model.series.forEach((s, si) => {
    const color = PALETTE[si % PALETTE.length];
    if (model.kind === "line") {
      const points = s.values
        .map((v, i) => (v === null ? null : `${xCenter(i).toFixed(2)},${y(v).toFixed(2)}`))
        .filter((p): p is string => p !== null);
      if (points.length > 1) {
        parts.push(
          `<polyline class="series" fill="none" stroke="${color}" stroke-width="2" ` +
            `points="${points.join(" ")}"/>`,
        );
      }
      s.values.forEach((v, i) => {
        if (v === null) return;
        parts.push(
          `<circle class="marker" cx="${xCenter(i).toFixed(2)}" cy="${y(v).toFixed(2)}" ` +
            `r="3" fill="${color}"/>`,
        );
      });
    } else {
      const groupW = (plotW / n) * 0.8;
      const barW = groupW / model.series.length;
      const y0 = y(Math.max(lo, 0));
      s.values.forEach((v, i) => {
        if (v === null) return;
        const x0 = xCenter(i) - groupW / 2 + si * barW;
        const top = Math.min(y(v), y0);
        const height = Math.abs(y0 - y(v));
        parts.push(
          `<rect class="bar" x="${x0.toFixed(2)}" y="${top.toFixed(2)}" ` +
            `width="${barW.toFixed(2)}" height="${height.toFixed(2)}" fill="${color}"/>`,
        );
      });
    }
    // error whiskers
    s.values.forEach((v, i) => {
      const h = s.halfWidths?.[i];
      if (v === null || h === null || h === undefined || h <= 0) return;
      const groupW = (plotW / n) * 0.8;
      const barW = groupW / model.series.length;
      const cx =
        model.kind === "bar"
          ? xCenter(i) - groupW / 2 + si * barW + barW / 2
          : xCenter(i);
      parts.push(
        `<line class="whisker" x1="${cx.toFixed(2)}" y1="${y(v - h).toFixed(2)}" ` +
          `x2="${cx.toFixed(2)}" y2="${y(v + h).toFixed(2)}" stroke="#333" stroke-width="1"/>`,
      );
    });
  });

  const legendX = MARGIN.left + plotW + 14;
  model.series.forEach((s, si) => {
    const ly = MARGIN.top + 10 + si * 20;
    parts.push(
      `<rect x="${legendX}" y="${ly - 9}" width="12" height="12" ` +
        `fill="${PALETTE[si % PALETTE.length]}"/>`,
      `<text class="legend" x="${legendX + 18}" y="${ly + 2}" font-size="12">` +
        `${escapeXml(s.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
