import { CsvError, Table, num, str } from "./csv.js";
import { linearScale, ticks } from "./scales.js";
import { esc, fmt, polyline, svgDocument, tag } from "./svg.js";

export interface TimeseriesOptions {
  channels: string[];
  width?: number;
  height?: number;
  title?: string;
}

const PALETTE = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const MARGIN = { top: 36, right: 16, bottom: 40, left: 58 };

interface PhaseBreak {
  t: number;
  phase: string;
}

/** Times where the phase column switches value, with the incoming phase. */
export function phaseBreaks(traj: Table): PhaseBreak[] {
  const out: PhaseBreak[] = [];
  let prev = str(traj.rows[0], "phase");
  for (const row of traj.rows.slice(1)) {
    const phase = str(row, "phase");
    if (phase !== prev) {
      out.push({ t: num(row, "t"), phase });
      prev = phase;
    }
  }
  return out;
}

function series(table: Table, col: string): [number, number][] {
  return table.rows.map((r) => [num(r, "t"), num(r, col)] as [number, number]);
}

/**
 * Compartment time series as a standalone SVG string.
 *
 * Solid lines are the main trajectory, dashed lines the optional baseline
 * run, and vertical gray dashed rules mark every phase change.
 */
export function renderTimeseries(
  traj: Table,
  baseline: Table | null,
  opts: TimeseriesOptions,
): string {
  const channels = opts.channels;
  if (channels.length === 0) {
    throw new CsvError("need at least one channel to plot");
  }
  for (const c of [...channels, "t", "phase"]) {
    if (!traj.columns.includes(c)) {
      throw new CsvError(`trajectory CSV lacks column ${c}`);
    }
  }
  if (baseline) {
    for (const c of [...channels, "t"]) {
      if (!baseline.columns.includes(c)) {
        throw new CsvError(`baseline CSV lacks column ${c}`);
      }
    }
  }

  const width = opts.width ?? 720;
  const height = opts.height ?? 420;
  const x0 = MARGIN.left;
  const x1 = width - MARGIN.right;
  const y0 = height - MARGIN.bottom;
  const y1 = MARGIN.top;

  const tables = baseline ? [traj, baseline] : [traj];
  const tMax = Math.max(...tables.flatMap((tb) => tb.rows.map((r) => num(r, "t"))));
  const vMax = Math.max(
    1e-12,
    ...tables.flatMap((tb) =>
      channels.flatMap((c) => tb.rows.map((r) => num(r, c))),
    ),
  );
  const sx = linearScale(0, tMax, x0, x1);
  const sy = linearScale(0, vMax * 1.05, y0, y1);

  const parts: string[] = [];
  parts.push(tag("rect", { x: 0, y: 0, width, height, fill: "white" }));

  for (const tv of ticks(0, tMax)) {
    parts.push(
      tag("line", { x1: sx(tv), y1: y0, x2: sx(tv), y2: y0 + 4, stroke: "#333" }),
      tag("text", { x: sx(tv), y: y0 + 16, "text-anchor": "middle" }, fmt(tv)),
    );
  }
  for (const tv of ticks(0, vMax * 1.05)) {
    parts.push(
      tag("line", { x1: x0 - 4, y1: sy(tv), x2: x0, y2: sy(tv), stroke: "#333" }),
      tag("text", { x: x0 - 7, y: sy(tv) + 3, "text-anchor": "end" }, fmt(tv)),
    );
  }
  parts.push(
    tag("line", { x1: x0, y1: y0, x2: x1, y2: y0, stroke: "#333" }),
    tag("line", { x1: x0, y1: y0, x2: x0, y2: y1, stroke: "#333" }),
    tag(
      "text",
      { x: (x0 + x1) / 2, y: height - 8, "text-anchor": "middle" },
      "time (days)",
    ),
  );

  for (const { t, phase } of phaseBreaks(traj)) {
    parts.push(
      tag("line", {
        x1: sx(t),
        y1: y0,
        x2: sx(t),
        y2: y1,
        stroke: "#999",
        "stroke-dasharray": "4 3",
        class: "phase-rule",
      }),
      tag(
        "text",
        { x: sx(t) + 3, y: y1 + 10, fill: "#777", "font-size": 9 },
        esc(phase),
      ),
    );
  }

  channels.forEach((c, i) => {
    const color = PALETTE[i % PALETTE.length];
    if (baseline) {
      parts.push(
        polyline(series(baseline, c).map(([t, v]) => [sx(t), sy(v)]), color, true),
      );
    }
    parts.push(polyline(series(traj, c).map(([t, v]) => [sx(t), sy(v)]), color));
    const lx = x1 - 70;
    const ly = y1 + 14 * i;
    parts.push(
      tag("line", { x1: lx, y1: ly, x2: lx + 18, y2: ly, stroke: color, "stroke-width": 1.5 }),
      tag("text", { x: lx + 23, y: ly + 3 }, esc(c)),
    );
  });

  if (opts.title) {
    parts.push(
      tag(
        "text",
        { x: (x0 + x1) / 2, y: 16, "text-anchor": "middle", "font-size": 13 },
        esc(opts.title),
      ),
    );
  }
  return svgDocument(width, height, parts.join("\n"));
}
