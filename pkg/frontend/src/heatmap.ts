import { CsvError, Table, num, str } from "./csv.js";
import { divergingColor, sequentialColor } from "./scales.js";
import { esc, fmt, svgDocument, tag } from "./svg.js";

export type MetricName = "rcfs" | "aiat";

export interface HeatmapOptions {
  cellSize?: number;
  title?: string;
}

const AXIS_CANDIDATES = ["l_i", "l_h", "l_r"] as const;
const CELL = 46;
const PANEL_GAP = 34;
const MARGIN = { top: 48, right: 86, bottom: 46, left: 64 };

interface Panel {
  p: number;
  q: number;
  values: number[][]; // [yi][xi], NaN marks a failed or missing-metric cell
}

export interface Grid {
  xParam: string;
  yParam: string | null;
  xs: number[];
  ys: number[];
  panels: Panel[];
}

function uniqueSorted(vals: number[]): number[] {
  return [...new Set(vals)].sort((a, b) => a - b);
}

/** Arrange sweep rows into per-(p, q) panels over the varying axis params. */
export function buildGrid(sweep: Table, metric: MetricName): Grid {
  const required = ["p", "q", "l_i", "l_h", "l_r", "status", metric];
  for (const c of required) {
    if (!sweep.columns.includes(c)) {
      throw new CsvError(`sweep CSV lacks column ${c}`);
    }
  }

  const varying = AXIS_CANDIDATES.filter(
    (c) => uniqueSorted(sweep.rows.map((r) => num(r, c))).length > 1,
  );
  if (varying.length > 2) {
    throw new CsvError(`more than two varying axes: ${varying.join(", ")}`);
  }
  const xParam = varying[0] ?? "l_i";
  const yParam = varying[1] ?? null;
  const xs = uniqueSorted(sweep.rows.map((r) => num(r, xParam)));
  const ys = yParam ? uniqueSorted(sweep.rows.map((r) => num(r, yParam))) : [0];

  const byPanel = new Map<string, Map<string, number>>();
  for (const row of sweep.rows) {
    const key = `${num(row, "p")}|${num(row, "q")}`;
    let cells = byPanel.get(key);
    if (!cells) {
      cells = new Map();
      byPanel.set(key, cells);
    }
    const cellKey = `${num(row, xParam)}|${yParam ? num(row, yParam) : 0}`;
    if (cells.has(cellKey)) {
      throw new CsvError(`duplicate grid cell at ${xParam}=${cellKey}`);
    }
    const value = str(row, "status") === "ok" ? num(row, metric) : NaN;
    cells.set(cellKey, value);
  }

  const panels: Panel[] = [];
  for (const [key, cells] of byPanel) {
    if (cells.size !== xs.length * ys.length) {
      throw new CsvError(
        `grid is not rectangular: panel (p,q)=(${key.replace("|", ", ")}) has ` +
          `${cells.size} cells, expected ${xs.length * ys.length}`,
      );
    }
    const [p, q] = key.split("|").map(Number);
    const values = ys.map((y) =>
      xs.map((x) => {
        const v = cells.get(`${x}|${y}`);
        if (v === undefined) {
          throw new CsvError(
            `grid is not rectangular: missing cell ${xParam}=${x}` +
              (yParam ? `, ${yParam}=${y}` : "") + ` in panel (${key})`,
          );
        }
        return v;
      }),
    );
    panels.push({ p, q, values });
  }
  panels.sort((a, b) => a.p - b.p || a.q - b.q);
  return { xParam, yParam, xs, ys, panels };
}

function colorFor(metric: MetricName, v: number, lo: number, hi: number): string {
  if (metric === "rcfs") {
    return divergingColor(v, Math.max(Math.abs(lo), Math.abs(hi), 1e-9));
  }
  return sequentialColor(v, Math.min(lo, 0), hi);
}

/** Sweep results as one SVG heatmap per (p, q) combination. */
export function renderHeatmap(
  sweep: Table,
  metric: MetricName,
  opts: HeatmapOptions = {},
): string {
  const grid = buildGrid(sweep, metric);
  const cell = opts.cellSize ?? CELL;
  const panelW = grid.xs.length * cell;
  const panelH = grid.ys.length * cell;
  const width =
    MARGIN.left + grid.panels.length * (panelW + PANEL_GAP) - PANEL_GAP + MARGIN.right;
  const height = MARGIN.top + panelH + MARGIN.bottom;

  const finite = grid.panels.flatMap((p) => p.values.flat()).filter(Number.isFinite);
  const lo = finite.length ? Math.min(...finite) : 0;
  const hi = finite.length ? Math.max(...finite) : 1;

  const parts: string[] = [];
  parts.push(
    "<defs>" +
      '<pattern id="failed" width="6" height="6" patternUnits="userSpaceOnUse">' +
      '<rect width="6" height="6" fill="#eee"/>' +
      '<path d="M0 6 L6 0" stroke="#888" stroke-width="1"/>' +
      "</pattern></defs>",
  );
  parts.push(tag("rect", { x: 0, y: 0, width, height, fill: "white" }));

  grid.panels.forEach((panel, pi) => {
    const ox = MARGIN.left + pi * (panelW + PANEL_GAP);
    const oy = MARGIN.top;
    parts.push(
      tag(
        "text",
        { x: ox + panelW / 2, y: oy - 8, "text-anchor": "middle" },
        `p=${fmt(panel.p)}, q=${fmt(panel.q)}`,
      ),
    );
    panel.values.forEach((rowVals, yi) => {
      rowVals.forEach((v, xi) => {
        // y axis runs upward: last row of values sits at the top
        const attrs: Record<string, string | number> = {
          x: ox + xi * cell,
          y: oy + (grid.ys.length - 1 - yi) * cell,
          width: cell,
          height: cell,
          stroke: "#fff",
          fill: Number.isFinite(v) ? colorFor(metric, v, lo, hi) : "url(#failed)",
        };
        if (!Number.isFinite(v)) attrs.class = "failed-cell";
        parts.push(tag("rect", attrs));
      });
    });
    grid.xs.forEach((x, xi) => {
      parts.push(
        tag(
          "text",
          {
            x: ox + (xi + 0.5) * cell,
            y: oy + panelH + 14,
            "text-anchor": "middle",
            "font-size": 10,
          },
          fmt(x),
        ),
      );
    });
    parts.push(
      tag(
        "text",
        { x: ox + panelW / 2, y: oy + panelH + 30, "text-anchor": "middle" },
        esc(grid.xParam),
      ),
    );
    if (pi === 0 && grid.yParam) {
      grid.ys.forEach((y, yi) => {
        parts.push(
          tag(
            "text",
            {
              x: ox - 6,
              y: oy + (grid.ys.length - 1 - yi + 0.5) * cell + 3,
              "text-anchor": "end",
              "font-size": 10,
            },
            fmt(y),
          ),
        );
      });
      parts.push(
        tag(
          "text",
          {
            x: ox - 44,
            y: oy + panelH / 2,
            "text-anchor": "middle",
            transform: `rotate(-90 ${ox - 44} ${oy + panelH / 2})`,
          },
          esc(grid.yParam),
        ),
      );
    }
  });

  // color bar
  const bx = width - MARGIN.right + 24;
  const steps = 24;
  for (let i = 0; i < steps; i++) {
    const v = lo + ((hi - lo) * (i + 0.5)) / steps;
    parts.push(
      tag("rect", {
        x: bx,
        y: MARGIN.top + panelH - ((i + 1) * panelH) / steps,
        width: 14,
        height: panelH / steps + 0.5,
        fill: colorFor(metric, v, lo, hi),
      }),
    );
  }
  parts.push(
    tag("text", { x: bx + 18, y: MARGIN.top + 8, "font-size": 10 }, fmt(hi)),
    tag("text", { x: bx + 18, y: MARGIN.top + panelH, "font-size": 10 }, fmt(lo)),
    tag(
      "text",
      { x: bx + 7, y: MARGIN.top - 10, "text-anchor": "middle" },
      esc(metric),
    ),
  );

  if (opts.title) {
    parts.push(
      tag(
        "text",
        { x: width / 2, y: 18, "text-anchor": "middle", "font-size": 13 },
        esc(opts.title),
      ),
    );
  }
  return svgDocument(width, height, parts.join("\n"));
}
