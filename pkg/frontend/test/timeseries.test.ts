import { describe, expect, it } from "vitest";

import { CsvError, parseTable } from "../src/csv.js";
import { phaseBreaks, renderTimeseries } from "../src/timeseries.js";

function trajCsv(): string {
  const lines = ["t,S,E,I,R,phase"];
  const phases = ["free", "free", "intervention", "intervention", "relaxation"];
  for (let i = 0; i < 5; i++) {
    lines.push(`${i * 10},${1000 - i},${i},${2 * i + 20},${i},${phases[i]}`);
  }
  return lines.join("\n") + "\n";
}

describe("phaseBreaks", () => {
  it("finds one break per phase change", () => {
    const breaks = phaseBreaks(parseTable(trajCsv(), ["t", "phase"]));
    expect(breaks).toEqual([
      { t: 20, phase: "intervention" },
      { t: 40, phase: "relaxation" },
    ]);
  });
});

describe("renderTimeseries", () => {
  const traj = parseTable(trajCsv(), ["t", "phase"]);

  it("produces an SVG with a line per channel", () => {
    const svg = renderTimeseries(traj, null, { channels: ["I", "S"] });
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg.match(/<polyline /g)).toHaveLength(2);
  });

  it("draws a dashed gray rule at every phase boundary", () => {
    const svg = renderTimeseries(traj, null, { channels: ["I"] });
    const rules = svg.match(/class="phase-rule"/g) ?? [];
    expect(rules).toHaveLength(2);
    expect(svg).toContain('stroke-dasharray="4 3"');
    expect(svg).toContain("relaxation");
  });

  it("overlays the baseline as dashed lines", () => {
    const baseline = parseTable(trajCsv(), ["t"]);
    const svg = renderTimeseries(traj, baseline, { channels: ["I"] });
    expect(svg.match(/<polyline /g)).toHaveLength(2);
    expect(svg).toContain('stroke-dasharray="6 3"');
  });

  it("rejects a channel the CSV does not have", () => {
    expect(() => renderTimeseries(traj, null, { channels: ["k_mean"] })).toThrowError(
      CsvError,
    );
  });

  it("rejects an empty channel list", () => {
    expect(() => renderTimeseries(traj, null, { channels: [] })).toThrowError(
      /at least one channel/,
    );
  });
});
