#!/usr/bin/env node
import { readFileSync, writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { parseTable } from "./csv.js";
import { renderTimeseries } from "./timeseries.js";

const argv = yargs(hideBin(process.argv))
  .usage("Render a compartment time series SVG from a trajectory CSV")
  .option("in", {
    type: "string",
    demandOption: true,
    describe: "trajectory CSV (t, compartments, phase columns)",
  })
  .option("baseline", {
    type: "string",
    describe: "optional no-intervention trajectory CSV, drawn dashed",
  })
  .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
  .option("channels", {
    type: "string",
    default: "I",
    describe: "comma-separated columns to plot",
  })
  .option("title", { type: "string" })
  .strict()
  .parseSync();

const channels = argv.channels.split(",").map((s) => s.trim()).filter(Boolean);
const traj = parseTable(readFileSync(argv.in, "utf8"), ["t", "phase", ...channels]);
const baseline = argv.baseline
  ? parseTable(readFileSync(argv.baseline, "utf8"), ["t", ...channels])
  : null;

writeFileSync(argv.out, renderTimeseries(traj, baseline, { channels, title: argv.title }));
console.log(`wrote ${argv.out}`);
