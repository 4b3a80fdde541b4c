#!/usr/bin/env node
import { readFileSync, writeFileSync } from "fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { parseTable } from "./csv.js";
import { MetricName, renderHeatmap } from "./heatmap.js";

const argv = yargs(hideBin(process.argv))
  .usage("Render sweep results as per-(p, q) heatmap panels")
  .option("in", { type: "string", demandOption: true, describe: "sweep CSV" })
  .option("metric", {
    choices: ["rcfs", "aiat"] as const,
    demandOption: true,
    describe: "which metric column to color by",
  })
  .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
  .option("title", { type: "string" })
  .strict()
  .parseSync();

const sweep = parseTable(readFileSync(argv.in, "utf8"), []);
writeFileSync(
  argv.out,
  renderHeatmap(sweep, argv.metric as MetricName, { title: argv.title }),
);
console.log(`wrote ${argv.out}`);
