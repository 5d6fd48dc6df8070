/**
 * Figure CLI.
 *
 * Usage:
 *   plot --kind {sindr|rmse|ber} --in <results.csv> --out <figure.svg>
 *
 * Reads one simulator result file and writes one SVG. Nothing is written
 * when the input is missing, empty or malformed.
 */
import { writeFileSync } from "node:fs";
import { parseArgs } from "node:util";
import { pathToFileURL } from "node:url";

import { loadCsv } from "./csv.js";
import { FIGURE_BUILDERS, FIGURE_COLUMNS, FigureKind } from "./figures.js";

const USAGE = "usage: plot --kind {sindr|rmse|ber} --in <results.csv> --out <figure.svg>";

export function runCli(argv: string[]): number {
  let kind: string | undefined;
  let input: string | undefined;
  let out: string | undefined;
  try {
    const parsed = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        in: { type: "string" },
        out: { type: "string" },
      },
    });
    kind = parsed.values.kind;
    input = parsed.values.in;
    out = parsed.values.out;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    console.error(USAGE);
    return 2;
  }
  if (!kind || !input || !out) {
    console.error(USAGE);
    return 2;
  }
  if (!(kind in FIGURE_BUILDERS)) {
    console.error(`error: unknown kind "${kind}" (expected sindr, rmse or ber)`);
    return 2;
  }
  try {
    const rows = loadCsv(input, FIGURE_COLUMNS[kind as FigureKind]);
    const svg = FIGURE_BUILDERS[kind as FigureKind](rows);
    writeFileSync(out, svg);
    console.log(`wrote ${out} (${rows.length} rows)`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const entry = process.argv[1] ? pathToFileURL(process.argv[1]).href : "";
if (import.meta.url === entry) {
  process.exit(runCli(process.argv.slice(2)));
}
