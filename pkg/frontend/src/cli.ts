#!/usr/bin/env node
import { existsSync, mkdirSync } from "node:fs";
import { join } from "node:path";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { SchemaError } from "./csv.js";
import { makeDensityOverlay } from "./density.js";
import { makeTailFigure } from "./tail.js";

export interface CliOptions {
  input: string;
  out: string;
  kind: "all" | "tail" | "density";
  kappa: number;
}

export function runCli(opts: CliOptions): string[] {
  mkdirSync(opts.out, { recursive: true });
  const written: string[] = [];

  if (opts.kind === "all" || opts.kind === "tail") {
    const tailsCsv = join(opts.input, "tails.csv");
    if (!existsSync(tailsCsv)) {
      throw new SchemaError(`no tails.csv found in ${opts.input}`);
    }
    const output = join(opts.out, "tail_loglog.svg");
    makeTailFigure({
      input: tailsCsv,
      output,
      referenceSlope: 1 - opts.kappa,
    });
    written.push(output);
  }

  if (opts.kind === "all" || opts.kind === "density") {
    const samplesCsv = join(opts.input, "dufresne_samples.csv");
    if (!existsSync(samplesCsv)) {
      throw new SchemaError(`no dufresne_samples.csv found in ${opts.input}`);
    }
    const output = join(opts.out, "density_overlay.svg");
    // the density overlay renders the kappa = 2 identity-check samples
    makeDensityOverlay({ input: samplesCsv, output, kappa: 2.0 });
    written.push(output);
  }
  return written;
}

export function main(argv: string[]): number {
  const parsed = yargs(argv)
    .scriptName("make_plots")
    .option("input", { type: "string", demandOption: true, describe: "directory with CSV artifacts" })
    .option("out", { type: "string", demandOption: true, describe: "output directory for figures" })
    .option("kind", { choices: ["all", "tail", "density"] as const, default: "all" as const })
    .option("kappa", { type: "number", default: 1.5, describe: "tail index used for the 1 - kappa reference slope" })
    .strict()
    .exitProcess(false)
    .parseSync();

  try {
    const written = runCli({
      input: parsed.input,
      out: parsed.out,
      kind: parsed.kind,
      kappa: parsed.kappa,
    });
    for (const f of written) {
      console.log(`wrote ${f}`);
    }
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`schema error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  process.exit(main(hideBin(process.argv)));
}
