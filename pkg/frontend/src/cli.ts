#!/usr/bin/env node
/**
 * render --kind polar|network --in <paths> --out <image>
 *
 * polar   needs one --in: an engagement_profiles.json export (pick an entry
 *         with --community when the file holds several).
 * network needs three --in, in order: edge list CSV (src,dst,weight),
 *         partition CSV (node,community), centrality CSV (node,score).
 *
 * The image is SVG; a <name>.sidecar.json with the drawn values lands next
 * to it. Exit codes: 0 done, 1 bad arguments or invalid artifacts, 2
 * runtime failure.
 */
import { realpathSync } from "fs";
import { pathToFileURL } from "url";
import { parseArgs } from "util";
import { readCentrality, readEdges, readPartition, readProfile, ValidationError } from "./schema.js";
import { writePolar } from "./polar.js";
import { writeNetwork } from "./network.js";

const USAGE = `usage: render --kind polar --in engagement_profiles.json [--community N] --out fig.svg
       render --kind network --in edges.csv --in partition.csv --in centrality.csv --out fig.svg

Renders pipeline artifacts to an SVG image plus a sidecar JSON holding the
drawn values (sector counts, node sizes and colors). network inputs are
positional by role: edge list, partition, centrality.
`;

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      options: {
        kind: { type: "string" },
        in: { type: "string", multiple: true },
        out: { type: "string" },
        community: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
      allowPositionals: true,
    });
  } catch (err: any) {
    process.stderr.write(`${err.message}\n${USAGE}`);
    return 1;
  }

  if (args.values.help) {
    process.stdout.write(USAGE);
    return 0;
  }
  // Tolerate the command name showing up as a positional (node dist/cli.js render ...).
  const positionals = args.positionals.filter((p) => p !== "render");
  if (positionals.length > 0) {
    process.stderr.write(`unexpected argument: ${positionals[0]}\n${USAGE}`);
    return 1;
  }

  const kind = args.values.kind;
  const inputs = args.values.in ?? [];
  const out = args.values.out;
  if (!kind || !out) {
    process.stderr.write(`--kind and --out are required\n${USAGE}`);
    return 1;
  }

  try {
    if (kind === "polar") {
      if (inputs.length !== 1) {
        process.stderr.write(`polar takes exactly one --in (got ${inputs.length})\n${USAGE}`);
        return 1;
      }
      let community: number | undefined;
      if (args.values.community !== undefined) {
        community = Number(args.values.community);
        if (!Number.isInteger(community)) {
          process.stderr.write(`--community must be an integer\n`);
          return 1;
        }
      }
      const profile = readProfile(inputs[0], community);
      writePolar(profile, out);
      return 0;
    }
    if (kind === "network") {
      if (inputs.length !== 3) {
        process.stderr.write(
          `network takes three --in: edges, partition, centrality (got ${inputs.length})\n${USAGE}`,
        );
        return 1;
      }
      writeNetwork(readEdges(inputs[0]), readPartition(inputs[1]), readCentrality(inputs[2]), out);
      return 0;
    }
    process.stderr.write(`unknown kind: ${kind}\n${USAGE}`);
    return 1;
  } catch (err: any) {
    if (err instanceof ValidationError) {
      process.stderr.write(`${err.message}\n`);
      return 1;
    }
    process.stderr.write(`${err.message ?? err}\n`);
    return 2;
  }
}

let invokedDirectly = false;
try {
  invokedDirectly =
    process.argv[1] !== undefined &&
    import.meta.url === pathToFileURL(realpathSync(process.argv[1])).href;
} catch {
  invokedDirectly = false;
}
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
