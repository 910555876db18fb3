#!/usr/bin/env node
/** `cvsketch-plot plot --spec figure.json [--format svg|png]`
 * Exit codes: 0 success, 1 config error (bad spec / empty input), 2 data
 * error (missing or malformed report files). */

import { SchemaMismatchError } from "./contract.js";
import { EmptyInputError } from "./figures.js";
import { renderFigure } from "./render.js";
import { loadFigureSpec } from "./spec.js";

export function main(argv: string[]): number {
  const [command, ...rest] = argv;
  if (command !== "plot") {
    process.stderr.write("usage: cvsketch-plot plot --spec <figure.json> [--format svg|png]\n");
    return 1;
  }
  let specPath: string | undefined;
  let format: string | undefined;
  for (let i = 0; i < rest.length; i++) {
    if (rest[i] === "--spec") {
      specPath = rest[++i];
    } else if (rest[i] === "--format") {
      format = rest[++i];
    } else {
      process.stderr.write(`config error: unknown argument '${rest[i]}'\n`);
      return 1;
    }
  }
  if (!specPath) {
    process.stderr.write("config error: --spec is required\n");
    return 1;
  }
  try {
    const spec = loadFigureSpec(specPath);
    if (format !== undefined) {
      if (format !== "svg" && format !== "png") {
        throw new Error(`format must be svg or png, got '${format}'`);
      }
      spec.format = format;
    }
    const result = renderFigure(spec);
    process.stdout.write(JSON.stringify(result) + "\n");
    return 0;
  } catch (err) {
    const message = err instanceof Error ? err.message : String(err);
    if (err instanceof SchemaMismatchError) {
      process.stderr.write(`data error: ${message}\n`);
      return 2;
    }
    if (err && typeof err === "object" && "code" in err && err.code === "ENOENT") {
      process.stderr.write(`data error: ${message}\n`);
      return 2;
    }
    if (err instanceof EmptyInputError || err instanceof SyntaxError) {
      process.stderr.write(`config error: ${message}\n`);
      return 1;
    }
    process.stderr.write(`config error: ${message}\n`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  (process.argv[1].endsWith("/cli.js") || process.argv[1].endsWith("cvsketch-plot"));
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
