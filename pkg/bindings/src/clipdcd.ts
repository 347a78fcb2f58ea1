/** Direct access to the box-constrained dual solver. */

import { readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { Matrix, runCli, toRows, withTempDir } from "./core.js";
import { ArgumentError } from "./errors.js";

export interface OptimizeResult {
  alpha: number[];
  objective: number;
  iterations: number;
  converged: boolean;
  kkt: number;
}

/** Minimize 0.5 a'Qa - sum(a) over the box [0, upperBound]^n. */
export function optimize(
  Q: Matrix,
  upperBound: number,
  tolerance?: number,
  maxIterations?: number,
): OptimizeResult {
  const rows = toRows(Q);
  if (rows.length !== rows[0].length) {
    throw new ArgumentError(
      `Q must be square, got ${rows.length}x${rows[0].length}`,
    );
  }
  if (!Number.isFinite(upperBound) || upperBound <= 0) {
    throw new ArgumentError("upperBound must be a positive finite number");
  }

  return withTempDir((dir) => {
    const matrixPath = join(dir, "matrix.json");
    const outPath = join(dir, "solution.json");
    writeFileSync(matrixPath, JSON.stringify(rows));
    const args = [
      "optimize",
      "--matrix", matrixPath,
      "--c", String(upperBound),
      "--out", outPath,
    ];
    if (tolerance !== undefined) {
      args.push("--tolerance", String(tolerance));
    }
    if (maxIterations !== undefined) {
      args.push("--max-iter", String(maxIterations));
    }
    runCli(args);
    return JSON.parse(readFileSync(outPath, "utf8")) as OptimizeResult;
  });
}
