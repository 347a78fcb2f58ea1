/** The two binary classifiers, exposed as fit/predict estimators. */

import { readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import {
  Label,
  Labels,
  Matrix,
  ModelHandle,
  runCli,
  toCsv,
  toRows,
  withTempDir,
} from "./core.js";
import { ArgumentError, StateError } from "./errors.js";

export const DEFAULT_GAMMA = 2 ** -7;
export const DEFAULT_EPSILON = 1e-5;

export type KernelKind = "linear" | "rbf";

export interface EstimatorOptions {
  kernel?: KernelKind;
  c1?: number;
  c2?: number;
  /** RBF width; ignored for the linear kernel. */
  gamma?: number;
  /** Fraction of training rows kept as kernel reference points. */
  rectFraction?: number;
  /** Ridge added to every matrix inversion. */
  epsilon?: number;
  seed?: number;
  /** Dual-solver iteration budget (TSVM only). */
  maxIterations?: number;
}

function requirePositive(value: number, name: string): number {
  if (!Number.isFinite(value) || value <= 0) {
    throw new ArgumentError(`${name} must be a positive finite number`);
  }
  return value;
}

/** Run a `train` invocation and capture the model file it writes. */
export function trainModel(
  rows: number[][],
  y: Labels,
  cliArgs: string[],
): ModelHandle {
  return withTempDir((dir) => {
    const inputPath = join(dir, "train.csv");
    const modelPath = join(dir, "model.json");
    writeFileSync(inputPath, toCsv(rows, y));
    runCli([
      "train",
      "--input", inputPath,
      "--model", modelPath,
      ...cliArgs,
    ]);
    return new ModelHandle(readFileSync(modelPath, "utf8"));
  });
}

abstract class TwinEstimator {
  abstract readonly algorithm: "tsvm" | "lstsvm";

  readonly kernel: KernelKind;
  readonly c1: number;
  readonly c2: number;
  readonly gamma: number;
  readonly rectFraction: number;
  readonly epsilon: number;
  readonly seed: number;
  readonly maxIterations?: number;

  private handle: ModelHandle | null = null;

  constructor(options: EstimatorOptions = {}) {
    this.kernel = options.kernel ?? "linear";
    if (this.kernel !== "linear" && this.kernel !== "rbf") {
      throw new ArgumentError(`unknown kernel ${JSON.stringify(this.kernel)}`);
    }
    this.c1 = requirePositive(options.c1 ?? 1.0, "c1");
    this.c2 = requirePositive(options.c2 ?? 1.0, "c2");
    this.gamma = requirePositive(options.gamma ?? DEFAULT_GAMMA, "gamma");
    this.rectFraction = options.rectFraction ?? 1.0;
    if (!(this.rectFraction > 0 && this.rectFraction <= 1)) {
      throw new ArgumentError("rectFraction must lie in (0, 1]");
    }
    this.epsilon = requirePositive(options.epsilon ?? DEFAULT_EPSILON, "epsilon");
    this.seed = options.seed ?? 0;
    if (!Number.isInteger(this.seed)) {
      throw new ArgumentError("seed must be an integer");
    }
    if (options.maxIterations !== undefined) {
      if (!Number.isInteger(options.maxIterations) || options.maxIterations < 1) {
        throw new ArgumentError("maxIterations must be a positive integer");
      }
      this.maxIterations = options.maxIterations;
    }
  }

  /** Flags shared by direct and meta-estimator training. */
  trainArgs(strategy?: "ovo" | "ova"): string[] {
    const args = [
      "--algorithm", this.algorithm,
      "--kernel", this.kernel,
      "--c1", String(this.c1),
      "--c2", String(this.c2),
      "--epsilon", String(this.epsilon),
      "--seed", String(this.seed),
    ];
    if (this.kernel === "rbf") {
      args.push("--gamma", String(this.gamma));
      args.push("--rect", String(this.rectFraction));
    }
    if (this.maxIterations !== undefined) {
      args.push("--max-iter", String(this.maxIterations));
    }
    if (strategy !== undefined) {
      args.push("--multiclass", strategy);
    }
    return args;
  }

  get fitted(): boolean {
    return this.handle !== null;
  }

  /** The fitted model; throws until fit has been called. */
  get model(): ModelHandle {
    if (this.handle === null) {
      throw new StateError(
        `this ${this.constructor.name} is not fitted yet; call fit first`,
      );
    }
    return this.handle;
  }

  fit(X: Matrix, y: Labels): this {
    const rows = toRows(X);
    if (y.length !== rows.length) {
      throw new ArgumentError(
        `X has ${rows.length} rows but y has ${y.length} labels`,
      );
    }
    this.handle = trainModel(rows, y, this.trainArgs());
    return this;
  }

  predict(X: Matrix): Label[] {
    return this.model.predict(X);
  }
}

/** Twin support vector machine (dual-solver training). */
export class TSVM extends TwinEstimator {
  readonly algorithm = "tsvm";
}

/** Least-squares twin support vector machine (closed-form training). */
export class LSTSVM extends TwinEstimator {
  readonly algorithm = "lstsvm";
}

export type BinaryEstimator = TSVM | LSTSVM;
