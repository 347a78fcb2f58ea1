/** Process bridge: every operation shells out to the twinsvm CLI and
 *  exchanges data through temporary CSV/JSON files.  No numerical work
 *  happens on the Node side, so results are bit-identical to the CLI's. */

import { spawnSync } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import {
  ArgumentError,
  DataError,
  FormatError,
  NumericalError,
  TwinSvmError,
} from "./errors.js";

export type NumericRow = ArrayLike<number>;
export type Matrix = readonly NumericRow[];
export type Label = number | string;
export type Labels = readonly Label[];

let cliCommand = process.env.TWINSVM_CLI ?? "twinsvm";

/** Override which executable the binding spawns (default `twinsvm`). */
export function setCliCommand(command: string): void {
  cliCommand = command;
}

export function getCliCommand(): string {
  return cliCommand;
}

/** Run one CLI invocation, mapping its exit-code families onto errors. */
export function runCli(args: string[]): string {
  const result = spawnSync(cliCommand, args, { encoding: "utf8" });
  if (result.error) {
    throw new TwinSvmError(
      `failed to spawn ${cliCommand}: ${result.error.message}`,
    );
  }
  if (result.status === 0) {
    return result.stdout;
  }
  const detail = (result.stderr || result.stdout || "").trim();
  switch (result.status) {
    case 2:
      throw new ArgumentError(detail);
    case 3:
      throw new DataError(detail);
    case 4:
      throw new NumericalError(detail);
    default:
      throw new TwinSvmError(`exit code ${result.status}: ${detail}`);
  }
}

export function withTempDir<T>(fn: (dir: string) => T): T {
  const dir = mkdtempSync(join(tmpdir(), "twinsvm-"));
  try {
    return fn(dir);
  } finally {
    rmSync(dir, { recursive: true, force: true });
  }
}

/** Normalize nested lists or typed-array rows into plain number rows. */
export function toRows(X: Matrix, featureCount?: number): number[][] {
  if (!Array.isArray(X) || X.length === 0) {
    throw new ArgumentError("X must be a non-empty array of sample rows");
  }
  const rows = X.map((row) => Array.from(row as ArrayLike<number>, Number));
  const width = rows[0].length;
  if (width === 0) {
    throw new ArgumentError("sample rows must have at least one feature");
  }
  for (const row of rows) {
    if (row.length !== width) {
      throw new ArgumentError(
        `inconsistent row lengths: expected ${width}, got ${row.length}`,
      );
    }
  }
  if (featureCount !== undefined && width !== featureCount) {
    throw new ArgumentError(
      `this model expects ${featureCount} features, got ${width}`,
    );
  }
  return rows;
}

/** Serialize samples (optionally labeled) as the CSV the CLI reads.
 *  `String(number)` emits the shortest round-tripping decimal, which the
 *  CLI parses back to the identical double. */
export function toCsv(rows: number[][], y?: Labels): string {
  const lines = rows.map((row, i) => {
    const features = row.map((v) => String(v)).join(",");
    return y === undefined ? features : `${String(y[i])},${features}`;
  });
  return lines.join("\n") + "\n";
}

interface KernelPayload {
  kind: string;
  gamma?: number;
  rect_fraction?: number;
}

interface BinaryPayload {
  algorithm: string;
  kernel: KernelPayload;
  w1: number[];
  b1: number;
  w2: number[];
  b2: number;
  norm1: number;
  norm2: number;
  reference: number[][] | null;
}

export interface ModelDocument {
  magic: string;
  format_version: number;
  kind: "binary" | "ovo" | "ova";
  class_map: Label[];
  model: BinaryPayload & {
    k?: number;
    models?: ({ i: number; j: number; model: BinaryPayload } | BinaryPayload)[];
  };
  scaler?: { minimum: number[]; maximum: number[] };
}

function firstBinaryPayload(doc: ModelDocument): BinaryPayload {
  if (doc.kind === "binary") {
    return doc.model;
  }
  const entry = doc.model.models![0];
  return "model" in entry ? entry.model : entry;
}

/** A fitted model held as the exact bytes the CLI wrote. */
export class ModelHandle {
  readonly doc: ModelDocument;
  private readonly labelByText: Map<string, Label>;

  constructor(readonly modelJson: string) {
    let doc: unknown;
    try {
      doc = JSON.parse(modelJson);
    } catch (err) {
      throw new FormatError(`not a valid model document: ${err}`);
    }
    if (
      typeof doc !== "object" ||
      doc === null ||
      (doc as ModelDocument).magic !== "TWSVM"
    ) {
      throw new FormatError("not a model file: expected magic 'TWSVM'");
    }
    this.doc = doc as ModelDocument;
    this.labelByText = new Map(
      this.doc.class_map.map((label) => [String(label), label]),
    );
  }

  get kind(): string {
    return this.doc.kind;
  }

  get classMap(): Label[] {
    return [...this.doc.class_map];
  }

  get featureCount(): number {
    const payload = firstBinaryPayload(this.doc);
    return payload.reference !== null
      ? payload.reference[0].length
      : payload.w1.length;
  }

  /** Label predictions, computed by the CLI on the handle's saved bytes. */
  predict(X: Matrix): Label[] {
    const rows = toRows(X, this.featureCount);
    return withTempDir((dir) => {
      const modelPath = join(dir, "model.json");
      const inputPath = join(dir, "input.csv");
      const outPath = join(dir, "labels.txt");
      writeFileSync(modelPath, this.modelJson);
      writeFileSync(inputPath, toCsv(rows));
      runCli([
        "predict",
        "--model", modelPath,
        "--input", inputPath,
        "--out", outPath,
      ]);
      const lines = readFileSync(outPath, "utf8").trim().split("\n");
      return lines.map((line) => this.labelByText.get(line) ?? line);
    });
  }
}
