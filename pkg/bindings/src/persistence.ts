/** Save and load model files, byte-compatible with the CLI's format. */

import { readFileSync, writeFileSync } from "node:fs";

import { ModelHandle } from "./core.js";
import { DataError } from "./errors.js";

interface HasModel {
  readonly model: ModelHandle;
}

/** Write a fitted estimator (or a bare handle) to disk, preserving the
 *  exact bytes the trainer produced. */
export function save(target: ModelHandle | HasModel, path: string): void {
  const handle = target instanceof ModelHandle ? target : target.model;
  writeFileSync(path, handle.modelJson);
}

/** Read a model file written by this package or by the CLI. */
export function load(path: string): ModelHandle {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (err) {
    throw new DataError(`cannot read model file ${path}: ${err}`);
  }
  return new ModelHandle(text);
}
