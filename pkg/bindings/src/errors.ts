/** Error hierarchy mirroring the CLI's exit-code families. */

export class TwinSvmError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

/** Invalid hyperparameters, shapes, or flags (CLI usage errors). */
export class ArgumentError extends TwinSvmError {}

/** Unreadable or malformed input/model files. */
export class DataError extends TwinSvmError {}

/** A model file that is not in the expected format or version. */
export class FormatError extends DataError {}

/** Training or optimization failed to converge. */
export class NumericalError extends TwinSvmError {}

/** An operation that needs a fitted model was called before fit. */
export class StateError extends TwinSvmError {}
