export {
  getCliCommand,
  ModelHandle,
  setCliCommand,
  type Label,
  type Labels,
  type Matrix,
  type ModelDocument,
} from "./core.js";
export {
  ArgumentError,
  DataError,
  FormatError,
  NumericalError,
  StateError,
  TwinSvmError,
} from "./errors.js";
export {
  DEFAULT_EPSILON,
  DEFAULT_GAMMA,
  LSTSVM,
  TSVM,
  type BinaryEstimator,
  type EstimatorOptions,
  type KernelKind,
} from "./estimators.js";
export { OneVsAllClassifier, OneVsOneClassifier } from "./multiclass.js";
export * as clipdcd from "./clipdcd.js";
export { load, save } from "./persistence.js";
