/** Meta-estimators that lift a binary classifier to k classes. */

import { Label, Labels, Matrix, ModelHandle, toRows } from "./core.js";
import { ArgumentError, StateError } from "./errors.js";
import { BinaryEstimator, LSTSVM, TSVM, trainModel } from "./estimators.js";

type Strategy = "ovo" | "ova";

abstract class MetaClassifier {
  abstract readonly strategy: Strategy;

  private handle: ModelHandle | null = null;

  constructor(readonly base: BinaryEstimator) {
    if (!(base instanceof TSVM) && !(base instanceof LSTSVM)) {
      throw new ArgumentError("base must be a TSVM or LSTSVM estimator");
    }
  }

  get fitted(): boolean {
    return this.handle !== null;
  }

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
    this.handle = trainModel(rows, y, this.base.trainArgs(this.strategy));
    return this;
  }

  predict(X: Matrix): Label[] {
    return this.model.predict(X);
  }
}

/** Trains one binary model per class pair and predicts by majority vote. */
export class OneVsOneClassifier extends MetaClassifier {
  readonly strategy = "ovo";
}

/** Trains one class-versus-rest model per class and predicts by the
 *  nearest own-class plane. */
export class OneVsAllClassifier extends MetaClassifier {
  readonly strategy = "ova";
}
