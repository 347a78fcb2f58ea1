"""Cross-validated accuracy and exhaustive power-of-two grid search.

The search evaluates every (c1, c2[, gamma]) combination with k-fold
cross-validation on one shared fold plan, reports mean ± std accuracy per
combination (std over folds, population denominator), and selects the best
mean.  Ties and report order follow the fixed iteration order: c1 outer,
c2 middle, gamma inner.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np
from joblib import Parallel, delayed

from .data import Dataset, FoldPlan, kfold_split
from .errors import TwinSVMError, ValidationError
from .estimators import ALGORITHMS, BinaryProblem, HyperParams, decide_batch, fit_binary
from .kernels import KernelSpec
from .multiclass import STRATEGIES, fit_multiclass, predict_multiclass

BINARY = "binary"
MODES = (BINARY,) + STRATEGIES


def pow2_range(start: int, stop: int) -> tuple[float, ...]:
    """Inclusive powers of two: 2^start, ..., 2^stop."""
    if stop < start:
        raise ValidationError("pow2_range requires start <= stop")
    return tuple(2.0 ** i for i in range(start, stop + 1))


DEFAULT_C_GRID = pow2_range(-5, 5)
DEFAULT_GAMMA_GRID = pow2_range(-15, 2)


def accuracy(y_true, y_pred) -> float:
    """Percentage of matching entries."""
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.ndim != 1 or y_true.shape != y_pred.shape:
        raise ValidationError(
            f"label vectors must be 1-D with equal length, got shapes "
            f"{y_true.shape} and {y_pred.shape}"
        )
    if y_true.size == 0:
        raise ValidationError("accuracy of empty label vectors is undefined")
    return 100.0 * float(np.mean(y_true == y_pred))


@dataclass(frozen=True)
class CvResult:
    """Per-fold accuracies with their mean and population std."""

    mean: float
    std: float
    fold_accuracies: tuple


def _fit_and_score(train: Dataset, test: Dataset, hp: HyperParams,
                   algorithm: str, mode: str, max_iterations: int | None) -> float:
    if mode == BINARY:
        problem = BinaryProblem(train.samples[train.labels == 0],
                                train.samples[train.labels == 1])
        model = fit_binary(problem, hp, algorithm, max_iterations=max_iterations)
        signs = decide_batch(model, test.samples)
        predicted = np.where(signs == 1, 0, 1)
    else:
        model = fit_multiclass(train, hp, algorithm, mode,
                               max_iterations=max_iterations)
        predicted = predict_multiclass(model, test.samples)
    return accuracy(test.labels, predicted)


def cross_validate(ds: Dataset, plan: FoldPlan, hp: HyperParams, algorithm: str,
                   mode: str = BINARY, max_iterations: int | None = None) -> CvResult:
    """k-fold accuracy for one hyperparameter combination.

    Every fold's training split must contain all classes; otherwise a
    validation error naming the fold is raised.
    """
    if plan.assignments.shape[0] != ds.sample_count:
        raise ValidationError("fold plan size does not match the dataset")
    if mode not in MODES:
        raise ValidationError(f"unknown evaluation mode {mode!r}; expected one of {MODES}")
    if mode == BINARY and ds.class_count != 2:
        raise ValidationError(
            f"binary cross-validation requires 2 classes, found {ds.class_count}"
        )

    scores = []
    for fold in range(plan.k):
        train_idx = plan.train_indices(fold)
        present = np.unique(ds.labels[train_idx])
        if present.size != ds.class_count:
            missing = next(i for i in range(ds.class_count) if i not in present)
            raise ValidationError(
                f"fold {fold}: class {ds.class_map[missing]!r} has no training samples"
            )
        train = ds.subset(train_idx)
        test = ds.subset(plan.test_indices(fold))
        scores.append(_fit_and_score(train, test, hp, algorithm, mode, max_iterations))

    fold_accuracies = tuple(scores)
    return CvResult(mean=float(np.mean(fold_accuracies)),
                    std=float(np.std(fold_accuracies)),
                    fold_accuracies=fold_accuracies)


@dataclass(frozen=True)
class GridSpec:
    """The Cartesian search space plus the evaluation protocol."""

    c1_values: tuple = DEFAULT_C_GRID
    c2_values: tuple = DEFAULT_C_GRID
    gamma_values: tuple = ()  # empty means linear kernel
    rect_fraction: float = 1.0
    algorithm: str = "tsvm"
    mode: str = BINARY
    k_folds: int = 5
    seed: int = 0
    epsilon: float = 1e-5

    def __post_init__(self) -> None:
        for name in ("c1_values", "c2_values", "gamma_values"):
            values = tuple(float(v) for v in getattr(self, name))
            if name != "gamma_values" and not values:
                raise ValidationError(f"{name} must not be empty")
            if any(not np.isfinite(v) or v <= 0 for v in values):
                raise ValidationError(f"{name} must contain positive finite numbers")
            object.__setattr__(self, name, values)
        if self.algorithm not in ALGORITHMS:
            raise ValidationError(f"unknown algorithm {self.algorithm!r}")
        if self.mode not in MODES:
            raise ValidationError(f"unknown evaluation mode {self.mode!r}")
        if self.k_folds < 2:
            raise ValidationError("k_folds must be at least 2")

    def combinations(self) -> list:
        """(c1, c2, gamma) tuples in search order; gamma None means linear."""
        gammas = self.gamma_values if self.gamma_values else (None,)
        return [(c1, c2, g) for c1 in self.c1_values
                for c2 in self.c2_values for g in gammas]

    def kernel_for(self, gamma: float | None) -> KernelSpec:
        if gamma is None:
            return KernelSpec()
        return KernelSpec("rbf", gamma=gamma, rect_fraction=self.rect_fraction)


@dataclass(frozen=True)
class GridRecord:
    """One evaluated combination."""

    c1: float
    c2: float
    gamma: float | None
    mean: float
    std: float
    fold_accuracies: tuple


@dataclass(frozen=True)
class FailedCombination:
    """A combination whose evaluation raised, with the reason."""

    c1: float
    c2: float
    gamma: float | None
    reason: str


@dataclass(frozen=True)
class SearchReport:
    """All grid results in search order plus the winning record."""

    records: tuple
    failures: tuple
    best: GridRecord | None
    wall_time: float

    def to_dict(self) -> dict:
        """Report content without the wall time, so identical searches
        serialize to identical bytes."""
        return {
            "records": [asdict(r) for r in self.records],
            "failures": [asdict(f) for f in self.failures],
            "best": asdict(self.best) if self.best is not None else None,
        }


def _evaluate_combination(ds: Dataset, plan: FoldPlan, gs: GridSpec, combo,
                          max_iterations: int | None):
    c1, c2, gamma = combo
    try:
        hp = HyperParams(c1=c1, c2=c2, kernel=gs.kernel_for(gamma), epsilon=gs.epsilon)
        result = cross_validate(ds, plan, hp, gs.algorithm, gs.mode, max_iterations)
    except TwinSVMError as exc:
        return FailedCombination(c1=c1, c2=c2, gamma=gamma, reason=str(exc))
    return GridRecord(c1=c1, c2=c2, gamma=gamma, mean=result.mean,
                      std=result.std, fold_accuracies=result.fold_accuracies)


def grid_search(ds: Dataset, gs: GridSpec, n_jobs: int = 1,
                max_iterations: int | None = None) -> SearchReport:
    """Evaluate the full grid on one shared fold plan.

    Failures are recorded per combination instead of aborting the search.
    The best record maximizes mean accuracy; equal means keep the earlier
    combination in search order.
    """
    start = time.perf_counter()
    plan = kfold_split(ds.sample_count, gs.k_folds, gs.seed)
    combos = gs.combinations()
    outcomes = Parallel(n_jobs=n_jobs)(
        delayed(_evaluate_combination)(ds, plan, gs, combo, max_iterations)
        for combo in combos
    )
    records = tuple(o for o in outcomes if isinstance(o, GridRecord))
    failures = tuple(o for o in outcomes if isinstance(o, FailedCombination))
    best = None
    for record in records:
        if best is None or record.mean > best.mean:
            best = record
    return SearchReport(records=records, failures=failures, best=best,
                        wall_time=time.perf_counter() - start)
