"""One-vs-One and One-vs-All meta-estimators over the binary classifiers.

OVO fits one binary model per unordered class pair (the lower class index
plays +1) and predicts by majority vote.  OVA fits one model per class
(that class as +1, the rest as −1) and predicts the class whose own
hyperplane lies closest.  Both tie-break toward the smallest class index.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .data import Dataset, apply_scaler, fit_scaler
from .errors import ValidationError
from .estimators import (
    BinaryModel,
    BinaryProblem,
    HyperParams,
    _TwinBase,
    decide_batch,
    distances_batch,
    fit_binary,
)

OVO = "ovo"
OVA = "ova"
STRATEGIES = (OVO, OVA)


@dataclass(frozen=True)
class OvoModel:
    """k(k−1)/2 pairwise binary models; in pair (i, j), i < j, class i is +1."""

    k: int
    models: dict
    class_map: tuple

    def __post_init__(self) -> None:
        expected = {(i, j) for i, j in combinations(range(self.k), 2)}
        if set(self.models) != expected:
            raise ValidationError(
                f"OVO model requires exactly one model per class pair, "
                f"expected {len(expected)}, got {len(self.models)}"
            )


@dataclass(frozen=True)
class OvaModel:
    """k one-vs-rest binary models; model i was fitted with class i as +1."""

    k: int
    models: tuple
    class_map: tuple

    def __post_init__(self) -> None:
        if len(self.models) != self.k:
            raise ValidationError(
                f"OVA model requires one model per class, "
                f"expected {self.k}, got {len(self.models)}"
            )


def _check_multiclass(ds: Dataset) -> None:
    if ds.class_count < 2:
        raise ValidationError("multiclass fitting requires at least 2 classes")
    counts = np.bincount(ds.labels, minlength=ds.class_count)
    missing = np.flatnonzero(counts == 0)
    if missing.size:
        raise ValidationError(f"class index {missing[0]} has no samples")


def _annotated_fit(problem: BinaryProblem, hp: HyperParams, algorithm: str,
                   context: str, **kwargs) -> BinaryModel:
    try:
        return fit_binary(problem, hp, algorithm, **kwargs)
    except (ValidationError, ArithmeticError, RuntimeError, ValueError) as exc:
        raise type(exc)(f"{context}: {exc}") from exc


def ovo_fit(ds: Dataset, hp: HyperParams, algorithm: str, **fit_kwargs) -> OvoModel:
    """Fit one binary model per class pair on just that pair's rows."""
    _check_multiclass(ds)
    models = {}
    for i, j in combinations(range(ds.class_count), 2):
        rows_i = ds.samples[ds.labels == i]
        rows_j = ds.samples[ds.labels == j]
        problem = BinaryProblem(rows_i, rows_j)
        context = f"class pair ({ds.class_map[i]!r}, {ds.class_map[j]!r})"
        models[(i, j)] = _annotated_fit(problem, hp, algorithm, context, **fit_kwargs)
    return OvoModel(ds.class_count, models, ds.class_map)


def ovo_predict_batch(model: OvoModel, X) -> np.ndarray:
    """Class indices by pairwise majority vote; ties go to the smaller index."""
    votes = None
    for (i, j), binary in sorted(model.models.items()):
        signs = decide_batch(binary, X)
        if votes is None:
            votes = np.zeros((signs.shape[0], model.k), dtype=np.int64)
        winners = np.where(signs == 1, i, j)
        np.add.at(votes, (np.arange(winners.shape[0]), winners), 1)
    if votes is None:  # k is always >= 2, so there is at least one model
        raise ValidationError("OVO model has no pairwise models")
    return np.argmax(votes, axis=1)


def ovo_predict(model: OvoModel, x) -> int:
    """Class index for a single sample."""
    x = np.asarray(x, dtype=np.float64)
    return int(ovo_predict_batch(model, x[None, :])[0])


def ova_fit(ds: Dataset, hp: HyperParams, algorithm: str, **fit_kwargs) -> OvaModel:
    """Fit one binary model per class: that class as +1, the rest as −1."""
    _check_multiclass(ds)
    models = []
    for i in range(ds.class_count):
        problem = BinaryProblem(ds.samples[ds.labels == i],
                                ds.samples[ds.labels != i])
        context = f"class {ds.class_map[i]!r} vs rest"
        models.append(_annotated_fit(problem, hp, algorithm, context, **fit_kwargs))
    return OvaModel(ds.class_count, tuple(models), ds.class_map)


def ova_predict_batch(model: OvaModel, X) -> np.ndarray:
    """Class indices by nearest own-class hyperplane; ties go to the smaller index."""
    distances = np.column_stack(
        [distances_batch(binary, X)[:, 0] for binary in model.models]
    )
    return np.argmin(distances, axis=1)


def ova_predict(model: OvaModel, x) -> int:
    """Class index for a single sample."""
    x = np.asarray(x, dtype=np.float64)
    return int(ova_predict_batch(model, x[None, :])[0])


def fit_multiclass(ds: Dataset, hp: HyperParams, algorithm: str, strategy: str,
                   **fit_kwargs):
    """Dispatch to :func:`ovo_fit` or :func:`ova_fit` by strategy name."""
    if strategy == OVO:
        return ovo_fit(ds, hp, algorithm, **fit_kwargs)
    if strategy == OVA:
        return ova_fit(ds, hp, algorithm, **fit_kwargs)
    raise ValidationError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def predict_multiclass(model, X) -> np.ndarray:
    """Batch class indices for either meta-model type."""
    if isinstance(model, OvoModel):
        return ovo_predict_batch(model, X)
    if isinstance(model, OvaModel):
        return ova_predict_batch(model, X)
    raise ValidationError(f"unsupported model type {type(model).__name__}")


class MulticlassTwin(_TwinBase):
    """scikit-learn wrapper fitting OVO or OVA over TSVM or LSTSVM.

    Also accepts binary targets, where it reduces to the underlying binary
    classifier with the first-seen label playing the +1 role.
    """

    def __init__(self, algorithm: str = "tsvm", strategy: str = OVO,
                 c1: float = 1.0, c2: float = 1.0, kernel: str = "linear",
                 gamma: float = 2.0 ** -7, rect_fraction: float = 1.0,
                 epsilon: float = 1e-5, scale: bool = False,
                 max_iterations: int | None = None, seed: int = 0):
        self.algorithm = algorithm
        self.strategy = strategy
        self.c1 = c1
        self.c2 = c2
        self.kernel = kernel
        self.gamma = gamma
        self.rect_fraction = rect_fraction
        self.epsilon = epsilon
        self.scale = scale
        self.max_iterations = max_iterations
        self.seed = seed

    def fit(self, X, y):
        ds = Dataset.from_arrays(X, np.asarray(y))
        if self.scale:
            self.scaler_ = fit_scaler(ds)
            ds = apply_scaler(ds, self.scaler_)
        else:
            self.scaler_ = None
        self.model_ = fit_multiclass(ds, self._hyperparams(), self.algorithm,
                                     self.strategy, seed=self.seed,
                                     max_iterations=self.max_iterations)
        self.classes_ = np.asarray(ds.class_map)
        self.n_features_in_ = ds.feature_count
        return self

    def predict(self, X) -> np.ndarray:
        indices = predict_multiclass(self.model_, self._prepare(X))
        return self.classes_[indices]

    def plane_distances(self, X) -> np.ndarray:
        raise ValidationError("plane distances are only defined for binary models")
