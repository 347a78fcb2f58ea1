"""Binary twin-hyperplane classifiers: TSVM (dual QP) and LSTSVM (closed form).

Both algorithms fit a pair of nonparallel hyperplanes, one anchored to each
class, and classify by normalized perpendicular distance.  ``tsvm_fit``
solves the two box-constrained duals with the clipped coordinate-descent
solver; ``lstsvm_fit`` solves two regularized least-squares systems.

The module also provides scikit-learn style wrappers (:class:`TSVM`,
:class:`LSTSVM`) around the functional core.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from sklearn.base import BaseEstimator, ClassifierMixin

from . import clipdcd
from .data import Dataset, apply_scaler, fit_scaler
from .errors import FitError, NotFittedError, NumericalError, ValidationError
from .kernels import RBF, KernelSpec, gram, select_reference
from .validation import as_matrix, as_vector

TSVM_ALGORITHM = "tsvm"
LSTSVM_ALGORITHM = "lstsvm"
ALGORITHMS = (TSVM_ALGORITHM, LSTSVM_ALGORITHM)

DEFAULT_EPSILON = 1e-5
DEFAULT_GAMMA = 2.0 ** -7
_NORM_FLOOR = 1e-12


@dataclass(frozen=True)
class BinaryProblem:
    """Training data split by class: A holds the +1 rows, B the −1 rows."""

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self) -> None:
        A = as_matrix(self.A, "A")
        B = as_matrix(self.B, "B")
        if A.shape[1] != B.shape[1]:
            raise ValidationError(
                f"A and B must share a feature count, got {A.shape[1]} and {B.shape[1]}"
            )
        A.setflags(write=False)
        B.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def feature_count(self) -> int:
        return self.A.shape[1]


@dataclass(frozen=True)
class HyperParams:
    """Penalties, kernel, and the ridge term used in every matrix inversion."""

    c1: float = 1.0
    c2: float = 1.0
    kernel: KernelSpec = KernelSpec()
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self) -> None:
        for name in ("c1", "c2", "epsilon"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be a positive finite number")


@dataclass(frozen=True)
class BinaryModel:
    """Two fitted hyperplanes plus the kernel data needed to evaluate them.

    For linear models the weight vectors live in input space and
    ``reference`` is None; for kernel models they live in the coordinates of
    the kernel reference rows.  ``norm1``/``norm2`` are the Euclidean norms
    of the weight vectors, floored at 1e-12 so distances are always defined.
    """

    algorithm: str
    w1: np.ndarray
    b1: float
    w2: np.ndarray
    b2: float
    kernel: KernelSpec
    reference: np.ndarray | None
    norm1: float
    norm2: float

    def __post_init__(self) -> None:
        for name in ("w1", "w2"):
            w = np.asarray(getattr(self, name), dtype=np.float64)
            w.setflags(write=False)
            object.__setattr__(self, name, w)
        if self.reference is not None:
            ref = np.asarray(self.reference, dtype=np.float64)
            ref.setflags(write=False)
            object.__setattr__(self, "reference", ref)

    @property
    def feature_count(self) -> int:
        if self.reference is not None:
            return self.reference.shape[1]
        return self.w1.shape[0]


def _reference_rows(problem: BinaryProblem, spec: KernelSpec, seed: int) -> np.ndarray | None:
    """Kernel reference set: all of [A; B], or a sampled subset."""
    if spec.is_linear:
        return None
    rows = np.vstack([problem.A, problem.B])
    return select_reference(rows, spec.rect_fraction, seed)


def _augmented(problem: BinaryProblem, spec: KernelSpec,
               reference: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
    """H = [phi(A) | 1] and G = [phi(B) | 1]."""
    if reference is None:
        phi_a, phi_b = problem.A, problem.B
    else:
        phi_a = gram(spec, problem.A, reference)
        phi_b = gram(spec, problem.B, reference)
    ones_a = np.ones((phi_a.shape[0], 1))
    ones_b = np.ones((phi_b.shape[0], 1))
    return np.hstack([phi_a, ones_a]), np.hstack([phi_b, ones_b])


def _regularized_factor(M: np.ndarray, epsilon: float):
    """Cholesky factor of M'M-style normal matrix plus epsilon on the diagonal."""
    A = M.copy()
    A[np.diag_indices_from(A)] += epsilon
    try:
        return cho_factor(A, lower=True, overwrite_a=True, check_finite=False)
    except LinAlgError as exc:
        raise NumericalError(
            "normal-equation matrix is not positive definite even after "
            f"adding epsilon={epsilon}: {exc}"
        ) from exc


def _finite_or_raise(z: np.ndarray, which: str) -> None:
    if not np.isfinite(z).all():
        raise NumericalError(f"non-finite coefficients while solving for {which}")


def _build_model(algorithm: str, z1: np.ndarray, z2: np.ndarray,
                 spec: KernelSpec, reference: np.ndarray | None) -> BinaryModel:
    _finite_or_raise(z1, "plane 1")
    _finite_or_raise(z2, "plane 2")
    w1, b1 = z1[:-1], float(z1[-1])
    w2, b2 = z2[:-1], float(z2[-1])
    return BinaryModel(
        algorithm=algorithm,
        w1=w1, b1=b1, w2=w2, b2=b2,
        kernel=spec, reference=reference,
        norm1=max(float(np.linalg.norm(w1)), _NORM_FLOOR),
        norm2=max(float(np.linalg.norm(w2)), _NORM_FLOOR),
    )


_DUAL_BLOCK_BYTES = 64 * 2**20


def _factored_quadratic(factor, M: np.ndarray) -> np.ndarray:
    """Q = M (F'F)^{-1} M' using the precomputed factor, built in column
    blocks so no intermediate exceeds the size of Q itself."""
    n, m = M.shape
    Q = np.empty((n, n))
    block = max(1, _DUAL_BLOCK_BYTES // (8 * max(1, m)))
    for start in range(0, n, block):
        chunk = cho_solve(factor, M[start:start + block].T, check_finite=False)
        Q[:, start:start + block] = M @ chunk
    return Q


def _solve_dual(Q: np.ndarray, c: float, tolerance: float,
                max_iterations: int | None, which: str) -> np.ndarray:
    # averaging with the transpose removes the tiny asymmetry left by the
    # factored solves, keeping the solver's cached gradient exact
    Q = Q + Q.T
    Q *= 0.5
    if max_iterations is None:
        max_iterations = max(clipdcd.DEFAULT_MAX_ITERATIONS, 10 * Q.shape[0])
    solution = clipdcd.solve(clipdcd.DualProblem(Q, c, tolerance=tolerance,
                                                 max_iterations=max_iterations))
    if not solution.converged:
        raise FitError(
            f"dual {which} did not converge within {max_iterations} iterations "
            f"(optimality residual {solution.kkt:.3e}); raise the iteration "
            f"budget or epsilon, which conditions this problem"
        )
    return solution.alpha


def tsvm_fit(problem: BinaryProblem, hp: HyperParams, *,
             tolerance: float = clipdcd.DEFAULT_TOLERANCE,
             max_iterations: int | None = None,
             seed: int = 0) -> BinaryModel:
    """Fit twin hyperplanes by solving the two box-constrained duals.

    Each dual needs the inverse of one normal matrix; the Cholesky factor is
    computed once and applied to right-hand sides, serving both the dual
    matrix construction and the plane recovery.
    """
    reference = _reference_rows(problem, hp.kernel, seed)
    H, G = _augmented(problem, hp.kernel, reference)

    # plane 1: anchored to A, pushed away from B
    factor_h = _regularized_factor(H.T @ H, hp.epsilon)
    alpha = _solve_dual(_factored_quadratic(factor_h, G), hp.c1,
                        tolerance, max_iterations, "1")
    z1 = -cho_solve(factor_h, G.T @ alpha, check_finite=False)

    # plane 2: anchored to B, pushed away from A
    factor_g = _regularized_factor(G.T @ G, hp.epsilon)
    gamma = _solve_dual(_factored_quadratic(factor_g, H), hp.c2,
                        tolerance, max_iterations, "2")
    z2 = cho_solve(factor_g, H.T @ gamma, check_finite=False)

    return _build_model(TSVM_ALGORITHM, z1, z2, hp.kernel, reference)


def lstsvm_fit(problem: BinaryProblem, hp: HyperParams, *,
               seed: int = 0) -> BinaryModel:
    """Fit twin hyperplanes in closed form via two regularized linear solves."""
    reference = _reference_rows(problem, hp.kernel, seed)
    H, G = _augmented(problem, hp.kernel, reference)
    HtH = H.T @ H
    GtG = G.T @ G

    factor1 = _regularized_factor(GtG + HtH / hp.c1, hp.epsilon)
    z1 = -cho_solve(factor1, G.T @ np.ones(G.shape[0]), check_finite=False)

    factor2 = _regularized_factor(HtH + GtG / hp.c2, hp.epsilon)
    z2 = cho_solve(factor2, H.T @ np.ones(H.shape[0]), check_finite=False)

    return _build_model(LSTSVM_ALGORITHM, z1, z2, hp.kernel, reference)


def fit_binary(problem: BinaryProblem, hp: HyperParams, algorithm: str, *,
               tolerance: float = clipdcd.DEFAULT_TOLERANCE,
               max_iterations: int | None = None,
               seed: int = 0) -> BinaryModel:
    """Dispatch to :func:`tsvm_fit` or :func:`lstsvm_fit` by name."""
    if algorithm == TSVM_ALGORITHM:
        return tsvm_fit(problem, hp, tolerance=tolerance,
                        max_iterations=max_iterations, seed=seed)
    if algorithm == LSTSVM_ALGORITHM:
        return lstsvm_fit(problem, hp, seed=seed)
    raise ValidationError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def distances_batch(model: BinaryModel, X) -> np.ndarray:
    """Normalized perpendicular distances to both planes, shape (n, 2)."""
    X = as_matrix(X, "X", allow_empty=True)
    if X.shape[0] and X.shape[1] != model.feature_count:
        raise ValidationError(
            f"model expects {model.feature_count} features, got {X.shape[1]}"
        )
    if model.reference is None:
        phi = X
    else:
        phi = gram(model.kernel, X, model.reference)
    d1 = np.abs(phi @ model.w1 + model.b1) / model.norm1
    d2 = np.abs(phi @ model.w2 + model.b2) / model.norm2
    return np.column_stack([d1, d2])


def decide_batch(model: BinaryModel, X) -> np.ndarray:
    """Labels in {+1, −1} for each row; a sample on both planes gets +1."""
    d = distances_batch(model, X)
    return np.where(d[:, 0] <= d[:, 1], 1, -1).astype(np.int64)


def decide(model: BinaryModel, x) -> tuple[int, tuple[float, float]]:
    """Classify one sample; returns the label and both plane distances."""
    x = as_vector(x, "x")
    d = distances_batch(model, x[None, :])[0]
    label = 1 if d[0] <= d[1] else -1
    return label, (float(d[0]), float(d[1]))


class _TwinBase(BaseEstimator, ClassifierMixin):
    """Shared scikit-learn plumbing for the two twin-hyperplane classifiers.

    ``classes_`` lists the label values in order of first appearance in
    ``y``; the first class plays the +1 role internally, so distance ties
    resolve to it.
    """

    _algorithm: str = ""

    def _kernel_spec(self) -> KernelSpec:
        if self.kernel == RBF:
            return KernelSpec(RBF, gamma=self.gamma, rect_fraction=self.rect_fraction)
        return KernelSpec(self.kernel)

    def _hyperparams(self) -> HyperParams:
        return HyperParams(c1=self.c1, c2=self.c2, kernel=self._kernel_spec(),
                           epsilon=self.epsilon)

    def _fit_kwargs(self) -> dict:
        return {}

    def fit(self, X, y):
        ds = Dataset.from_arrays(X, np.asarray(y))
        if ds.class_count != 2:
            raise ValidationError(
                f"binary classifier requires exactly 2 classes, found {ds.class_count}"
            )
        if self.scale:
            self.scaler_ = fit_scaler(ds)
            ds = apply_scaler(ds, self.scaler_)
        else:
            self.scaler_ = None
        problem = BinaryProblem(ds.samples[ds.labels == 0], ds.samples[ds.labels == 1])
        self.model_ = fit_binary(problem, self._hyperparams(), self._algorithm,
                                 seed=self.seed, **self._fit_kwargs())
        self.classes_ = np.asarray(ds.class_map)
        self.n_features_in_ = ds.feature_count
        return self

    def _check_fitted(self) -> None:
        if getattr(self, "model_", None) is None:
            raise NotFittedError(
                f"this {type(self).__name__} instance is not fitted yet; call fit first"
            )

    def _prepare(self, X) -> np.ndarray:
        self._check_fitted()
        X = as_matrix(X, "X", allow_empty=True)
        if self.scaler_ is not None:
            X = self.scaler_.transform(X)
        return X

    def predict(self, X) -> np.ndarray:
        X = self._prepare(X)
        signs = decide_batch(self.model_, X)
        return self.classes_[np.where(signs == 1, 0, 1)]

    def plane_distances(self, X) -> np.ndarray:
        """Normalized distances to the two fitted planes, shape (n, 2)."""
        X = self._prepare(X)
        return distances_batch(self.model_, X)


class TSVM(_TwinBase):
    """Twin support vector machine trained through its two dual problems."""

    _algorithm = TSVM_ALGORITHM

    def __init__(self, c1: float = 1.0, c2: float = 1.0, kernel: str = "linear",
                 gamma: float = DEFAULT_GAMMA, rect_fraction: float = 1.0,
                 epsilon: float = DEFAULT_EPSILON, scale: bool = False,
                 tolerance: float = clipdcd.DEFAULT_TOLERANCE,
                 max_iterations: int | None = None, seed: int = 0):
        self.c1 = c1
        self.c2 = c2
        self.kernel = kernel
        self.gamma = gamma
        self.rect_fraction = rect_fraction
        self.epsilon = epsilon
        self.scale = scale
        self.tolerance = tolerance
        self.max_iterations = max_iterations
        self.seed = seed

    def _fit_kwargs(self) -> dict:
        return {"tolerance": self.tolerance, "max_iterations": self.max_iterations}


class LSTSVM(_TwinBase):
    """Least-squares twin support vector machine (closed-form training)."""

    _algorithm = LSTSVM_ALGORITHM

    def __init__(self, c1: float = 1.0, c2: float = 1.0, kernel: str = "linear",
                 gamma: float = DEFAULT_GAMMA, rect_fraction: float = 1.0,
                 epsilon: float = DEFAULT_EPSILON, scale: bool = False,
                 seed: int = 0):
        self.c1 = c1
        self.c2 = c2
        self.kernel = kernel
        self.gamma = gamma
        self.rect_fraction = rect_fraction
        self.epsilon = epsilon
        self.scale = scale
        self.seed = seed
