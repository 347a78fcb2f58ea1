"""Kernel evaluation and Gram-matrix construction.

Supports the linear kernel and the RBF kernel
``k(x, y) = exp(-gamma * ||x - y||^2)``, plus selection of a reduced
reference set (the "rectangular kernel": only a random fraction of the
training rows serve as kernel landmarks).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .validation import as_matrix

LINEAR = "linear"
RBF = "rbf"

# Rows per Gram block, sized to keep the working set around tens of MB so
# large batches never materialize giant squared-distance temporaries.
_BLOCK_BYTES = 64 * 2**20


@dataclass(frozen=True)
class KernelSpec:
    """Kernel kind plus its parameters.

    ``rect_fraction`` is the fraction of training rows used as the kernel
    reference set; 1.0 means the full set.
    """

    kind: str = LINEAR
    gamma: float | None = None
    rect_fraction: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in (LINEAR, RBF):
            raise ValidationError(f"unknown kernel kind {self.kind!r}")
        if self.kind == RBF:
            if self.gamma is None or not np.isfinite(self.gamma) or self.gamma <= 0:
                raise ValidationError("RBF kernel requires gamma > 0")
        if not 0.0 < self.rect_fraction <= 1.0:
            raise ValidationError("rect_fraction must be in (0, 1]")

    @property
    def is_linear(self) -> bool:
        return self.kind == LINEAR


def eval_kernel(spec: KernelSpec, x, y) -> float:
    """Evaluate the kernel between two single vectors."""
    xv = np.asarray(x, dtype=np.float64)
    yv = np.asarray(y, dtype=np.float64)
    if xv.shape != yv.shape or xv.ndim != 1:
        raise ValidationError(
            f"kernel inputs must be 1-D vectors of equal length, got {xv.shape} and {yv.shape}"
        )
    if spec.is_linear:
        return float(np.dot(xv, yv))
    diff = xv - yv
    return float(np.exp(-spec.gamma * np.dot(diff, diff)))


def gram(spec: KernelSpec, rows_x, reference) -> np.ndarray:
    """Gram matrix K with K[i, j] = k(rows_x[i], reference[j]).

    Computed in row blocks so the squared-distance workspace stays bounded
    regardless of the batch size.
    """
    X = as_matrix(rows_x, "rows_x", allow_empty=True)
    C = as_matrix(reference, "reference")
    if X.shape[1] != C.shape[1] and X.shape[0] > 0:
        raise ValidationError(
            f"feature dimension mismatch: rows_x has {X.shape[1]}, reference has {C.shape[1]}"
        )
    if X.shape[0] == 0:
        return np.zeros((0, C.shape[0]))
    if spec.is_linear:
        return X @ C.T

    out = np.empty((X.shape[0], C.shape[0]))
    c_sq = np.einsum("ij,ij->i", C, C)
    block = max(1, _BLOCK_BYTES // (8 * max(1, C.shape[0])))
    for start in range(0, X.shape[0], block):
        xb = X[start : start + block]
        sq = np.einsum("ij,ij->i", xb, xb)[:, None] + c_sq[None, :] - 2.0 * (xb @ C.T)
        # rounding can push true zeros slightly negative, which would put
        # exp() above 1 and break the (0, 1] range of the RBF kernel
        np.maximum(sq, 0.0, out=sq)
        np.exp(-spec.gamma * sq, out=sq)
        out[start : start + block] = sq
    return out


def select_reference(ds_rows, fraction: float, seed: int) -> np.ndarray:
    """Sample a reference subset of rows, uniformly without replacement.

    Returns ``max(1, round(fraction * n))`` rows in ascending original
    order; ``fraction == 1`` returns all rows unchanged.
    """
    rows = as_matrix(ds_rows, "ds_rows")
    if not 0.0 < fraction <= 1.0:
        raise ValidationError("fraction must be in (0, 1]")
    n = rows.shape[0]
    if fraction == 1.0:
        return rows
    p = max(1, int(np.floor(fraction * n + 0.5)))
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(n, size=p, replace=False))
    return rows[idx]
