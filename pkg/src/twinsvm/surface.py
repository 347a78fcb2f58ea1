"""Decision-surface sampling over a 2-D mesh, exported as CSV grid files.

The grid is evaluated with the batch prediction path and written as
``x,y,d1,d2,label`` rows in row-major order with x varying fastest.  For
binary models d1/d2 are the normalized distances to the two planes; for
multiclass models (which have no single distance pair) both are 0 and the
label column carries the predicted class index.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .data import _format_value
from .errors import ParseError, ValidationError
from .estimators import BinaryModel, decide_batch, distances_batch
from .multiclass import OvaModel, OvoModel, predict_multiclass
from .persistence import SavedModel

CSV_HEADER = ("x", "y", "d1", "d2", "label")
DEFAULT_RESOLUTION = 200
_MARGIN = 0.10


@dataclass(frozen=True, eq=False)
class GridField:
    """Distances and predictions on a resolution × resolution mesh.

    The flat arrays follow the evaluation order: row-major with x fastest,
    i.e. entry ``iy * resolution + ix`` belongs to ``(xs[ix], ys[iy])``.
    """

    x_bounds: tuple
    y_bounds: tuple
    resolution: int
    d1: np.ndarray
    d2: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        x_bounds = (float(self.x_bounds[0]), float(self.x_bounds[1]))
        y_bounds = (float(self.y_bounds[0]), float(self.y_bounds[1]))
        if not (x_bounds[0] < x_bounds[1] and y_bounds[0] < y_bounds[1]):
            raise ValidationError("grid bounds require min < max on both axes")
        if self.resolution < 2:
            raise ValidationError("grid resolution must be at least 2")
        expected = self.resolution * self.resolution
        d1 = np.asarray(self.d1, dtype=np.float64)
        d2 = np.asarray(self.d2, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        for name, arr in (("d1", d1), ("d2", d2), ("labels", labels)):
            if arr.shape != (expected,):
                raise ValidationError(f"{name} must hold resolution^2 = {expected} values")
            arr.setflags(write=False)
        object.__setattr__(self, "x_bounds", x_bounds)
        object.__setattr__(self, "y_bounds", y_bounds)
        object.__setattr__(self, "d1", d1)
        object.__setattr__(self, "d2", d2)
        object.__setattr__(self, "labels", labels)

    def axis_values(self) -> tuple[np.ndarray, np.ndarray]:
        xs = np.linspace(self.x_bounds[0], self.x_bounds[1], self.resolution)
        ys = np.linspace(self.y_bounds[0], self.y_bounds[1], self.resolution)
        return xs, ys

    def __eq__(self, other) -> bool:
        if not isinstance(other, GridField):
            return NotImplemented
        return (self.x_bounds == other.x_bounds
                and self.y_bounds == other.y_bounds
                and self.resolution == other.resolution
                and np.array_equal(self.d1, other.d1)
                and np.array_equal(self.d2, other.d2)
                and np.array_equal(self.labels, other.labels))


def expand_bounds(rows) -> tuple[tuple[float, float], tuple[float, float]]:
    """Bounding box of 2-D rows, padded 10% of the span per side."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] != 2 or rows.shape[0] == 0:
        raise ValidationError("bounds require a nonempty matrix with 2 columns")
    bounds = []
    for axis in range(2):
        lo, hi = float(rows[:, axis].min()), float(rows[:, axis].max())
        pad = _MARGIN * (hi - lo) if hi > lo else 0.5
        bounds.append((lo - pad, hi + pad))
    return bounds[0], bounds[1]


def _evaluate(model, points: np.ndarray):
    """(d1, d2, labels) for any supported model on the mesh points."""
    if isinstance(model, SavedModel):
        inner = model.model
        if model.scaler is not None:
            points = model.scaler.transform(points)
        return _evaluate(inner, points)
    if isinstance(model, BinaryModel):
        d = distances_batch(model, points)
        return d[:, 0], d[:, 1], decide_batch(model, points)
    if isinstance(model, (OvoModel, OvaModel)):
        labels = predict_multiclass(model, points)
        zeros = np.zeros(points.shape[0])
        return zeros, zeros.copy(), labels
    raise ValidationError(f"unsupported model type {type(model).__name__}")


def _model_feature_count(model) -> int:
    if isinstance(model, SavedModel):
        return model.feature_count
    if isinstance(model, BinaryModel):
        return model.feature_count
    if isinstance(model, (OvoModel, OvaModel)):
        first = model.models[min(model.models)] if isinstance(model, OvoModel) \
            else model.models[0]
        return first.feature_count
    raise ValidationError(f"unsupported model type {type(model).__name__}")


def sample_grid(model, bounds, resolution: int = DEFAULT_RESOLUTION) -> GridField:
    """Evaluate the model on a mesh spanning ``bounds``.

    ``bounds`` is ``((x_min, x_max), (y_min, y_max))``; the model must have
    been trained on exactly 2 features.
    """
    if _model_feature_count(model) != 2:
        raise ValidationError("visualization requires 2 features")
    x_bounds, y_bounds = bounds
    if not (x_bounds[0] < x_bounds[1] and y_bounds[0] < y_bounds[1]):
        raise ValidationError("grid bounds require min < max on both axes")
    if resolution < 2:
        raise ValidationError("grid resolution must be at least 2")
    xs = np.linspace(x_bounds[0], x_bounds[1], resolution)
    ys = np.linspace(y_bounds[0], y_bounds[1], resolution)
    mesh_x, mesh_y = np.meshgrid(xs, ys)  # row-major, x fastest when raveled
    points = np.column_stack([mesh_x.ravel(), mesh_y.ravel()])
    d1, d2, labels = _evaluate(model, points)
    return GridField(x_bounds, y_bounds, resolution, d1, d2, labels)


def write_grid(field: GridField, path) -> None:
    """Write the grid as ``x,y,d1,d2,label`` CSV rows."""
    xs, ys = field.axis_values()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(CSV_HEADER) + "\n")
        i = 0
        for iy in range(field.resolution):
            for ix in range(field.resolution):
                fh.write(
                    f"{_format_value(xs[ix])},{_format_value(ys[iy])},"
                    f"{_format_value(field.d1[i])},{_format_value(field.d2[i])},"
                    f"{field.labels[i]}\n"
                )
                i += 1


def read_grid(path) -> GridField:
    """Parse a grid file back into the identical GridField."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ParseError(f"grid file must start with header {','.join(CSV_HEADER)}")
    body = rows[1:]
    count = len(body)
    resolution = int(round(np.sqrt(count)))
    if resolution < 2 or resolution * resolution != count:
        raise ParseError(f"grid row count {count} is not a square of resolution >= 2")
    try:
        xs = [float(row[0]) for row in body]
        ys = [float(row[1]) for row in body]
        d1 = np.asarray([float(row[2]) for row in body])
        d2 = np.asarray([float(row[3]) for row in body])
        labels = np.asarray([int(row[4]) for row in body], dtype=np.int64)
    except (ValueError, IndexError) as exc:
        raise ParseError(f"malformed grid row: {exc}") from exc
    x_bounds = (xs[0], xs[resolution - 1])
    y_bounds = (ys[0], ys[-1])
    return GridField(x_bounds, y_bounds, resolution, d1, d2, labels)
