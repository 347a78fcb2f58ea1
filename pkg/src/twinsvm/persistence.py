"""Model serialization: one JSON document per fitted model.

The file layout (magic, version, field names) is documented in
``docs/MODEL_FORMAT.md``.  Floats are written as shortest round-trip
decimals, so a load → predict cycle reproduces the original predictions
bit for bit.  Loading performs structural validation only; no behavior is
deserialized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .data import ScalerParams
from .errors import CorruptModelError, FormatError, ValidationError
from .estimators import ALGORITHMS, BinaryModel, decide_batch, distances_batch
from .kernels import KernelSpec
from .multiclass import OvaModel, OvoModel, predict_multiclass

MAGIC = "TWSVM"
FORMAT_VERSION = 1

_BINARY = "binary"
_OVO = "ovo"
_OVA = "ova"


@dataclass(frozen=True)
class SavedModel:
    """A loaded (or about-to-be-saved) model with its preprocessing context."""

    model: object
    class_map: tuple
    scaler: ScalerParams | None = None

    def predict(self, X) -> np.ndarray:
        """Original-label predictions, applying the bundled scaler if any."""
        X = np.asarray(X, dtype=np.float64)
        if self.scaler is not None:
            X = self.scaler.transform(X)
        if isinstance(self.model, BinaryModel):
            signs = decide_batch(self.model, X)
            indices = np.where(signs == 1, 0, 1)
        else:
            indices = predict_multiclass(self.model, X)
        return np.asarray([self.class_map[i] for i in indices])

    def plane_distances(self, X) -> np.ndarray:
        if not isinstance(self.model, BinaryModel):
            raise ValidationError("plane distances are only defined for binary models")
        X = np.asarray(X, dtype=np.float64)
        if self.scaler is not None:
            X = self.scaler.transform(X)
        return distances_batch(self.model, X)

    @property
    def feature_count(self) -> int:
        if isinstance(self.model, BinaryModel):
            return self.model.feature_count
        if isinstance(self.model, OvoModel):
            return self.model.models[min(self.model.models)].feature_count
        return self.model.models[0].feature_count


def _plain(value):
    return value.item() if isinstance(value, np.generic) else value


def _kernel_payload(spec: KernelSpec) -> dict:
    return {"kind": spec.kind, "gamma": spec.gamma, "rect_fraction": spec.rect_fraction}


def _binary_payload(model: BinaryModel) -> dict:
    return {
        "algorithm": model.algorithm,
        "kernel": _kernel_payload(model.kernel),
        "w1": model.w1.tolist(),
        "b1": model.b1,
        "w2": model.w2.tolist(),
        "b2": model.b2,
        "norm1": model.norm1,
        "norm2": model.norm2,
        "reference": None if model.reference is None else model.reference.tolist(),
    }


def _document(model, class_map) -> dict:
    doc = {"magic": MAGIC, "format_version": FORMAT_VERSION}
    if isinstance(model, BinaryModel):
        doc["kind"] = _BINARY
        doc["model"] = _binary_payload(model)
    elif isinstance(model, OvoModel):
        doc["kind"] = _OVO
        doc["model"] = {
            "k": model.k,
            "models": [
                {"i": i, "j": j, "model": _binary_payload(m)}
                for (i, j), m in sorted(model.models.items())
            ],
        }
        class_map = model.class_map
    elif isinstance(model, OvaModel):
        doc["kind"] = _OVA
        doc["model"] = {
            "k": model.k,
            "models": [_binary_payload(m) for m in model.models],
        }
        class_map = model.class_map
    else:
        raise ValidationError(f"cannot serialize model of type {type(model).__name__}")
    if class_map is None or len(class_map) < 2:
        raise ValidationError("a class map with at least 2 entries is required")
    if isinstance(model, BinaryModel) and len(class_map) != 2:
        raise ValidationError("binary models require exactly 2 class labels")
    doc["class_map"] = [_plain(v) for v in class_map]
    return doc


def save_model(model, path, *, class_map=None, scaler: ScalerParams | None = None) -> None:
    """Write a fitted model (binary, OVO, or OVA) as a JSON document.

    ``class_map`` maps prediction indices to original labels; binary models
    default to ``(1, -1)``, multiclass models carry their own.  A scaler, if
    given, is bundled so loaded models reproduce the preprocessing.
    """
    if isinstance(model, BinaryModel) and class_map is None:
        class_map = (1, -1)
    doc = _document(model, class_map)
    if scaler is not None:
        doc["scaler"] = {
            "minimum": scaler.minimum.tolist(),
            "maximum": scaler.maximum.tolist(),
        }
    else:
        doc["scaler"] = None
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, allow_nan=False, indent=1)
        fh.write("\n")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise CorruptModelError(message)


def _float_vector(payload, name: str) -> np.ndarray:
    _require(isinstance(payload, list), f"{name} must be an array")
    vec = np.asarray(payload, dtype=np.float64)
    _require(vec.ndim == 1 and np.isfinite(vec).all(), f"{name} must be finite numbers")
    return vec


def _load_binary(payload) -> BinaryModel:
    _require(isinstance(payload, dict), "binary model payload must be an object")
    algorithm = payload.get("algorithm")
    _require(algorithm in ALGORITHMS, f"unknown algorithm {algorithm!r}")
    kernel_payload = payload.get("kernel")
    _require(isinstance(kernel_payload, dict), "kernel must be an object")
    kernel = KernelSpec(
        kind=kernel_payload.get("kind"),
        gamma=kernel_payload.get("gamma"),
        rect_fraction=kernel_payload.get("rect_fraction", 1.0),
    )
    w1 = _float_vector(payload.get("w1"), "w1")
    w2 = _float_vector(payload.get("w2"), "w2")
    _require(w1.shape == w2.shape, "w1 and w2 must have equal length")
    reference = payload.get("reference")
    if kernel.is_linear:
        _require(reference is None, "linear models must not carry a reference")
    else:
        _require(isinstance(reference, list), "kernel models require reference rows")
        reference = np.asarray(reference, dtype=np.float64)
        _require(reference.ndim == 2 and np.isfinite(reference).all(),
                 "reference must be a finite matrix")
        _require(reference.shape[0] == w1.shape[0],
                 "weight length must match the reference row count")
    scalars = {}
    for name in ("b1", "b2", "norm1", "norm2"):
        value = payload.get(name)
        _require(isinstance(value, (int, float)) and np.isfinite(value),
                 f"{name} must be a finite number")
        scalars[name] = float(value)
    _require(scalars["norm1"] > 0 and scalars["norm2"] > 0, "norms must be positive")
    return BinaryModel(algorithm=algorithm, w1=w1, b1=scalars["b1"],
                       w2=w2, b2=scalars["b2"], kernel=kernel,
                       reference=reference, norm1=scalars["norm1"],
                       norm2=scalars["norm2"])


def load_model(path) -> SavedModel:
    """Read a model document back; inverse of :func:`save_model`."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CorruptModelError(f"not a valid JSON document: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("magic") != MAGIC:
        raise FormatError(f"not a model file: expected magic {MAGIC!r}")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version!r}")

    class_map = doc.get("class_map")
    _require(isinstance(class_map, list) and len(class_map) >= 2,
             "class_map must list at least 2 labels")
    class_map = tuple(class_map)

    scaler_payload = doc.get("scaler")
    scaler = None
    if scaler_payload is not None:
        _require(isinstance(scaler_payload, dict), "scaler must be an object")
        scaler = ScalerParams(_float_vector(scaler_payload.get("minimum"), "scaler minimum"),
                              _float_vector(scaler_payload.get("maximum"), "scaler maximum"))

    kind = doc.get("kind")
    payload = doc.get("model")
    try:
        if kind == _BINARY:
            _require(len(class_map) == 2, "binary models require exactly 2 classes")
            model = _load_binary(payload)
        elif kind in (_OVO, _OVA):
            _require(isinstance(payload, dict), "model payload must be an object")
            k = payload.get("k")
            _require(isinstance(k, int) and k == len(class_map),
                     "k must match the class_map length")
            entries = payload.get("models")
            _require(isinstance(entries, list), "models must be an array")
            if kind == _OVO:
                models = {}
                for entry in entries:
                    _require(isinstance(entry, dict), "each OVO entry must be an object")
                    i, j = entry.get("i"), entry.get("j")
                    _require(isinstance(i, int) and isinstance(j, int) and 0 <= i < j < k,
                             "OVO entries need class indices i < j inside range")
                    _require((i, j) not in models, f"duplicate OVO pair ({i}, {j})")
                    models[(i, j)] = _load_binary(entry.get("model"))
                model = OvoModel(k, models, class_map)
            else:
                model = OvaModel(k, tuple(_load_binary(e) for e in entries), class_map)
        else:
            raise FormatError(f"unknown model kind {kind!r}")
    except ValidationError as exc:
        raise CorruptModelError(f"inconsistent model data: {exc}") from exc
    return SavedModel(model=model, class_map=class_map, scaler=scaler)
