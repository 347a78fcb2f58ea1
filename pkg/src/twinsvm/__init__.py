"""Twin support vector machine classifiers with fast solvers and tooling.

The package provides the binary TSVM (dual coordinate-descent training) and
LSTSVM (closed-form training) estimators with linear and RBF kernels,
one-vs-one / one-vs-all multiclass wrappers, cross-validated grid search,
JSON model persistence, a synthetic data generator, decision-surface
export, and a command-line interface (``twinsvm``).
"""

from .clipdcd import DualProblem, DualSolution, kkt_residual, optimize
from .data import (
    Dataset,
    FoldPlan,
    ScalerParams,
    apply_scaler,
    fit_scaler,
    kfold_split,
    load_dataset,
    parse_csv,
    parse_libsvm,
    train_test_split,
    write_csv,
    write_libsvm,
)
from .errors import (
    CorruptModelError,
    FitError,
    FormatError,
    NotFittedError,
    NumericalError,
    ParseError,
    SolverError,
    TwinSVMError,
    ValidationError,
)
from .estimators import (
    LSTSVM,
    TSVM,
    BinaryModel,
    BinaryProblem,
    HyperParams,
    decide,
    decide_batch,
    fit_binary,
    lstsvm_fit,
    tsvm_fit,
)
from .kernels import KernelSpec, eval_kernel, gram, select_reference
from .model_selection import (
    GridSpec,
    SearchReport,
    accuracy,
    cross_validate,
    grid_search,
    pow2_range,
)
from .multiclass import (
    MulticlassTwin,
    OvaModel,
    OvoModel,
    ova_fit,
    ova_predict,
    ovo_fit,
    ovo_predict,
)
from .ndc import NdcConfig, generate
from .persistence import SavedModel, load_model, save_model
from .surface import GridField, expand_bounds, read_grid, sample_grid, write_grid

__version__ = "0.1.0"

__all__ = [
    "BinaryModel",
    "BinaryProblem",
    "CorruptModelError",
    "Dataset",
    "DualProblem",
    "DualSolution",
    "FitError",
    "FoldPlan",
    "FormatError",
    "GridField",
    "GridSpec",
    "HyperParams",
    "KernelSpec",
    "LSTSVM",
    "MulticlassTwin",
    "NdcConfig",
    "NotFittedError",
    "NumericalError",
    "OvaModel",
    "OvoModel",
    "ParseError",
    "SavedModel",
    "ScalerParams",
    "SearchReport",
    "SolverError",
    "TSVM",
    "TwinSVMError",
    "ValidationError",
    "accuracy",
    "apply_scaler",
    "cross_validate",
    "decide",
    "decide_batch",
    "eval_kernel",
    "expand_bounds",
    "fit_binary",
    "fit_scaler",
    "generate",
    "gram",
    "grid_search",
    "kfold_split",
    "kkt_residual",
    "load_dataset",
    "load_model",
    "lstsvm_fit",
    "optimize",
    "ova_fit",
    "ova_predict",
    "ovo_fit",
    "ovo_predict",
    "parse_csv",
    "parse_libsvm",
    "pow2_range",
    "read_grid",
    "sample_grid",
    "save_model",
    "select_reference",
    "train_test_split",
    "tsvm_fit",
    "write_csv",
    "write_grid",
    "write_libsvm",
]
