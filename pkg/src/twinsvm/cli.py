"""Command-line interface tying the library together.

Subcommands: ``train``, ``predict``, ``gridsearch``, ``gen-data``,
``plot-grid``, ``benchmark``, ``inspect-model``, ``optimize``.
Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical error.
Fit and batch-predict calls are timed with a monotonic clock, excluding
parsing and normalization.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import clipdcd
from .data import (
    Dataset,
    apply_scaler,
    fit_scaler,
    load_dataset,
    parse_csv,
    parse_csv_matrix,
    parse_libsvm,
    train_test_split,
    write_csv,
)
from .errors import (
    FormatError,
    NumericalError,
    ParseError,
    TwinSVMError,
    ValidationError,
)
from .estimators import (
    ALGORITHMS,
    DEFAULT_EPSILON,
    DEFAULT_GAMMA,
    BinaryModel,
    BinaryProblem,
    HyperParams,
    fit_binary,
)
from .kernels import RBF, KernelSpec
from .model_selection import (
    BINARY,
    DEFAULT_C_GRID,
    DEFAULT_GAMMA_GRID,
    GridSpec,
    accuracy,
    grid_search,
)
from .multiclass import OVO, STRATEGIES, OvoModel, fit_multiclass
from .ndc import NdcConfig, generate
from .persistence import SavedModel, load_model, save_model
from .surface import DEFAULT_RESOLUTION, expand_bounds, sample_grid, write_grid

_DEFAULT_BENCH_SIZES = "5000,10000,25000,50000,100000"


class UsageError(Exception):
    """Inconsistent or invalid flag combination."""


def _add_input_flags(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("--input", required=required, help="dataset file path")
    parser.add_argument("--format", choices=("csv", "libsvm"), default="csv",
                        help="dataset file format (default csv)")
    parser.add_argument("--label-col", type=int, default=0,
                        help="label column index for csv input (default 0)")
    parser.add_argument("--header", action="store_true",
                        help="skip the first csv row as a header")


def _add_hyper_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--algorithm", choices=ALGORITHMS, default="tsvm",
                        help="training algorithm (default tsvm)")
    parser.add_argument("--kernel", choices=("linear", "rbf"), default="linear",
                        help="kernel kind (default linear)")
    parser.add_argument("--gamma", type=float, default=DEFAULT_GAMMA,
                        help=f"RBF gamma (default {DEFAULT_GAMMA})")
    parser.add_argument("--rect", type=float, default=1.0,
                        help="fraction of training rows used as kernel reference "
                             "(default 1.0)")
    parser.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON,
                        help=f"ridge regularizer (default {DEFAULT_EPSILON})")
    parser.add_argument("--multiclass", choices=STRATEGIES, default=None,
                        help="multiclass strategy; defaults to ovo when the data "
                             "has more than 2 classes")
    parser.add_argument("--normalize", action="store_true",
                        help="scale features to [0, 1] before fitting and bundle "
                             "the scaler into the model file")
    parser.add_argument("--seed", type=int, default=0, help="random seed (default 0)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twinsvm",
        description="Twin support vector machine training, prediction, and tooling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a model and write it to disk")
    _add_input_flags(p)
    _add_hyper_flags(p)
    p.add_argument("--c1", type=float, default=1.0, help="penalty c1 (default 1)")
    p.add_argument("--c2", type=float, default=1.0, help="penalty c2 (default 1)")
    p.add_argument("--test-fraction", type=float, default=0.0,
                   help="held-out fraction for evaluation (default 0: no holdout)")
    p.add_argument("--max-iter", type=int, default=None,
                   help="solver iteration cap (default: scaled to problem size)")
    p.add_argument("--model", required=True, help="output model file path")

    p = sub.add_parser("predict", help="label samples with a saved model")
    p.add_argument("--model", required=True, help="model file path")
    _add_input_flags(p)
    p.add_argument("--out", default=None, help="write one label per line here")

    p = sub.add_parser("gridsearch",
                       help="cross-validated search over power-of-two grids")
    _add_input_flags(p)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="tsvm")
    p.add_argument("--kernel", choices=("linear", "rbf"), default="linear")
    p.add_argument("--rect", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--multiclass", choices=STRATEGIES, default=None)
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--folds", type=int, default=5, help="fold count (default 5)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel workers for grid evaluation (default 1)")
    p.add_argument("--out", default=None, help="write the full report as JSON here")
    p.add_argument("--model", default=None,
                   help="refit the best combination on all data and save it here")

    p = sub.add_parser("gen-data", help="generate synthetic clustered binary data")
    p.add_argument("--n", type=int, required=True, help="sample count")
    p.add_argument("--d", type=int, default=32, help="feature count (default 32)")
    p.add_argument("--clusters", type=int, default=10,
                   help="cluster count per class (default 10)")
    p.add_argument("--separation", type=float, default=2.0,
                   help="class-mean separation (default 2.0)")
    p.add_argument("--noise", type=float, default=0.05,
                   help="label flip fraction (default 0.05)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output csv path")

    p = sub.add_parser("plot-grid",
                       help="sample a 2-feature model's decision surface to csv")
    p.add_argument("--model", required=True, help="model file path")
    _add_input_flags(p, required=False)
    p.add_argument("--x-min", type=float, default=None)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--y-min", type=float, default=None)
    p.add_argument("--y-max", type=float, default=None)
    p.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION,
                   help=f"points per axis (default {DEFAULT_RESOLUTION})")
    p.add_argument("--out", required=True, help="output grid csv path")

    p = sub.add_parser("benchmark",
                       help="time both algorithms on a ladder of synthetic sizes")
    p.add_argument("--sizes", default=_DEFAULT_BENCH_SIZES,
                   help=f"comma-separated sample counts (default {_DEFAULT_BENCH_SIZES})")
    p.add_argument("--d", type=int, default=32, help="feature count (default 32)")
    p.add_argument("--test-fraction", type=float, default=0.3,
                   help="held-out fraction (default 0.3)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-mem-gb", type=float, default=4.0,
                   help="skip cells whose estimated memory exceeds this (default 4)")
    p.add_argument("--out", default=None, help="write the report as JSON here")

    p = sub.add_parser("inspect-model", help="print a saved model's metadata")
    p.add_argument("--model", required=True, help="model file path")

    p = sub.add_parser("optimize",
                       help="solve one box-constrained dual from a JSON matrix file")
    p.add_argument("--matrix", required=True,
                   help="JSON file holding the square matrix Q (or {\"Q\": ...})")
    p.add_argument("--c", type=float, required=True, help="box upper bound")
    p.add_argument("--tolerance", type=float, default=clipdcd.DEFAULT_TOLERANCE)
    p.add_argument("--max-iter", type=int, default=clipdcd.DEFAULT_MAX_ITERATIONS)
    p.add_argument("--out", required=True, help="output JSON path for the solution")

    return parser


def _kernel_spec(args) -> KernelSpec:
    if args.kernel == RBF:
        if not args.gamma or args.gamma <= 0:
            raise UsageError("--kernel rbf requires --gamma > 0")
        if not 0.0 < args.rect <= 1.0:
            raise UsageError("--rect must lie in (0, 1]")
        return KernelSpec(RBF, gamma=args.gamma, rect_fraction=args.rect)
    return KernelSpec()


def _mode_for(args, class_count: int) -> str:
    if args.multiclass is not None:
        return args.multiclass
    return BINARY if class_count == 2 else OVO


def _fit_mode(ds: Dataset, hp: HyperParams, algorithm: str, mode: str,
              seed: int, max_iterations=None):
    if mode == BINARY:
        if ds.class_count != 2:
            raise ValidationError(
                f"binary training requires 2 classes, found {ds.class_count}; "
                f"pass --multiclass ovo or ova"
            )
        problem = BinaryProblem(ds.samples[ds.labels == 0],
                                ds.samples[ds.labels == 1])
        return fit_binary(problem, hp, algorithm, seed=seed,
                          max_iterations=max_iterations)
    return fit_multiclass(ds, hp, algorithm, mode, seed=seed,
                          max_iterations=max_iterations)


def _cmd_train(args) -> int:
    kernel = _kernel_spec(args)
    ds = load_dataset(args.input, args.format, args.label_col, args.header)
    if args.test_fraction > 0:
        train_ds, test_ds = train_test_split(ds, args.test_fraction, args.seed)
    else:
        train_ds, test_ds = ds, None

    scaler = None
    if args.normalize:
        scaler = fit_scaler(train_ds)
        train_ds = apply_scaler(train_ds, scaler)

    hp = HyperParams(c1=args.c1, c2=args.c2, kernel=kernel, epsilon=args.epsilon)
    mode = _mode_for(args, train_ds.class_count)

    start = time.perf_counter()
    model = _fit_mode(train_ds, hp, args.algorithm, mode, args.seed, args.max_iter)
    train_time = time.perf_counter() - start

    save_model(model, args.model, class_map=ds.class_map, scaler=scaler)
    print(f"fitted {args.algorithm} ({kernel.kind}, {mode}) on "
          f"{train_ds.sample_count} samples, {train_ds.feature_count} features")
    print(f"train_time_s = {train_time:.6f}")

    if test_ds is not None:
        saved = SavedModel(model=model, class_map=ds.class_map, scaler=scaler)
        start = time.perf_counter()
        predicted = saved.predict(test_ds.samples)
        test_time = time.perf_counter() - start
        score = accuracy(test_ds.original_labels(), predicted)
        print(f"test_accuracy_pct = {score:.2f}")
        print(f"test_time_s = {test_time:.6f}")

    print(f"model written to {args.model}")
    return 0


def _read_predict_input(args, feature_count: int):
    """Samples plus optional true labels from a possibly unlabeled file."""
    with open(args.input, "r", encoding="utf-8") as fh:
        text = fh.read()
    if args.format == "libsvm":
        ds = parse_libsvm(text, require_two_classes=False)
        X, y = ds.samples, ds.original_labels()
        if X.shape[1] < feature_count:  # trailing zero features are implicit
            pad = np.zeros((X.shape[0], feature_count - X.shape[1]))
            X = np.hstack([X, pad])
        return X, y

    width = None
    for row in csv.reader(io.StringIO(text)):
        if row and not (len(row) == 1 and row[0].strip() == ""):
            width = len(row)
            break
    if width is None:
        raise ParseError("empty input: no data rows found")
    if width == feature_count:
        return parse_csv_matrix(text, has_header=args.header), None
    ds = parse_csv(text, args.label_col, args.header, require_two_classes=False)
    return ds.samples, ds.original_labels()


def _cmd_predict(args) -> int:
    saved = load_model(args.model)
    X, y = _read_predict_input(args, saved.feature_count)

    start = time.perf_counter()
    predicted = saved.predict(X)
    test_time = time.perf_counter() - start

    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            for label in predicted:
                fh.write(f"{label}\n")
        print(f"labels written to {args.out}")
    else:
        for label in predicted:
            print(label)
    print(f"test_time_s = {test_time:.6f}")
    if y is not None:
        print(f"test_accuracy_pct = {accuracy(y, predicted):.2f}")
    return 0


def _cmd_gridsearch(args) -> int:
    ds = load_dataset(args.input, args.format, args.label_col, args.header)
    scaler = None
    if args.normalize:
        scaler = fit_scaler(ds)
        ds = apply_scaler(ds, scaler)
    mode = _mode_for(args, ds.class_count)
    gamma_values = DEFAULT_GAMMA_GRID if args.kernel == RBF else ()
    if not 0.0 < args.rect <= 1.0:
        raise UsageError("--rect must lie in (0, 1]")
    gs = GridSpec(c1_values=DEFAULT_C_GRID, c2_values=DEFAULT_C_GRID,
                  gamma_values=gamma_values, rect_fraction=args.rect,
                  algorithm=args.algorithm, mode=mode, k_folds=args.folds,
                  seed=args.seed, epsilon=args.epsilon)

    report = grid_search(ds, gs, n_jobs=args.jobs)
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=1)
            fh.write("\n")
        print(f"report written to {args.out}")

    print(f"evaluated {len(report.records)} combinations "
          f"({len(report.failures)} failed) in {report.wall_time:.2f} s")
    best = report.best
    if best is None:
        raise NumericalError("every grid combination failed to evaluate")
    gamma_note = "" if best.gamma is None else f", gamma={best.gamma:g}"
    print(f"best: c1={best.c1:g}, c2={best.c2:g}{gamma_note} -> "
          f"{best.mean:.2f}±{best.std:.2f}")

    if args.model is not None:
        hp = HyperParams(c1=best.c1, c2=best.c2, kernel=gs.kernel_for(best.gamma),
                         epsilon=args.epsilon)
        model = _fit_mode(ds, hp, args.algorithm, mode, args.seed)
        save_model(model, args.model, class_map=ds.class_map, scaler=scaler)
        print(f"best model refitted and written to {args.model}")
    return 0


def _cmd_gen_data(args) -> int:
    cfg = NdcConfig(n=args.n, d=args.d, cluster_count=args.clusters,
                    separation=args.separation, noise_fraction=args.noise,
                    seed=args.seed)
    ds = generate(cfg)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(write_csv(ds))
    balance = 100.0 * float(np.mean(ds.original_labels() == 1))
    print(f"wrote {ds.sample_count} samples x {ds.feature_count} features "
          f"to {args.out} ({balance:.1f}% positive)")
    return 0


def _cmd_plot_grid(args) -> int:
    saved = load_model(args.model)
    explicit = (args.x_min, args.x_max, args.y_min, args.y_max)
    if all(v is not None for v in explicit):
        bounds = ((args.x_min, args.x_max), (args.y_min, args.y_max))
    elif args.input is not None:
        ds = load_dataset(args.input, args.format, args.label_col, args.header,
                          require_two_classes=False)
        if ds.feature_count != 2:
            raise ValidationError("visualization requires 2 features")
        bounds = expand_bounds(ds.samples)
    else:
        raise UsageError(
            "provide --input for automatic bounds, or all of "
            "--x-min --x-max --y-min --y-max"
        )
    field = sample_grid(saved, bounds, args.resolution)
    write_grid(field, args.out)
    print(f"grid {field.resolution}x{field.resolution} written to {args.out}")
    return 0


def _estimated_bytes(algorithm: str, n1: int, n2: int, d: int) -> int:
    """Rough peak allocation for a linear fit at this size."""
    big = max(n1, n2)
    if algorithm == "tsvm":
        # dual matrix, its transpose copy inside the solve, and the factored
        # right-hand-side block
        return 8 * (2 * big * big + 2 * (d + 1) * big)
    return 8 * (3 * (n1 + n2) * (d + 1))


def _cmd_benchmark(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"--sizes must be comma-separated integers: {exc}") from exc
    if not sizes or any(n < 4 for n in sizes):
        raise UsageError("--sizes must contain integers >= 4")
    budget = args.max_mem_gb * 2**30
    hp = HyperParams()
    cells = []

    for n in sizes:
        ds = generate(NdcConfig(n=n, d=args.d, seed=args.seed))
        train_ds, test_ds = train_test_split(ds, args.test_fraction, args.seed)
        n1 = int(np.sum(train_ds.labels == 0))
        n2 = train_ds.sample_count - n1
        problem = BinaryProblem(train_ds.samples[train_ds.labels == 0],
                                train_ds.samples[train_ds.labels == 1])
        for algorithm in ALGORITHMS:
            estimate = _estimated_bytes(algorithm, n1, n2, args.d)
            if estimate > budget:
                cells.append({"n": n, "algorithm": algorithm, "skipped":
                              f"estimated {estimate / 2**30:.1f} GiB exceeds "
                              f"--max-mem-gb {args.max_mem_gb:g}"})
                continue
            start = time.perf_counter()
            model = fit_binary(problem, hp, algorithm)
            train_time = time.perf_counter() - start
            saved = SavedModel(model=model, class_map=ds.class_map)
            start = time.perf_counter()
            predicted = saved.predict(test_ds.samples)
            test_time = time.perf_counter() - start
            score = accuracy(test_ds.original_labels(), predicted)
            cells.append({"n": n, "algorithm": algorithm, "accuracy_pct": score,
                          "train_s": train_time, "test_s": test_time})

    print(f"{'n':>8}  {'algorithm':<9} {'accuracy':>9} {'train_s':>10} {'test_s':>9}")
    for cell in cells:
        if "skipped" in cell:
            print(f"{cell['n']:>8}  {cell['algorithm']:<9} skipped: {cell['skipped']}")
        else:
            print(f"{cell['n']:>8}  {cell['algorithm']:<9} "
                  f"{cell['accuracy_pct']:>9.2f} {cell['train_s']:>10.4f} "
                  f"{cell['test_s']:>9.4f}")
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump({"d": args.d, "seed": args.seed, "cells": cells}, fh, indent=1)
            fh.write("\n")
        print(f"report written to {args.out}")
    return 0


def _cmd_inspect_model(args) -> int:
    saved = load_model(args.model)
    model = saved.model
    if isinstance(model, BinaryModel):
        kind, submodels = "binary", [model]
    elif isinstance(model, OvoModel):
        kind = "one-vs-one"
        submodels = [model.models[key] for key in sorted(model.models)]
    else:
        kind, submodels = "one-vs-all", list(model.models)
    first = submodels[0]
    kernel = first.kernel
    print(f"kind = {kind}")
    print(f"algorithm = {first.algorithm}")
    print(f"kernel = {kernel.kind}" + ("" if kernel.is_linear
                                       else f" (gamma={kernel.gamma:g}, "
                                            f"rect_fraction={kernel.rect_fraction:g})"))
    print(f"features = {saved.feature_count}")
    print(f"classes = {list(saved.class_map)}")
    print(f"binary_models = {len(submodels)}")
    print(f"scaled_inputs = {saved.scaler is not None}")
    if isinstance(model, BinaryModel):
        print(f"plane1_norm = {model.norm1!r}")
        print(f"plane2_norm = {model.norm2!r}")
    return 0


def _cmd_optimize(args) -> int:
    with open(args.matrix, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"matrix file is not valid JSON: {exc}") from exc
    matrix = payload.get("Q") if isinstance(payload, dict) else payload
    Q = np.asarray(matrix, dtype=np.float64)
    solution = clipdcd.optimize(Q, args.c, tolerance=args.tolerance,
                                max_iterations=args.max_iter)
    result = {
        "alpha": solution.alpha.tolist(),
        "objective": solution.objective,
        "iterations": solution.iterations,
        "converged": solution.converged,
        "kkt": solution.kkt,
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(result, fh, allow_nan=False, indent=1)
        fh.write("\n")
    print(f"solution written to {args.out}")
    return 0


_HANDLERS = {
    "train": _cmd_train,
    "predict": _cmd_predict,
    "gridsearch": _cmd_gridsearch,
    "gen-data": _cmd_gen_data,
    "plot-grid": _cmd_plot_grid,
    "benchmark": _cmd_benchmark,
    "inspect-model": _cmd_inspect_model,
    "optimize": _cmd_optimize,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 2

    handler = _HANDLERS[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4
    except (ParseError, FormatError, ValidationError, TwinSVMError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
