"""Tests for dataset parsing, scaling, and splitting."""

import numpy as np
import pytest

from twinsvm.data import (
    Dataset,
    FoldPlan,
    ScalerParams,
    apply_scaler,
    fit_scaler,
    kfold_split,
    parse_csv,
    parse_csv_matrix,
    parse_libsvm,
    train_test_split,
    write_csv,
    write_libsvm,
)
from twinsvm.errors import ParseError, ValidationError


# ---------------------------------------------------------------------------
# CSV parsing


def test_parse_csv_basic():
    ds = parse_csv("1,0.5,2.0\n-1,1.5,3.0\n")
    assert ds.samples.shape == (2, 2)
    assert ds.samples.dtype == np.float64
    np.testing.assert_array_equal(ds.samples, [[0.5, 2.0], [1.5, 3.0]])
    assert ds.class_map == (1, -1)
    np.testing.assert_array_equal(ds.labels, [0, 1])


def test_parse_csv_header_skipped():
    ds = parse_csv("label,f1\n1,0.5\n-1,1.5\n", has_header=True)
    assert ds.samples.shape == (2, 1)


def test_parse_csv_label_column_position():
    ds = parse_csv("0.5,1,2.0\n1.5,-1,3.0\n", label_column=1)
    np.testing.assert_array_equal(ds.samples, [[0.5, 2.0], [1.5, 3.0]])
    assert ds.class_map == (1, -1)


def test_parse_csv_string_labels_first_appearance_order():
    ds = parse_csv("b,1\na,2\nb,3\n")
    assert ds.class_map == ("b", "a")
    np.testing.assert_array_equal(ds.labels, [0, 1, 0])


def test_parse_csv_empty_input_rejected():
    with pytest.raises(ParseError):
        parse_csv("")


def test_parse_csv_ragged_row_reports_line_number():
    with pytest.raises(ParseError, match="line 3"):
        parse_csv("1,0.5,2.0\n-1,1.5,3.0\n1,4.0\n")


def test_parse_csv_non_numeric_feature_rejected():
    with pytest.raises(ParseError, match="line 2"):
        parse_csv("1,0.5\n-1,oops\n")


def test_parse_csv_single_class_rejected():
    with pytest.raises(ValidationError):
        parse_csv("1,0.5\n1,1.5\n")
    ds = parse_csv("1,0.5\n1,1.5\n", require_two_classes=False)
    assert ds.class_map == (1,)


def test_parse_csv_matrix_unlabeled():
    X = parse_csv_matrix("0.5,2.0\n1.5,3.0\n")
    np.testing.assert_array_equal(X, [[0.5, 2.0], [1.5, 3.0]])


def test_csv_roundtrip_preserves_values():
    ds = parse_csv("1,0.125,2.0\n-1,1.5,-3.75\n1,0.1,0.3\n")
    again = parse_csv(write_csv(ds))
    np.testing.assert_array_equal(again.samples, ds.samples)
    assert again.class_map == ds.class_map
    np.testing.assert_array_equal(again.labels, ds.labels)


# ---------------------------------------------------------------------------
# LIBSVM parsing


def test_parse_libsvm_basic():
    ds = parse_libsvm("+1 1:0.5 3:2.0\n-1 2:1.5\n")
    np.testing.assert_array_equal(
        ds.samples, [[0.5, 0.0, 2.0], [0.0, 1.5, 0.0]])
    assert ds.class_map == (1, -1)


def test_parse_libsvm_comments_and_blanks_skipped():
    ds = parse_libsvm("# comment\n\n+1 1:0.5\n-1 1:1.5\n")
    assert ds.samples.shape == (2, 1)


def test_parse_libsvm_width_is_max_index():
    ds = parse_libsvm("1 5:1.0\n-1 1:2.0\n")
    assert ds.samples.shape == (2, 5)


def test_parse_libsvm_indices_must_increase():
    with pytest.raises(ParseError, match="line 1"):
        parse_libsvm("1 3:1.0 2:2.0\n-1 1:0.5\n")
    with pytest.raises(ParseError):
        parse_libsvm("1 2:1.0 2:2.0\n-1 1:0.5\n")


def test_parse_libsvm_index_must_be_positive():
    with pytest.raises(ParseError):
        parse_libsvm("1 0:1.0\n-1 1:0.5\n")


def test_parse_libsvm_malformed_pair():
    with pytest.raises(ParseError, match="line 2"):
        parse_libsvm("1 1:1.0\n-1 1-0.5\n")


def test_libsvm_roundtrip_preserves_values():
    # last column nonzero so the sparse format keeps the full width
    ds = parse_csv("1,0.5,0.0,2.0\n-1,0.0,1.5,3.5\n")
    again = parse_libsvm(write_libsvm(ds))
    np.testing.assert_array_equal(again.samples, ds.samples)
    assert again.class_map == ds.class_map


# ---------------------------------------------------------------------------
# Dataset container


def test_from_arrays_first_appearance_order():
    ds = Dataset.from_arrays(np.zeros((3, 1)), np.array([5, 2, 5]))
    assert ds.class_map == (5, 2)
    np.testing.assert_array_equal(ds.labels, [0, 1, 0])
    np.testing.assert_array_equal(ds.original_labels(), [5, 2, 5])


def test_dataset_arrays_are_read_only():
    ds = Dataset.from_arrays(np.zeros((2, 1)), np.array([0, 1]))
    with pytest.raises(ValueError):
        ds.samples[0, 0] = 1.0


def test_subset_shares_class_map():
    ds = Dataset.from_arrays(np.arange(8.0).reshape(4, 2),
                             np.array([3, 7, 3, 7]))
    sub = ds.subset(np.array([2, 3]))
    assert sub.class_map == ds.class_map
    np.testing.assert_array_equal(sub.samples, [[4.0, 5.0], [6.0, 7.0]])
    np.testing.assert_array_equal(sub.original_labels(), [3, 7])


# ---------------------------------------------------------------------------
# Feature scaling


def test_scaler_maps_training_range_to_unit_interval():
    ds = Dataset.from_arrays(np.array([[0.0], [5.0], [10.0]]),
                             np.array([0, 1, 0]))
    params = fit_scaler(ds)
    scaled = apply_scaler(ds, params)
    np.testing.assert_allclose(scaled.samples[:, 0], [0.0, 0.5, 1.0])


def test_scaler_constant_feature_maps_to_zero():
    ds = Dataset.from_arrays(np.array([[3.0, 1.0], [3.0, 2.0]]),
                             np.array([0, 1]))
    params = fit_scaler(ds)
    scaled = apply_scaler(ds, params)
    np.testing.assert_array_equal(scaled.samples[:, 0], [0.0, 0.0])


def test_scaler_clamps_out_of_range_values():
    train = Dataset.from_arrays(np.array([[0.0], [10.0]]), np.array([0, 1]))
    params = fit_scaler(train)
    test = Dataset.from_arrays(np.array([[12.0], [-1.0]]), np.array([0, 1]))
    scaled = apply_scaler(test, params)
    np.testing.assert_array_equal(scaled.samples[:, 0], [1.0, 0.0])


def test_scaler_feature_count_mismatch_rejected():
    params = ScalerParams(minimum=np.zeros(2), maximum=np.ones(2))
    ds = Dataset.from_arrays(np.zeros((2, 3)), np.array([0, 1]))
    with pytest.raises(ValidationError):
        apply_scaler(ds, params)


# ---------------------------------------------------------------------------
# Cross-validation folds


def test_kfold_even_sizes():
    plan = kfold_split(10, 5, seed=0)
    assert plan.k == 5
    sizes = [len(plan.test_indices(f)) for f in range(5)]
    assert sizes == [2, 2, 2, 2, 2]


def test_kfold_uneven_sizes_differ_by_at_most_one():
    plan = kfold_split(7, 5, seed=0)
    sizes = sorted(len(plan.test_indices(f)) for f in range(5))
    assert sizes == [1, 1, 1, 2, 2]


def test_kfold_partition_is_exhaustive_and_disjoint():
    plan = kfold_split(23, 4, seed=7)
    seen = np.concatenate([plan.test_indices(f) for f in range(4)])
    assert sorted(seen.tolist()) == list(range(23))
    for f in range(4):
        test = set(plan.test_indices(f).tolist())
        train = set(plan.train_indices(f).tolist())
        assert not (test & train)
        assert len(test | train) == 23


def test_kfold_deterministic_per_seed():
    a = kfold_split(50, 5, seed=3)
    b = kfold_split(50, 5, seed=3)
    c = kfold_split(50, 5, seed=4)
    np.testing.assert_array_equal(a.assignments, b.assignments)
    assert not np.array_equal(a.assignments, c.assignments)


def test_kfold_bounds_rejected():
    with pytest.raises(ValidationError):
        kfold_split(5, 1, seed=0)
    with pytest.raises(ValidationError):
        kfold_split(4, 5, seed=0)


def test_fold_plan_fold_index_bounds():
    plan = kfold_split(10, 5, seed=0)
    with pytest.raises(ValidationError):
        plan.test_indices(5)


# ---------------------------------------------------------------------------
# Train/test split


def test_train_test_split_sizes_and_disjointness():
    ds = Dataset.from_arrays(np.arange(200.0).reshape(100, 2),
                             np.tile([0, 1], 50))
    train, test = train_test_split(ds, 0.3, seed=0)
    assert len(test.labels) == 30
    assert len(train.labels) == 70
    train_rows = {tuple(r) for r in train.samples}
    test_rows = {tuple(r) for r in test.samples}
    assert not (train_rows & test_rows)


def test_train_test_split_deterministic():
    ds = Dataset.from_arrays(np.arange(40.0).reshape(20, 2),
                             np.tile([0, 1], 10))
    a = train_test_split(ds, 0.25, seed=9)
    b = train_test_split(ds, 0.25, seed=9)
    np.testing.assert_array_equal(a[0].samples, b[0].samples)
    np.testing.assert_array_equal(a[1].samples, b[1].samples)


def test_train_test_split_keeps_both_sides_nonempty():
    ds = Dataset.from_arrays(np.arange(8.0).reshape(4, 2),
                             np.array([0, 1, 0, 1]))
    train, test = train_test_split(ds, 0.01, seed=0)
    assert len(test.labels) == 1
    train, test = train_test_split(ds, 0.99, seed=0)
    assert len(train.labels) == 1


def test_train_test_split_fraction_bounds():
    ds = Dataset.from_arrays(np.arange(8.0).reshape(4, 2),
                             np.array([0, 1, 0, 1]))
    for bad in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ValidationError):
            train_test_split(ds, bad, seed=0)
