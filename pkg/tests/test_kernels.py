"""Tests for kernel evaluation, Gram construction, and reference selection."""

import numpy as np
import pytest

import twinsvm.kernels as kernels
from twinsvm.errors import ValidationError
from twinsvm.kernels import KernelSpec, eval_kernel, gram, select_reference


def test_linear_kernel_is_dot_product():
    spec = KernelSpec()
    assert spec.is_linear
    x = np.array([1.0, 2.0])
    y = np.array([3.0, 4.0])
    assert eval_kernel(spec, x, y) == 11.0


def test_rbf_kernel_known_value():
    spec = KernelSpec(kind="rbf", gamma=1.0)
    x = np.array([0.0, 0.0])
    y = np.array([1.0, 0.0])
    assert eval_kernel(spec, x, y) == pytest.approx(np.exp(-1.0), rel=1e-15)


def test_rbf_self_similarity_is_one():
    spec = KernelSpec(kind="rbf", gamma=0.5)
    x = np.array([2.0, -3.0, 1.0])
    assert eval_kernel(spec, x, x) == 1.0


def test_eval_kernel_dimension_mismatch():
    spec = KernelSpec()
    with pytest.raises(ValidationError):
        eval_kernel(spec, np.array([1.0]), np.array([1.0, 2.0]))


def test_kernel_spec_validation():
    with pytest.raises(ValidationError):
        KernelSpec(kind="poly")
    with pytest.raises(ValidationError):
        KernelSpec(kind="rbf")  # gamma required
    with pytest.raises(ValidationError):
        KernelSpec(kind="rbf", gamma=-1.0)
    with pytest.raises(ValidationError):
        KernelSpec(rect_fraction=0.0)
    with pytest.raises(ValidationError):
        KernelSpec(rect_fraction=1.5)


def test_gram_linear_matches_matmul():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(7, 3))
    C = rng.normal(size=(4, 3))
    K = gram(KernelSpec(), X, C)
    assert K.shape == (7, 4)
    np.testing.assert_array_equal(K, X @ C.T)


def test_gram_rbf_matches_pointwise_eval():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(5, 4))
    C = rng.normal(size=(6, 4))
    spec = KernelSpec(kind="rbf", gamma=0.3)
    K = gram(spec, X, C)
    for i in range(5):
        for j in range(6):
            assert K[i, j] == pytest.approx(
                eval_kernel(spec, X[i], C[j]), rel=1e-12, abs=1e-15)


def test_gram_empty_rows():
    K = gram(KernelSpec(), np.zeros((0, 3)), np.ones((4, 3)))
    assert K.shape == (0, 4)


def test_gram_dimension_mismatch():
    with pytest.raises(ValidationError):
        gram(KernelSpec(), np.zeros((2, 3)), np.zeros((2, 4)))


def test_rbf_gram_symmetry():
    rng = np.random.default_rng(2)
    X = rng.normal(size=(15, 6))
    K = gram(KernelSpec(kind="rbf", gamma=0.7), X, X)
    assert np.max(np.abs(K - K.T)) <= 1e-12


def test_rbf_gram_positive_semidefinite():
    for seed in range(5):
        rng = np.random.default_rng(seed)
        X = rng.normal(size=(20, 5))
        K = gram(KernelSpec(kind="rbf", gamma=1.3), X, X)
        eigenvalues = np.linalg.eigvalsh(K)
        assert eigenvalues.min() >= -1e-8


def test_rbf_gram_values_in_unit_interval():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(10, 4)) * 5
    K = gram(KernelSpec(kind="rbf", gamma=0.1), X, X)
    assert K.max() <= 1.0
    assert K.min() > 0.0
    np.testing.assert_allclose(np.diag(K), 1.0, atol=1e-15)


def test_rbf_gram_blocked_path_matches_single_block(monkeypatch):
    rng = np.random.default_rng(4)
    X = rng.normal(size=(37, 3))
    C = rng.normal(size=(23, 3))
    spec = KernelSpec(kind="rbf", gamma=0.9)
    whole = gram(spec, X, C)
    monkeypatch.setattr(kernels, "_BLOCK_BYTES", 512)
    blocked = gram(spec, X, C)
    # BLAS may vectorize small blocks differently, so exact bit equality is
    # not guaranteed; agreement to machine precision is.
    np.testing.assert_allclose(blocked, whole, rtol=1e-13, atol=1e-16)


def test_select_reference_fraction_one_returns_rows_unchanged():
    rng = np.random.default_rng(5)
    rows = rng.normal(size=(30, 2))
    out = select_reference(rows, 1.0, seed=123)
    np.testing.assert_array_equal(out, rows)


def test_select_reference_size_rounds_half_up():
    rows = np.arange(100.0).reshape(100, 1)
    assert select_reference(rows, 0.25, seed=0).shape == (25, 1)
    assert select_reference(rows, 0.005, seed=0).shape == (1, 1)
    assert select_reference(np.arange(6.0).reshape(3, 2), 0.5, seed=0).shape \
        == (2, 2)  # floor(1.5 + 0.5) = 2


def test_select_reference_deterministic_and_order_preserving():
    rows = np.arange(40.0).reshape(20, 2)
    a = select_reference(rows, 0.4, seed=11)
    b = select_reference(rows, 0.4, seed=11)
    c = select_reference(rows, 0.4, seed=12)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    # selected rows appear in their original order
    positions = [int(r[0]) // 2 for r in a]
    assert positions == sorted(positions)


def test_select_reference_rows_come_from_input():
    rows = np.arange(40.0).reshape(20, 2)
    out = select_reference(rows, 0.3, seed=2)
    original = {tuple(r) for r in rows}
    assert all(tuple(r) in original for r in out)


def test_select_reference_empty_rejected():
    with pytest.raises(ValidationError):
        select_reference(np.zeros((0, 2)), 0.5, seed=0)


def test_rbf_kernel_insensitive_to_negative_squared_distance_rounding():
    # nearly identical points can yield a tiny negative squared distance
    # through floating-point cancellation; the result must stay in (0, 1]
    x = np.full(8, 1e8)
    X = np.vstack([x, x * (1 + 1e-16)])
    K = gram(KernelSpec(kind="rbf", gamma=10.0), X, X)
    assert K.max() <= 1.0
    assert K.min() > 0.0
