"""Tests for the normally-distributed-clusters data generator."""

import numpy as np
import pytest

from twinsvm.data import train_test_split
from twinsvm.errors import ValidationError
from twinsvm.estimators import BinaryProblem, HyperParams, decide_batch, lstsvm_fit
from twinsvm.ndc import NdcConfig, generate


def test_shapes_and_dtypes():
    ds = generate(NdcConfig(n=200, d=7, seed=0))
    assert ds.samples.shape == (200, 7)
    assert ds.samples.dtype == np.float64
    assert ds.labels.shape == (200,)
    assert set(np.unique(ds.labels)) == {0, 1}
    assert set(ds.class_map) == {1, -1}


def test_generation_is_deterministic_per_seed():
    a = generate(NdcConfig(n=500, d=5, seed=42))
    b = generate(NdcConfig(n=500, d=5, seed=42))
    c = generate(NdcConfig(n=500, d=5, seed=43))
    np.testing.assert_array_equal(a.samples, b.samples)
    np.testing.assert_array_equal(a.labels, b.labels)
    assert not np.array_equal(a.samples, c.samples)


def test_class_balance_within_bounds():
    for seed in range(10):
        ds = generate(NdcConfig(n=1000, d=8, seed=seed))
        positive = np.mean(ds.original_labels() == 1)
        assert 0.40 <= positive <= 0.60, f"seed {seed}: balance {positive}"


def test_small_sizes_still_balanced():
    for n in (2, 4, 5, 10):
        ds = generate(NdcConfig(n=n, d=3, seed=1))
        positive = np.mean(ds.original_labels() == 1)
        assert 0.40 <= positive <= 0.60


def test_values_are_finite():
    ds = generate(NdcConfig(n=2000, d=16, cluster_count=5, seed=3))
    assert np.isfinite(ds.samples).all()


def test_noise_caps_achievable_accuracy():
    # with 25% of labels flipped, even a perfect separator of the clean
    # geometry can score at most ~75% on the training data
    noisy = generate(NdcConfig(n=2000, d=4, separation=8.0,
                               noise_fraction=0.25, seed=7))
    problem = BinaryProblem(noisy.samples[noisy.labels == 0],
                            noisy.samples[noisy.labels == 1])
    model = lstsvm_fit(problem, HyperParams())
    signs = decide_batch(model, noisy.samples)
    predicted = np.where(signs == 1, 0, 1)
    accuracy = np.mean(predicted == noisy.labels)
    assert 0.65 <= accuracy <= 0.85


def test_wide_separation_without_noise_is_nearly_separable():
    ds = generate(NdcConfig(n=1000, d=6, separation=8.0,
                            noise_fraction=0.0, seed=5))
    train, test = train_test_split(ds, 0.3, seed=0)
    problem = BinaryProblem(train.samples[train.labels == 0],
                            train.samples[train.labels == 1])
    model = lstsvm_fit(problem, HyperParams())
    signs = decide_batch(model, test.samples)
    predicted = np.where(signs == 1, 0, 1)
    accuracy = np.mean(predicted == test.labels)
    assert accuracy >= 0.97


def test_default_configuration_is_learnable():
    ds = generate(NdcConfig(n=5000, d=32, seed=11))
    train, test = train_test_split(ds, 0.3, seed=1)
    problem = BinaryProblem(train.samples[train.labels == 0],
                            train.samples[train.labels == 1])
    model = lstsvm_fit(problem, HyperParams())
    signs = decide_batch(model, test.samples)
    predicted = np.where(signs == 1, 0, 1)
    assert np.mean(predicted == test.labels) >= 0.80


def test_config_validation():
    with pytest.raises(ValidationError):
        NdcConfig(n=1, d=3)
    with pytest.raises(ValidationError):
        NdcConfig(n=3, d=3)  # no split of 3 lands in the 40-60% band
    with pytest.raises(ValidationError):
        NdcConfig(n=10, d=0)
    with pytest.raises(ValidationError):
        NdcConfig(n=10, d=3, cluster_count=0)
    with pytest.raises(ValidationError):
        NdcConfig(n=10, d=3, separation=-1.0)
    with pytest.raises(ValidationError):
        NdcConfig(n=10, d=3, noise_fraction=0.5)
    with pytest.raises(ValidationError):
        NdcConfig(n=10, d=3, noise_fraction=-0.1)
