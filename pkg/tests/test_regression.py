"""Synthetic regression data, partial gradient steps, and training."""

import numpy as np
import pytest

from codedcomp import (
    LatencyModel,
    build_gc,
    build_rcs,
    build_uc_mmc,
    centralized_gd,
    generate_dataset,
    gram,
    loss,
    partial_gd_step,
    train,
)

MODEL = LatencyModel(mu=10.0, alpha=0.01)


class TestDataset:
    def test_shapes(self):
        ds = generate_dataset(100, 8, np.random.default_rng(0))
        assert ds.x.shape == (100, 8)
        assert ds.y.shape == (100,)
        assert ds.theta_star.shape == (8,)
        assert np.all((0 <= ds.theta_star) & (ds.theta_star <= 1))

    def test_deterministic(self):
        a = generate_dataset(50, 4, np.random.default_rng(3))
        b = generate_dataset(50, 4, np.random.default_rng(3))
        assert np.array_equal(a.x, b.x)
        assert np.array_equal(a.y, b.y)

    def test_mixture_is_centred(self):
        # components at +/- 1.5*theta*/dim cancel in expectation
        ds = generate_dataset(
            20000, 1, np.random.default_rng(8), theta_star=np.array([1.0])
        )
        sigma = np.sqrt(1.0 + 1.5**2)
        assert abs(float(np.mean(ds.x))) < 3 * sigma / np.sqrt(20000)

    def test_labels_follow_truth(self):
        ds = generate_dataset(
            500, 3, np.random.default_rng(11), theta_star=np.array([0.2, 0.5, 0.9]),
            noise_std=0.0,
        )
        assert np.allclose(ds.y, ds.x @ ds.theta_star)

    def test_bad_sizes(self):
        with pytest.raises(ValueError):
            generate_dataset(0, 4, np.random.default_rng(0))


class TestGramAndLoss:
    def test_gram_identity(self):
        ds = generate_dataset(6, 6, np.random.default_rng(1))
        object.__setattr__(ds, "x", np.eye(6))
        w, c = gram(ds)
        assert np.allclose(w, np.eye(6))
        assert np.allclose(c, ds.y)

    def test_gram_symmetric_psd(self):
        ds = generate_dataset(40, 7, np.random.default_rng(5))
        w, _ = gram(ds)
        assert np.allclose(w, w.T)
        rng = np.random.default_rng(6)
        for _ in range(100):
            v = rng.standard_normal(7)
            assert v @ w @ v >= -1e-9

    def test_loss_zero_at_truth_noiseless(self):
        ds = generate_dataset(80, 5, np.random.default_rng(2), noise_std=0.0)
        assert loss(ds, ds.theta_star) == pytest.approx(0.0, abs=1e-20)

    def test_loss_matches_direct_sum(self):
        ds = generate_dataset(30, 4, np.random.default_rng(9))
        theta = np.random.default_rng(10).standard_normal(4)
        direct = 0.5 * np.mean((ds.y - ds.x @ theta) ** 2)
        assert loss(ds, theta) == pytest.approx(direct)


class TestPartialStep:
    def setup_method(self):
        rng = np.random.default_rng(21)
        self.w = rng.standard_normal((8, 8))
        self.w = self.w @ self.w.T
        self.c = rng.standard_normal(8)
        self.theta = rng.standard_normal(8)

    def test_full_mask_is_plain_step(self):
        wt = self.w @ self.theta
        mask = np.ones(4, dtype=bool)
        blocks = {b: wt[2 * b : 2 * b + 2] for b in range(4)}
        got = partial_gd_step(self.theta, mask, blocks, self.c, 0.05)
        assert np.allclose(got, self.theta - 0.05 * (wt - self.c), atol=1e-14)

    def test_empty_mask_is_identity(self):
        got = partial_gd_step(self.theta, np.zeros(4, dtype=bool), {}, self.c, 0.05)
        assert np.array_equal(got, self.theta)

    def test_partial_mask_updates_only_recovered(self):
        wt = self.w @ self.theta
        mask = np.array([True, False, True, False])
        blocks = {0: wt[0:2], 2: wt[4:6]}
        got = partial_gd_step(self.theta, mask, blocks, self.c, 0.05)
        assert np.allclose(got[0:2], self.theta[0:2] - 0.05 * (wt[0:2] - self.c[0:2]))
        assert np.array_equal(got[2:4], self.theta[2:4])
        assert np.allclose(got[4:6], self.theta[4:6] - 0.05 * (wt[4:6] - self.c[4:6]))
        assert np.array_equal(got[6:8], self.theta[6:8])

    def test_mask_blocks_mismatch(self):
        with pytest.raises(ValueError, match="do not match"):
            partial_gd_step(
                self.theta, np.array([True, False, False, False]), {}, self.c, 0.05
            )

    def test_indivisible_dimension(self):
        with pytest.raises(ValueError, match="divisible"):
            partial_gd_step(self.theta, np.zeros(3, dtype=bool), {}, self.c, 0.05)


class TestTrain:
    def test_zero_tolerance_matches_centralized(self):
        ds = generate_dataset(200, 40, np.random.default_rng(31))
        result = train(
            ds,
            lambda rng: build_rcs(8, [1, 2], rng),
            q=0.0,
            model=MODEL,
            eta=0.1,
            iterations=30,
            seed=5,
        )
        reference = centralized_gd(ds, eta=0.1, iterations=30)
        assert np.allclose(result.losses, reference.losses, rtol=1e-12, atol=1e-12)
        assert np.allclose(result.theta, reference.theta, atol=1e-12)

    def test_loss_decreases(self):
        ds = generate_dataset(300, 40, np.random.default_rng(33))
        result = train(
            ds,
            lambda rng: build_rcs(8, [1, 2, 3], rng),
            q=0.25,
            model=MODEL,
            eta=0.1,
            iterations=40,
            seed=9,
        )
        assert result.losses[-1] < result.losses[0]

    def test_full_tolerance_never_updates(self):
        ds = generate_dataset(100, 16, np.random.default_rng(35))
        result = train(
            ds, build_uc_mmc(4, 2), q=1.0, model=MODEL, eta=0.1, iterations=5, seed=1
        )
        initial = loss(ds, np.zeros(16))
        assert np.allclose(result.losses, initial)
        assert np.array_equal(result.theta, np.zeros(16))
        assert np.all(result.recovered_fraction == 0.0)

    def test_reproducible(self):
        ds = generate_dataset(100, 16, np.random.default_rng(37))
        kwargs = dict(q=0.25, model=MODEL, eta=0.1, iterations=10, seed=4)
        a = train(ds, lambda rng: build_rcs(4, [1, 2], rng), **kwargs)
        b = train(ds, lambda rng: build_rcs(4, [1, 2], rng), **kwargs)
        assert np.array_equal(a.losses, b.losses)
        assert np.array_equal(a.times, b.times)

    def test_exact_sum_scheme_rejected(self):
        ds = generate_dataset(50, 16, np.random.default_rng(39))
        with pytest.raises(ValueError, match="matrix-vector"):
            train(ds, build_gc(4, 2), q=0.0, model=MODEL, eta=0.1, iterations=3, seed=0)

    def test_dimension_must_split(self):
        ds = generate_dataset(50, 10, np.random.default_rng(41))
        with pytest.raises(ValueError, match="divisible"):
            train(
                ds, build_uc_mmc(4, 2), q=0.0, model=MODEL, eta=0.1, iterations=3, seed=0
            )

    def test_times_follow_simulation(self):
        ds = generate_dataset(100, 16, np.random.default_rng(43))
        result = train(
            ds, build_uc_mmc(4, 2), q=0.0, model=MODEL, eta=0.1, iterations=20, seed=2
        )
        assert np.all(result.times >= MODEL.alpha)
        assert result.total_time == pytest.approx(float(np.sum(result.times)))
