import numpy as np
import pytest

from conftest import random_feasible_w
from hypersvm.classifier import ASINH_ONE, decide
from hypersvm.errors import ValidationError
from hypersvm.geometry import ball_to_hyperboloid, minkowski_inner
from hypersvm.solver import (
    TrainConfig,
    euclidean_svm_train,
    hsvm_gradient,
    hsvm_objective,
    hsvm_train,
    project_feasible,
    warm_start_from_euclidean,
)
from hypersvm.synth import gen_separated_pair

W_AXIS = np.array([0.0, 1.0, 0.0])
X_NEG = np.array([[np.cosh(1.0), -np.sinh(1.0), 0.0]])
BASE = np.array([[1.0, 0.0, 0.0]])


class TestObjective:
    def test_inactive_hinge(self):
        # margin arsinh(sinh 1) > arsinh(1): only the quadratic term remains
        assert hsvm_objective(W_AXIS, X_NEG, [1.0], 1.0) == pytest.approx(0.5)

    def test_point_on_boundary(self):
        expected = 0.5 + ASINH_ONE
        assert hsvm_objective(W_AXIS, BASE, [1.0], 1.0) == pytest.approx(expected)

    def test_zero_C_ignores_data(self, rng):
        pts = ball_to_hyperboloid(rng.uniform(-0.5, 0.5, (20, 2)))
        y = np.where(rng.random(20) < 0.5, 1.0, -1.0)
        w = random_feasible_w(rng)
        assert hsvm_objective(w, pts, y, 0.0) == pytest.approx(
            -0.5 * minkowski_inner(w, w)
        )

    def test_infeasible_weights(self):
        with pytest.raises(ValidationError):
            hsvm_objective(np.array([1.0, 0, 0]), BASE, [1.0], 1.0)


class TestGradient:
    def test_quadratic_term_only(self):
        grad = hsvm_gradient(W_AXIS, BASE, [1.0], 0.0)
        assert np.allclose(grad, [0.0, 1.0, 0.0])

    def test_inactive_hinge_contributes_nothing(self):
        grad = hsvm_gradient(W_AXIS, X_NEG, [1.0], 5.0)
        assert np.allclose(grad, [0.0, 1.0, 0.0])

    def test_matches_finite_differences(self, rng):
        checked = 0
        while checked < 100:
            w = random_feasible_w(rng)
            pts = ball_to_hyperboloid(rng.uniform(-0.6, 0.6, (8, 2)))
            y = np.where(rng.random(8) < 0.5, 1.0, -1.0)
            z = y * (pts[:, 0] * w[0] - pts[:, 1:] @ w[1:])
            if np.any(np.abs(z - 1.0) < 1e-3):
                continue
            grad = hsvm_gradient(w, pts, y, 1.0)
            fd = np.zeros(3)
            for i in range(3):
                e = np.zeros(3)
                e[i] = 1e-6
                fd[i] = (
                    hsvm_objective(w + e, pts, y, 1.0)
                    - hsvm_objective(w - e, pts, y, 1.0)
                ) / 2e-6
            rel = np.abs(grad - fd) / np.maximum(1.0, np.abs(fd))
            assert rel.max() <= 1e-5
            checked += 1


class TestProjection:
    def test_feasible_unchanged(self):
        w = np.array([0.0, 1.0, 0.0])
        assert np.array_equal(project_feasible(w, 1e-6), w)

    def test_time_component_clamped(self):
        w = project_feasible(np.array([2.0, 1.0, 0.0]), 1e-6)
        assert w[0] == pytest.approx(np.sqrt(1 - 1e-6))
        assert np.allclose(w[1:], [1.0, 0.0])

    def test_degenerate_spatial_part_inflated(self):
        w = project_feasible(np.array([1.0, 0.0, 0.0]), 1e-6)
        assert np.allclose(w[1:], [np.sqrt(2e-6), 0.0])
        assert w[0] == pytest.approx(np.sqrt(1e-6))

    def test_result_always_feasible(self, rng):
        for _ in range(200):
            w = rng.normal(size=4) * rng.choice([0.01, 1.0, 100.0])
            out = project_feasible(w, 1e-8)
            assert minkowski_inner(out, out) <= -1e-8 * (1 - 1e-9)


class TestEuclideanTrainer:
    def test_separable_1d(self):
        w = euclidean_svm_train(np.array([[2.0], [-2.0]]), [1.0, -1.0], 10.0)
        feats = np.array([[2.0, 1.0], [-2.0, 1.0]])
        assert np.all(np.sign(feats @ w) == [1.0, -1.0])

    def test_constant_labels(self):
        w = euclidean_svm_train(np.array([[1.0], [2.0]]), [1.0, 1.0], 1.0)
        feats = np.array([[1.0, 1.0], [2.0, 1.0]])
        hinge = np.maximum(0.0, 1.0 - feats @ w)
        assert hinge.max() <= 1e-2

    def test_empty_dataset(self):
        with pytest.raises(ValidationError):
            euclidean_svm_train(np.empty((0, 2)), [], 1.0)

    def test_near_optimal_vs_grid(self, rng):
        # fine grid over (weight, bias) on tiny 1-d problems
        for seed in range(5):
            r = np.random.default_rng(seed)
            x = r.normal(size=(12, 1))
            y = np.where(x[:, 0] + 0.3 * r.normal(size=12) > 0, 1.0, -1.0)
            C = 1.0
            w = euclidean_svm_train(x, y, C, TrainConfig(C=C, max_iters=20000))
            feats = np.hstack([x, np.ones((12, 1))])

            def obj(wv):
                return 0.5 * wv @ wv + C * np.sum(
                    np.maximum(0.0, 1.0 - y * (feats @ wv))
                )

            ws = np.linspace(-4, 4, 400)
            bs = np.linspace(-4, 4, 400)
            grid_best = min(
                obj(np.array([a, b])) for a in ws for b in bs
            )
            assert obj(w) <= grid_best * 1.01 + 1e-9


class TestWarmStart:
    def test_sign_flip(self):
        w = warm_start_from_euclidean(np.array([1.0, 2.0, 3.0, 0.7]), 3)
        # bias dropped, spatial signs flipped, already feasible
        assert np.allclose(w, [1.0, -2.0, -3.0])

    def test_defining_identity(self, rng):
        w_euc = np.array([0.5, 2.0, -1.0, 0.3])
        w = warm_start_from_euclidean(w_euc, 3)
        for _ in range(100):
            x = rng.normal(size=3)
            assert minkowski_inner(w, x) == pytest.approx(
                w_euc[:3] @ x, abs=1e-12
            )

    def test_projection_engages(self):
        w = warm_start_from_euclidean(np.array([1.0, 0.0, 0.0, 0.0]), 3)
        assert minkowski_inner(w, w) < 0

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            warm_start_from_euclidean(np.array([1.0, 2.0]), 3)


class TestHsvmTrain:
    def test_separable_clouds(self):
        ds = gen_separated_pair(separation=6.0, variance=0.25, seed=42)
        pts = ds.to_hyperboloid()
        y = ds.binary_labels(0)
        w, report = hsvm_train(pts, y, TrainConfig(C=10.0))
        assert np.mean(decide(w, pts) == y) == 1.0
        assert report.final_objective <= report.warm_start_objective

    def test_single_point(self):
        w, _ = hsvm_train(BASE, [1.0], TrainConfig(C=100.0))
        assert minkowski_inner(w, BASE[0]) > 0

    def test_returned_weights_feasible(self):
        ds = gen_separated_pair(points_per_class=30, seed=5)
        w, _ = hsvm_train(ds.to_hyperboloid(), ds.binary_labels(0), TrainConfig())
        assert minkowski_inner(w, w) <= -1e-8 * (1 - 1e-9)

    def test_deterministic_trace(self):
        ds = gen_separated_pair(points_per_class=30, seed=6)
        pts, y = ds.to_hyperboloid(), ds.binary_labels(0)
        cfg = TrainConfig(C=1.0, max_iters=500)
        _, r1 = hsvm_train(pts, y, cfg)
        _, r2 = hsvm_train(pts, y, cfg)
        assert r1.objective_trace == r2.objective_trace

    def test_empty_dataset(self):
        with pytest.raises(ValidationError):
            hsvm_train(np.empty((0, 3)), [], TrainConfig())


class TestConfigValidation:
    def test_rejects_nonpositive(self):
        with pytest.raises(ValidationError):
            TrainConfig(C=-1.0)
        with pytest.raises(ValidationError):
            TrainConfig(step_decay=0.0)
        with pytest.raises(ValidationError):
            TrainConfig(tol=0.0)
