import numpy as np
import pytest

from hypersvm.classifier import decide
from hypersvm.data import LabeledDataset
from hypersvm.errors import ValidationError
from hypersvm.multiclass import (
    OvaModel,
    ova_predict,
    ova_scores,
    ova_train,
    platt_apply,
    platt_fit,
)
from hypersvm.solver import TrainConfig
from hypersvm.synth import GaussianMixtureSpec, gen_gaussian_mixture, gen_separated_pair

FAST = TrainConfig(C=10.0, max_iters=500, tol=1e-7)


class TestPlattFit:
    def test_separated_scores_give_negative_A(self, rng):
        scores = np.concatenate([rng.uniform(1, 2, 20), rng.uniform(-2, -1, 20)])
        labels = np.concatenate([np.ones(20), -np.ones(20)])
        A, _ = platt_fit(scores, labels)
        assert A < 0

    def test_negation_symmetry(self, rng):
        scores = rng.normal(size=40)
        labels = np.where(rng.random(40) < 0.4, 1.0, -1.0)
        A, B = platt_fit(scores, labels)
        A2, B2 = platt_fit(-scores, -labels)
        s = np.linspace(-3, 3, 50)
        assert np.abs(platt_apply(A2, B2, -s) - (1 - platt_apply(A, B, s))).max() <= 1e-6

    def test_balanced_symmetric_scores(self):
        scores = np.array([-2.0, -1.0, -0.5, 0.5, 1.0, 2.0])
        labels = np.array([-1, -1, -1, 1, 1, 1])
        A, B = platt_fit(scores, labels)
        assert platt_apply(A, B, 0.0) == pytest.approx(0.5, abs=1e-6)

    def test_all_same_label(self):
        with pytest.raises(ValidationError):
            platt_fit([1.0, 2.0], [1, 1])


def toy_multilabel_dataset():
    ds = gen_gaussian_mixture(GaussianMixtureSpec(num_classes=2, points_per_class=20, seed=3))
    labels = np.column_stack([ds.labels, np.zeros((ds.n_points, 1), dtype=bool)])
    labels[0, :2] = True  # one point with two labels
    return LabeledDataset(
        points=ds.points,
        model_tag="ball",
        class_ids=["a", "b", "empty"],
        labels=labels,
    )


class TestOvaTrain:
    def test_separable_binary_accuracy(self):
        ds = gen_separated_pair(separation=6.0, variance=0.25, seed=9)
        model = ova_train(ds, FAST, "hyperbolic")
        pts = ds.to_hyperboloid()
        for k in range(2):
            y = ds.binary_labels(k)
            assert np.mean(decide(model.weights[k], pts) == y) == 1.0

    def test_structure_four_classes(self):
        ds = gen_gaussian_mixture(
            GaussianMixtureSpec(num_classes=4, points_per_class=15, seed=1)
        )
        model = ova_train(ds, FAST, "hyperbolic")
        assert len(model.weights) == 4
        assert len(model.platt) == 4
        assert all(w is not None for w in model.weights)
        assert all(p is not None for p in model.platt)

    def test_multilabel_point_is_positive_for_both(self):
        ds = toy_multilabel_dataset()
        assert ds.binary_labels(0)[0] == 1.0
        assert ds.binary_labels(1)[0] == 1.0

    def test_empty_class_excluded_with_flag(self):
        ds = toy_multilabel_dataset()
        model = ova_train(ds, FAST, "euclidean")
        assert model.excluded == ["empty"]
        assert model.weights[2] is None
        probs = ova_predict(model, ds)
        assert np.all(probs[:, 2] == 0.0)

    def test_class_order_independence(self):
        ds = gen_gaussian_mixture(
            GaussianMixtureSpec(num_classes=3, points_per_class=15, seed=4)
        )
        model = ova_train(ds, FAST, "hyperbolic")
        reordered = LabeledDataset(
            points=ds.points,
            model_tag="ball",
            class_ids=[ds.class_ids[i] for i in (2, 0, 1)],
            labels=ds.labels[:, (2, 0, 1)],
        )
        model2 = ova_train(reordered, FAST, "hyperbolic")
        for k, cid in enumerate(ds.class_ids):
            k2 = reordered.class_ids.index(cid)
            assert np.array_equal(model.weights[k], model2.weights[k2])
            assert model.platt[k] == model2.platt[k2]

    def test_unknown_geometry(self):
        with pytest.raises(ValidationError):
            ova_train(toy_multilabel_dataset(), FAST, "spherical")


@pytest.fixture(scope="module")
def fitted():
    ds = gen_gaussian_mixture(
        GaussianMixtureSpec(num_classes=3, points_per_class=30, seed=8)
    )
    return ds, ova_train(ds, FAST, "hyperbolic")


class TestOvaPredict:
    def test_probabilities_in_unit_interval(self, fitted):
        ds, model = fitted
        probs = ova_predict(model, ds)
        assert np.all(np.isfinite(probs))
        assert np.all((probs > 0) & (probs < 1))

    def test_monotone_in_raw_score(self, fitted):
        ds, model = fitted
        scores = ova_scores(model, ds)
        probs = ova_predict(model, ds)
        for k in range(3):
            order = np.argsort(scores[:, k])
            assert np.all(np.diff(probs[order, k]) >= 0)

    def test_true_class_usually_wins(self):
        ds = gen_gaussian_mixture(
            GaussianMixtureSpec(
                num_classes=2, points_per_class=50, centroid_variance=3.0,
                component_variance=0.25, seed=21,
            )
        )
        model = ova_train(ds, FAST, "hyperbolic")
        probs = ova_predict(model, ds)
        correct = np.argmax(probs, axis=1) == np.argmax(ds.labels, axis=1)
        assert np.mean(correct) >= 0.95

    def test_dimension_mismatch(self, fitted):
        _, model = fitted
        bad = LabeledDataset(
            points=np.zeros((2, 3)),
            model_tag="ball",
            class_ids=["a"],
            labels=np.ones((2, 1), dtype=bool),
        )
        with pytest.raises(ValidationError):
            ova_predict(model, bad)


class TestModelSerialization:
    def test_round_trip(self):
        ds = gen_separated_pair(points_per_class=20, seed=2)
        model = ova_train(ds, FAST, "euclidean")
        doc = model.to_file_dict()
        back = OvaModel.from_file_dict(doc)
        assert back.class_ids == model.class_ids
        assert back.geometry_tag == "euclidean"
        for k in range(2):
            assert np.array_equal(back.weights[k], model.weights[k])
            assert back.platt[k] == model.platt[k]
