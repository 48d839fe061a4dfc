"""One-vs-all multi-class training with Platt-scaled probability outputs.

Each class gets an independent binary classifier (class members against
the rest) in either the hyperbolic or the Euclidean geometry, plus a
two-parameter sigmoid mapping raw decision scores to probabilities. The
sigmoid is fitted on out-of-fold scores from an internal two-fold split
of the training data so that no holdout labels leak into calibration.
"""

import zlib
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from hypersvm.data import LabeledDataset
from hypersvm.errors import ValidationError
from hypersvm.solver import TrainConfig, euclidean_svm_train, hsvm_train

GEOMETRY_TAGS = ("hyperbolic", "euclidean")


def platt_fit(scores, labels, max_iters=200, grad_tol=1e-10):
    """Fit (A, B) of P(y=+1 | s) = 1 / (1 + exp(A*s + B)).

    Minimizes the negative log-likelihood with smoothed targets
    (N+ + 1)/(N+ + 2) and 1/(N- + 2) by damped Newton iterations with
    step halving. Labels may be {+1, -1}, {1, 0} or boolean.
    """
    s = np.asarray(scores, dtype=float)
    pos = np.asarray(labels) > 0
    n_pos = int(np.sum(pos))
    n_neg = int(pos.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise ValidationError("degenerate calibration: need both labels present")
    t = np.where(pos, (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0))

    def nll(a, b):
        f = a * s + b
        return float(np.sum(t * f + np.logaddexp(0.0, -f)))

    A = 0.0
    B = float(np.log((n_neg + 1.0) / (n_pos + 1.0)))
    obj = nll(A, B)
    for _ in range(max_iters):
        f = A * s + B
        p = expit(-f)
        d = t - p
        g = np.array([np.sum(d * s), np.sum(d)])
        if np.linalg.norm(g) <= grad_tol:
            break
        q = p * (1.0 - p)
        hess = np.array(
            [[np.sum(q * s * s), np.sum(q * s)], [np.sum(q * s), np.sum(q)]]
        )
        hess[0, 0] += 1e-12
        hess[1, 1] += 1e-12
        step = np.linalg.solve(hess, -g)
        # halve until the objective decreases
        scale = 1.0
        for _ in range(20):
            new_obj = nll(A + scale * step[0], B + scale * step[1])
            if new_obj < obj + 1e-15:
                break
            scale *= 0.5
        A += scale * step[0]
        B += scale * step[1]
        obj = nll(A, B)
    return float(A), float(B)


def platt_apply(A, B, scores):
    """Calibrated probabilities, numerically safe for large |scores|."""
    return expit(-(A * np.asarray(scores, dtype=float) + B))


@dataclass
class OvaModel:
    """Per-class weights and Platt parameters for one geometry."""

    geometry_tag: str
    class_ids: list
    dim: int
    weights: list = field(repr=False)
    platt: list = field(repr=False)
    flagged: list = field(default_factory=list)
    excluded: list = field(default_factory=list)

    def to_file_dict(self):
        return {
            "format": "hypersvm-model",
            "geometry": self.geometry_tag,
            "dim": self.dim,
            "class_ids": list(self.class_ids),
            "weights": [None if w is None else w for w in self.weights],
            "platt": [None if p is None else list(p) for p in self.platt],
            "flagged": list(self.flagged),
            "excluded": list(self.excluded),
        }

    @classmethod
    def from_file_dict(cls, doc):
        if doc.get("format") != "hypersvm-model":
            raise ValidationError("not a hypersvm model file")
        return cls(
            geometry_tag=doc["geometry"],
            class_ids=list(doc["class_ids"]),
            dim=int(doc["dim"]),
            weights=[
                None if w is None else np.asarray(w, dtype=float)
                for w in doc["weights"]
            ],
            platt=[None if p is None else (p[0], p[1]) for p in doc["platt"]],
            flagged=list(doc.get("flagged", [])),
            excluded=list(doc.get("excluded", [])),
        )


def _class_seed(base_seed, class_id):
    # stable across runs and class orderings
    return (int(base_seed) * 2654435761 + zlib.crc32(str(class_id).encode())) % 2**63


def _train_binary(features, y, config, geometry_tag):
    if geometry_tag == "hyperbolic":
        w, _ = hsvm_train(features, y, config)
        return w
    return euclidean_svm_train(features, y, config.C, config)


def _binary_scores(features, w, geometry_tag):
    if geometry_tag == "hyperbolic":
        flipped = features.copy()
        flipped[:, 1:] *= -1.0
        return flipped @ w
    return np.hstack([features, np.ones((features.shape[0], 1))]) @ w


def _features(dataset, geometry_tag):
    # hyperbolic classifiers live on ambient hyperboloid coordinates;
    # the Euclidean baseline reads the embedding as plain ball coordinates
    if geometry_tag == "hyperbolic":
        return dataset.to_hyperboloid()
    return dataset.to_ball()


def _stratified_halves(y, rng):
    """Two folds balancing positives and negatives."""
    fold = np.empty(y.shape[0], dtype=int)
    for mask in (y > 0, y <= 0):
        idx = np.flatnonzero(mask)
        rng.shuffle(idx)
        fold[idx] = np.arange(idx.size) % 2
    return fold


def ova_train(dataset, config, geometry_tag, calibrate=True):
    """Train one binary classifier plus calibration per class.

    Classes with no positive example are skipped (recorded in
    ``excluded``); classes with a single positive are trained but
    recorded in ``flagged``. With ``calibrate=False`` the Platt step is
    skipped and raw scores must be used for ranking only.
    """
    if geometry_tag not in GEOMETRY_TAGS:
        raise ValidationError(f"unknown geometry tag {geometry_tag!r}")
    if dataset.n_classes < 1:
        raise ValidationError("dataset declares no classes")
    feats = _features(dataset, geometry_tag)
    weights, platt, flagged, excluded = [], [], [], []
    for k, cid in enumerate(dataset.class_ids):
        y = dataset.binary_labels(k)
        n_pos = int(np.sum(y > 0))
        if n_pos == 0:
            weights.append(None)
            platt.append(None)
            excluded.append(cid)
            continue
        if n_pos < 2 or n_pos == y.size:
            flagged.append(cid)
        cfg = TrainConfig(
            C=config.C,
            max_iters=config.max_iters,
            step_size=config.step_size,
            step_decay=config.step_decay,
            feas_eps=config.feas_eps,
            tol=config.tol,
            seed=_class_seed(config.seed, cid),
        )
        w = _train_binary(feats, y, cfg, geometry_tag)
        weights.append(w)
        if not calibrate:
            platt.append(None)
            continue
        if n_pos == y.size:
            # no negatives: scores are unrankable, emit no calibration
            platt.append(None)
            continue
        rng = np.random.default_rng(cfg.seed)
        fold = _stratified_halves(y, rng)
        oof = np.empty(y.size)
        for f in (0, 1):
            train_idx = fold != f
            wf = _train_binary(feats[train_idx], y[train_idx], cfg, geometry_tag)
            oof[fold == f] = _binary_scores(feats[fold == f], wf, geometry_tag)
        platt.append(platt_fit(oof, y))
    if len(excluded) == len(dataset.class_ids):
        raise ValidationError("every class is empty; nothing to train")
    return OvaModel(
        geometry_tag=geometry_tag,
        class_ids=list(dataset.class_ids),
        dim=dataset.dim,
        weights=weights,
        platt=platt,
        flagged=flagged,
        excluded=excluded,
    )


def ova_scores(model, dataset):
    """Raw per-class decision scores, NaN for excluded classes."""
    if dataset.dim != model.dim:
        raise ValidationError(
            f"dimension mismatch: model dim {model.dim}, data dim {dataset.dim}"
        )
    feats = _features(dataset, model.geometry_tag)
    out = np.full((dataset.n_points, len(model.class_ids)), np.nan)
    for k, w in enumerate(model.weights):
        if w is not None:
            out[:, k] = _binary_scores(feats, w, model.geometry_tag)
    return out


def ova_predict(model, dataset):
    """Per-class calibrated probability matrix.

    Rows are points, columns classes; entries are independent one-vs-all
    probabilities (they do not sum to 1). Excluded or uncalibrated
    classes emit a constant 0.
    """
    scores = ova_scores(model, dataset)
    probs = np.zeros_like(scores)
    for k, p in enumerate(model.platt):
        if p is not None and model.weights[k] is not None:
            probs[:, k] = platt_apply(p[0], p[1], scores[:, k])
    return probs
