"""Precision-recall / ROC evaluation and the cross-validation harness.

AUPR uses the average-precision (step interpolation) definition; AUROC
is the Mann-Whitney pair-ordering statistic with ties counted as half.
Cross-validation performs stratified-as-possible fold splits, selects
the misclassification tradeoff C per fold by an inner two-fold loop,
and keeps fold memberships identical across methods so paired tests
are meaningful.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import stdtr
from scipy.stats import rankdata

from hypersvm.errors import ValidationError
from hypersvm.multiclass import ova_predict, ova_scores, ova_train
from hypersvm.solver import TrainConfig


def _as_binary(labels):
    y = np.asarray(labels)
    return y > 0


def aupr(scores, labels, seed=0):
    """Average precision of ranking positives above negatives.

    Ties are broken by a deterministic pre-shuffle keyed by ``seed`` so
    the value is reproducible without favoring either tie order.
    """
    s = np.asarray(scores, dtype=float)
    pos = _as_binary(labels)
    n_pos = int(np.sum(pos))
    if n_pos == 0 or n_pos == pos.size:
        raise ValidationError("AUPR needs at least one positive and one negative")
    perm = np.random.default_rng(seed).permutation(s.size)
    s, pos = s[perm], pos[perm]
    order = np.argsort(-s, kind="stable")
    hits = pos[order]
    cum_pos = np.cumsum(hits)
    ranks = np.arange(1, s.size + 1)
    precision = cum_pos / ranks
    return float(np.sum(precision[hits]) / n_pos)


def auroc(scores, labels):
    """Probability that a random positive outranks a random negative."""
    s = np.asarray(scores, dtype=float)
    pos = _as_binary(labels)
    n_pos = int(np.sum(pos))
    n_neg = int(pos.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise ValidationError("AUROC needs at least one positive and one negative")
    ranks = rankdata(s)
    return float((np.sum(ranks[pos]) - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg))


@dataclass
class EvalReport:
    """Per-class and aggregate ranking metrics on one holdout set."""

    per_class_aupr: list
    macro_aupr: float
    micro_aupr: float
    per_class_auroc: list
    macro_auroc: float
    excluded_classes: list
    class_ids: list = field(default_factory=list)

    def to_file_dict(self):
        return {
            "format": "hypersvm-report",
            "class_ids": list(self.class_ids),
            "per_class_aupr": list(self.per_class_aupr),
            "macro_aupr": self.macro_aupr,
            "micro_aupr": self.micro_aupr,
            "per_class_auroc": list(self.per_class_auroc),
            "macro_auroc": self.macro_auroc,
            "excluded_classes": list(self.excluded_classes),
        }


def evaluate(model, holdout, seed=0):
    """Score a fitted one-vs-all model on a labeled holdout set.

    Classes with no trained weights or with only one label value in the
    holdout are excluded from the macro averages and listed in
    ``excluded_classes``.
    """
    if holdout.n_points == 0:
        raise ValidationError("empty holdout set")
    probs = ova_predict(model, holdout)
    per_aupr, per_auroc, included, excluded = [], [], [], []
    for k, cid in enumerate(model.class_ids):
        y = holdout.labels[:, k]
        if model.weights[k] is None or model.platt[k] is None:
            excluded.append(cid)
            continue
        if not y.any() or y.all():
            excluded.append(cid)
            continue
        per_aupr.append(aupr(probs[:, k], y, seed))
        per_auroc.append(auroc(probs[:, k], y))
        included.append(k)
    if not included:
        raise ValidationError("every class excluded from evaluation")
    flat_scores = probs[:, included].ravel(order="F")
    flat_labels = holdout.labels[:, included].ravel(order="F")
    return EvalReport(
        per_class_aupr=per_aupr,
        macro_aupr=float(np.mean(per_aupr)),
        micro_aupr=aupr(flat_scores, flat_labels, seed),
        per_class_auroc=per_auroc,
        macro_auroc=float(np.mean(per_auroc)),
        excluded_classes=excluded,
        class_ids=[model.class_ids[k] for k in included],
    )


def make_folds(labels, n_folds, rng):
    """Greedy stratified partition of points into n_folds folds.

    Visits points in random order and assigns each to the non-full fold
    that currently holds the fewest members of that point's classes, so
    small classes stay represented in every fold.
    """
    labels = np.asarray(labels, dtype=bool)
    n = labels.shape[0]
    if n < n_folds:
        raise ValidationError("fewer points than folds")
    cap = -(-n // n_folds)
    counts = np.zeros((n_folds, labels.shape[1]))
    sizes = np.zeros(n_folds, dtype=int)
    fold = np.empty(n, dtype=int)
    for j in rng.permutation(n):
        best = None
        for f in range(n_folds):
            if sizes[f] >= cap:
                continue
            key = (counts[f, labels[j]].sum(), sizes[f], f)
            if best is None or key < best[0]:
                best = (key, f)
        f = best[1]
        fold[j] = f
        sizes[f] += 1
        counts[f, labels[j]] += 1
    return fold


def _macro_aupr_raw(scores, labels, seed=0):
    """Macro AUPR from raw (uncalibrated) scores; skips unusable classes."""
    vals = []
    for k in range(labels.shape[1]):
        col = scores[:, k]
        y = labels[:, k]
        if np.any(np.isnan(col)) or not y.any() or y.all():
            continue
        vals.append(aupr(col, y, seed))
    return float(np.mean(vals)) if vals else 0.0


@dataclass
class CvResult:
    """Cross-validation summary for one method."""

    per_trial: list
    mean: float
    std: float
    chosen_C: list

    def to_file_dict(self):
        return {
            "per_trial_macro_aupr": list(self.per_trial),
            "mean": self.mean,
            "std": self.std,
            "chosen_C": list(self.chosen_C),
        }


def _derive_seed(*parts):
    return int(np.random.SeedSequence(list(parts)).generate_state(1, np.uint64)[0] >> 1)


def _with(config, C, seed):
    return TrainConfig(
        C=C,
        max_iters=config.max_iters,
        step_size=config.step_size,
        step_decay=config.step_decay,
        feas_eps=config.feas_eps,
        tol=config.tol,
        seed=seed,
    )


def select_C(train, c_grid, method, config, rng_seed, eval_seed=0):
    """Pick C from the grid by inner two-fold macro AUPR on raw scores."""
    inner = make_folds(train.labels, 2, np.random.default_rng(rng_seed))
    best_C, best_val = None, -np.inf
    for C in c_grid:
        vals = []
        for g in (0, 1):
            fit = train.subset(inner != g)
            held = train.subset(inner == g)
            model = ova_train(
                fit, _with(config, C, rng_seed), method, calibrate=False
            )
            vals.append(
                _macro_aupr_raw(ova_scores(model, held), held.labels, eval_seed)
            )
        val = float(np.mean(vals))
        if val > best_val:
            best_C, best_val = C, val
    return best_C


def cross_validate(
    dataset,
    c_grid,
    methods=("hyperbolic", "euclidean"),
    folds=2,
    trials=5,
    seed=0,
    config=None,
):
    """Repeated k-fold cross validation with nested C selection.

    Returns one CvResult per method. Fold memberships are derived only
    from (seed, trial), so all methods see identical splits and their
    per-trial scores form proper pairs.
    """
    if folds < 2:
        raise ValidationError("folds must be at least 2")
    if config is None:
        config = TrainConfig()
    per_trial = {m: [] for m in methods}
    chosen = {m: [] for m in methods}
    for trial in range(trials):
        fold = make_folds(
            dataset.labels, folds, np.random.default_rng(_derive_seed(seed, trial))
        )
        fold_scores = {m: [] for m in methods}
        for f in range(folds):
            train = dataset.subset(fold != f)
            hold = dataset.subset(fold == f)
            inner_seed = _derive_seed(seed, trial, f)
            for m in methods:
                best_C = select_C(train, c_grid, m, config, inner_seed, seed)
                model = ova_train(train, _with(config, best_C, inner_seed), m)
                report = evaluate(model, hold, seed)
                fold_scores[m].append(report.macro_aupr)
                chosen[m].append(best_C)
        for m in methods:
            per_trial[m].append(float(np.mean(fold_scores[m])))
    out = {}
    for m in methods:
        vals = np.asarray(per_trial[m])
        out[m] = CvResult(
            per_trial=list(vals),
            mean=float(np.mean(vals)),
            std=float(np.std(vals, ddof=1)) if vals.size > 1 else 0.0,
            chosen_C=chosen[m],
        )
    return out


def paired_t_test(differences):
    """One-sided paired t-test for mean(differences) > 0.

    Returns (t statistic, p value). Requires at least two pairs and a
    nonzero spread.
    """
    d = np.asarray(differences, dtype=float)
    if d.size < 2:
        raise ValidationError("paired t-test needs at least two differences")
    sd = float(np.std(d, ddof=1))
    if sd <= 1e-12 * max(1.0, float(np.abs(d).max())):
        raise ValidationError("zero variance in paired differences")
    t = float(np.mean(d) / (sd / np.sqrt(d.size)))
    p = float(stdtr(d.size - 1, -t))
    return t, p
