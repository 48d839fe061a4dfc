"""Soft-margin SVM training: hyperbolic (projected gradient) and Euclidean.

The hyperbolic solver minimizes

    -1/2 w*w + C * sum_j max(0, arsinh(1) - arsinh(y_j (w*x_j)))

over ambient vectors with w*w < 0, by projected gradient descent warm
started from a Euclidean soft-margin SVM trained on the raw ambient
coordinates. The Euclidean trainer is a deterministic full-batch
subgradient method on the standard hinge objective with the bias handled
by appending a constant-1 feature.
"""

from dataclasses import dataclass, field

import numpy as np

from hypersvm.classifier import ASINH_ONE
from hypersvm.errors import NumericalError, ValidationError
from hypersvm.geometry import minkowski_inner

# Consecutive iterations with relative objective change below tol needed
# to stop early.
_STALL_ITERS = 10


@dataclass
class TrainConfig:
    """Hyperparameters shared by both trainers."""

    C: float = 1.0
    max_iters: int = 10000
    step_size: float = 0.01
    step_decay: float = 0.01
    feas_eps: float = 1e-8
    tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.C <= 0 or self.max_iters <= 0 or self.step_size <= 0:
            raise ValidationError("C, max_iters and step_size must be positive")
        if not 0 < self.step_decay <= 1:
            raise ValidationError("step_decay must lie in (0, 1]")
        if self.feas_eps <= 0 or self.tol <= 0:
            raise ValidationError("feas_eps and tol must be positive")


@dataclass
class TrainReport:
    """Optimization trace for one binary training run."""

    final_objective: float
    iterations_used: int
    objective_trace: list = field(repr=False)
    warm_start_objective: float = float("nan")


def _mink_flip(a):
    """Apply the Minkowski metric: negate the spatial coordinates."""
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def hsvm_objective(w, points, y, C):
    """Hyperbolic soft-margin objective at w.

    ``points`` is an (m, n+1) matrix of hyperboloid points, ``y`` holds
    labels in {+1, -1}.
    """
    w = np.asarray(w, dtype=float)
    if minkowski_inner(w, w) >= 0:
        raise ValidationError("infeasible weights: w*w must be negative")
    scores = np.asarray(points, dtype=float) @ _mink_flip(w)
    z = np.asarray(y) * scores
    hinge = np.maximum(0.0, ASINH_ONE - np.arcsinh(z))
    return -0.5 * float(minkowski_inner(w, w)) + C * float(np.sum(hinge))


def hsvm_gradient(w, points, y, C):
    """Gradient of hsvm_objective with respect to w.

    At hinge kinks (y_j w*x_j = 1 exactly) the inactive branch is used,
    i.e. this is a subgradient.
    """
    w = np.asarray(w, dtype=float)
    if minkowski_inner(w, w) >= 0:
        raise ValidationError("infeasible weights: w*w must be negative")
    points = np.asarray(points, dtype=float)
    y = np.asarray(y, dtype=float)
    flipped = _mink_flip(points)
    z = y * (flipped @ w)
    grad = -_mink_flip(w)
    active = z < 1.0
    if np.any(active):
        coef = -C * y[active] / np.sqrt(1.0 + z[active] ** 2)
        grad += coef @ flipped[active]
    return grad


def project_feasible(w, feas_eps):
    """Project w onto {w : w*w <= -feas_eps} by shrinking the time part.

    If the spatial part itself is too small to dominate, it is inflated
    to squared norm 2*feas_eps (along the first spatial axis when zero).
    """
    if feas_eps <= 0:
        raise ValidationError("feas_eps must be positive")
    w = np.array(w, dtype=float, copy=True)
    if minkowski_inner(w, w) <= -feas_eps:
        return w
    spatial_sq = float(np.sum(w[1:] ** 2))
    if spatial_sq <= feas_eps:
        if spatial_sq == 0.0:
            w[1] = np.sqrt(2.0 * feas_eps)
        else:
            w[1:] *= np.sqrt(2.0 * feas_eps / spatial_sq)
        spatial_sq = 2.0 * feas_eps
    w0 = np.sqrt(max(spatial_sq - feas_eps, 0.0))
    # sqrt/square rounding can leave w*w an ulp short of the bound when
    # the spatial norm is large; back off until the guarantee holds
    while w0 * w0 - spatial_sq > -feas_eps * (1.0 - 1e-9):
        w0 = np.nextafter(w0, 0.0)
    w[0] = np.sign(w[0]) * w0
    return w


def _euclidean_objective(w, feats, y, C):
    margins = y * (feats @ w)
    return 0.5 * float(w @ w) + C * float(np.sum(np.maximum(0.0, 1.0 - margins)))


def euclidean_svm_train(features, y, C, config=None):
    """Euclidean soft-margin SVM by full-batch subgradient descent.

    A constant-1 feature is appended to carry the bias; the returned
    weight vector includes the bias coordinate as its last entry. The
    iterate with the lowest objective is returned.
    """
    if config is None:
        config = TrainConfig(C=C)
    features = np.atleast_2d(np.asarray(features, dtype=float))
    y = np.asarray(y, dtype=float)
    if features.shape[0] == 0:
        raise ValidationError("empty dataset")
    if features.shape[0] != y.shape[0]:
        raise ValidationError("feature/label count mismatch")
    feats = np.hstack([features, np.ones((features.shape[0], 1))])
    w = np.zeros(feats.shape[1])
    best_w = w.copy()
    best_obj = _euclidean_objective(w, feats, y, C)
    prev_obj = best_obj
    stall = 0
    for t in range(config.max_iters):
        margins = y * (feats @ w)
        viol = margins < 1.0
        grad = w.copy()
        if np.any(viol):
            grad -= C * (y[viol] @ feats[viol])
        norm = np.linalg.norm(grad)
        if norm == 0.0:
            break
        # normalized subgradient step: keeps the schedule scale-free
        alpha = config.step_size / (1.0 + config.step_decay * t)
        w = w - alpha * grad / norm
        obj = _euclidean_objective(w, feats, y, C)
        if not np.isfinite(obj):
            raise NumericalError(f"non-finite Euclidean objective at iteration {t}")
        if obj < best_obj:
            best_obj, best_w = obj, w.copy()
        if abs(obj - prev_obj) <= config.tol * max(1.0, abs(prev_obj)):
            stall += 1
            if stall >= _STALL_ITERS:
                break
        else:
            stall = 0
        prev_obj = obj
    return best_w


def warm_start_from_euclidean(w_euc, ambient_dim, feas_eps=1e-8):
    """Map Euclidean ambient-space weights to feasible hyperbolic weights.

    Drops the trailing bias weight, flips the sign of the spatial
    coordinates so that w*x equals the Euclidean dot product on ambient
    coordinates, and projects onto the feasible set.
    """
    w_euc = np.asarray(w_euc, dtype=float)
    if w_euc.shape[0] != ambient_dim + 1:
        raise ValidationError(
            f"expected {ambient_dim + 1} Euclidean weights (incl. bias), "
            f"got {w_euc.shape[0]}"
        )
    w = _mink_flip(w_euc[:ambient_dim])
    return project_feasible(w, feas_eps)


def hsvm_train(points, y, config):
    """Train a hyperbolic SVM; returns (weights, TrainReport).

    ``points`` is an (m, n+1) matrix of hyperboloid points, ``y`` labels
    in {+1, -1}. Projected gradient descent runs from the Euclidean warm
    start, stepping ``step_size / (1 + step_decay * t)`` along the
    normalized gradient, and returns the feasible iterate with the
    lowest objective seen.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    y = np.asarray(y, dtype=float)
    if points.shape[0] == 0:
        raise ValidationError("empty dataset")
    if points.shape[0] != y.shape[0]:
        raise ValidationError("point/label count mismatch")
    C = config.C

    w_euc = euclidean_svm_train(points, y, C, config)
    w = warm_start_from_euclidean(w_euc, points.shape[1], config.feas_eps)

    flipped = _mink_flip(points)

    def objective(wv):
        z = y * (flipped @ wv)
        quad = -0.5 * (wv[0] ** 2 - np.sum(wv[1:] ** 2))
        return quad + C * float(np.sum(np.maximum(0.0, ASINH_ONE - np.arcsinh(z))))

    warm_obj = objective(w)
    trace = [warm_obj]
    best_obj, best_w = warm_obj, w.copy()
    prev_obj = warm_obj
    stall = 0
    iters = 0
    for t in range(config.max_iters):
        z = y * (flipped @ w)
        grad = -_mink_flip(w)
        active = z < 1.0
        if np.any(active):
            coef = -C * y[active] / np.sqrt(1.0 + z[active] ** 2)
            grad += coef @ flipped[active]
        if not np.all(np.isfinite(grad)):
            raise NumericalError(f"non-finite gradient at iteration {t}")
        norm = np.linalg.norm(grad)
        if norm == 0.0:
            break
        alpha = config.step_size / (1.0 + config.step_decay * t)
        w = project_feasible(w - alpha * grad / norm, config.feas_eps)
        obj = objective(w)
        if not np.isfinite(obj):
            raise NumericalError(f"non-finite objective at iteration {t}")
        trace.append(obj)
        iters = t + 1
        if obj < best_obj:
            best_obj, best_w = obj, w.copy()
        if abs(obj - prev_obj) <= config.tol * max(1.0, abs(prev_obj)):
            stall += 1
            if stall >= _STALL_ITERS:
                break
        else:
            stall = 0
        prev_obj = obj
    report = TrainReport(
        final_objective=best_obj,
        iterations_used=iters,
        objective_trace=trace,
        warm_start_objective=warm_obj,
    )
    return best_w, report
