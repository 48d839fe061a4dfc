"""Hyperbolic space models and the maps between them.

Three standard models are supported, all at curvature -1:

* hyperboloid: n+1 ambient Minkowski coordinates (x0, ..., xn) with
  x*x = 1 and x0 > 0, where * is the Minkowski inner product;
* ball: n coordinates inside the open unit ball;
* halfspace: n coordinates with the first one positive.

Points are numpy arrays; every function accepts a single point (1-d) or a
batch of points (2-d, one point per row) and broadcasts over the batch.
All functions are pure.
"""

import numpy as np

from hypersvm.errors import ValidationError

# Tolerance on the hyperboloid constraint x*x = 1.
MODEL_EPS = 1e-9
# Ball points with squared norm >= 1 - BOUNDARY_EPS are rejected as
# numerically ideal; conversions would overflow.
BOUNDARY_EPS = 1e-12


def minkowski_inner(u, v):
    """Minkowski inner product u0*v0 - u1*v1 - ... - un*vn.

    Broadcasts over leading axes; the last axis holds the ambient
    coordinates and must match between ``u`` and ``v``.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape[-1] != v.shape[-1]:
        raise ValidationError(
            f"ambient dimensions differ: {u.shape[-1]} vs {v.shape[-1]}"
        )
    if u.shape[-1] < 2:
        raise ValidationError("ambient dimension must be at least 2")
    return u[..., 0] * v[..., 0] - np.sum(u[..., 1:] * v[..., 1:], axis=-1)


def check_hyperboloid(x, eps=MODEL_EPS):
    """Raise unless x*x = 1 (within eps) and x0 > 0."""
    x = np.asarray(x, dtype=float)
    norms = minkowski_inner(x, x)
    if np.any(np.abs(norms - 1.0) > eps):
        raise ValidationError("point off the hyperboloid: |x*x - 1| > tolerance")
    if np.any(x[..., 0] <= 0):
        raise ValidationError("hyperboloid point must have x0 > 0")
    return x


def check_ball(b, eps=BOUNDARY_EPS):
    """Raise unless the point lies strictly inside the unit ball."""
    b = np.asarray(b, dtype=float)
    if np.any(np.sum(b * b, axis=-1) >= 1.0 - eps):
        raise ValidationError("ball point at or beyond the unit boundary")
    return b


def check_halfspace(h):
    """Raise unless the first coordinate is strictly positive."""
    h = np.asarray(h, dtype=float)
    if np.any(h[..., 0] <= 0):
        raise ValidationError("half-space point must have positive first coordinate")
    return h


def hyperboloid_to_ball(x):
    """Central projection of the hyperboloid onto the unit ball."""
    x = np.asarray(x, dtype=float)
    return x[..., 1:] / (1.0 + x[..., :1])


def ball_to_hyperboloid(b):
    """Lift a ball point back onto the hyperboloid."""
    b = check_ball(b)
    s = np.sum(b * b, axis=-1, keepdims=True)
    denom = 1.0 - s
    x0 = (1.0 + s) / denom
    return np.concatenate([x0, 2.0 * b / denom], axis=-1)


def ball_to_halfspace(b):
    """Circle inversion carrying the ball model to the half-space model."""
    b = np.asarray(b, dtype=float)
    s = np.sum(b * b, axis=-1, keepdims=True)
    denom = 1.0 + 2.0 * b[..., :1] + s
    if np.any(denom <= BOUNDARY_EPS):
        raise ValidationError("point at the inversion center (-1, 0, ..., 0)")
    return np.concatenate([1.0 - s, 2.0 * b[..., 1:]], axis=-1) / denom


def halfspace_to_ball(h):
    """Inverse of ball_to_halfspace; the inversion is an involution."""
    h = check_halfspace(h)
    s = np.sum(h * h, axis=-1, keepdims=True)
    denom = 1.0 + 2.0 * h[..., :1] + s
    return np.concatenate([1.0 - s, 2.0 * h[..., 1:]], axis=-1) / denom


def hyperboloid_to_halfspace(x):
    return ball_to_halfspace(hyperboloid_to_ball(x))


def halfspace_to_hyperboloid(h):
    return ball_to_hyperboloid(halfspace_to_ball(h))


def hyperbolic_distance(x, y):
    """Geodesic distance between two hyperboloid points, arcosh(x*y).

    Inner products marginally below 1 (round-off on coincident points)
    are clamped to 1; anything below 1 - 1e-9 means the inputs are not a
    valid hyperboloid pair.
    """
    ip = minkowski_inner(x, y)
    if np.any(ip < 1.0 - 1e-9):
        raise ValidationError("inner product below 1: not a valid hyperboloid pair")
    return np.arccosh(np.maximum(ip, 1.0))


def ball_distance(u, v):
    """Distance computed directly in the ball model."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    du = 1.0 - np.sum(u * u, axis=-1)
    dv = 1.0 - np.sum(v * v, axis=-1)
    diff = np.sum((u - v) ** 2, axis=-1)
    return np.arccosh(1.0 + 2.0 * diff / (du * dv))


class Isometry:
    """Orientation-preserving hyperbolic isometry stored as a Lorentz matrix.

    The matrix acts on ambient hyperboloid coordinates; ``apply`` wraps
    the action for ball-model points.
    """

    def __init__(self, matrix):
        self.matrix = np.asarray(matrix, dtype=float)

    def apply_hyperboloid(self, x):
        return np.asarray(x, dtype=float) @ self.matrix.T

    def apply(self, b):
        return hyperboloid_to_ball(self.apply_hyperboloid(ball_to_hyperboloid(b)))


def translate_to(target):
    """Isometry (a Lorentz boost) carrying the origin to ``target``.

    ``target`` is a ball-model point. The boost fixes the 2-plane spanned
    by the time axis and the target direction, so it is the hyperbolic
    analogue of a pure translation.
    """
    t = ball_to_hyperboloid(np.asarray(target, dtype=float))
    if t.ndim != 1:
        raise ValidationError("translate_to expects a single point")
    n = t.shape[0] - 1
    t0, ts = t[0], t[1:]
    mat = np.empty((n + 1, n + 1))
    mat[0, 0] = t0
    mat[0, 1:] = ts
    mat[1:, 0] = ts
    mat[1:, 1:] = np.eye(n) + np.outer(ts, ts) / (1.0 + t0)
    return Isometry(mat)


def apply_isometry(iso, p):
    """Apply an isometry handle to a ball-model point (or batch)."""
    return iso.apply(p)
