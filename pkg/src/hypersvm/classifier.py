"""Linear decision functions on the hyperboloid and their geometric margin.

A binary classifier is parameterized by an ambient vector w with negative
Minkowski norm squared (w*w < 0); its decision boundary is the set
{z on the hyperboloid : w*z = 0}, a totally geodesic hyperplane.
"""

import numpy as np

from hypersvm.errors import ValidationError
from hypersvm.geometry import minkowski_inner

# Target margin of the closest correctly classified point in the
# soft-margin objective.
ASINH_ONE = float(np.arcsinh(1.0))


def check_weights(w):
    """Raise unless w*w < 0 (the boundary intersects the hyperboloid)."""
    w = np.asarray(w, dtype=float)
    if minkowski_inner(w, w) >= 0:
        raise ValidationError("infeasible weights: w*w must be negative")
    return w


def decision_value(w, x):
    """Raw score w*x; a monotone transform of the geometric margin."""
    w = check_weights(w)
    return minkowski_inner(w, x)


def decide(w, x):
    """Predicted label: +1 when w*x > 0, otherwise -1 (ties go to -1)."""
    return np.where(decision_value(w, x) > 0, 1, -1)


def geometric_margin(w, x, y):
    """Signed hyperbolic distance from x to the decision boundary of w.

    For y equal to the predicted sign this is exactly the minimum
    hyperbolic distance from x to {z : w*z = 0}; flipping y flips the
    sign. Invariant under positive rescaling of w.
    """
    w = check_weights(w)
    scale = np.sqrt(-minkowski_inner(w, w))
    return np.asarray(y) * np.arcsinh(minkowski_inner(w, x) / scale)
