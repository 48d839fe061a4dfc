import numpy as np
import pytest

from hypersvm.geometry import minkowski_inner


def minkowski_orthonormal_boundary_basis(w):
    """Basis (a, b) of the decision boundary {z : w*z = 0} on the 2-d
    hyperboloid, with a*a = 1 (a0 > 0), b*b = -1, a*b = 0, so the
    boundary geodesic is z(t) = cosh(t) a + sinh(t) b."""
    w = np.asarray(w, dtype=float)
    normal = np.array([w[0], -w[1], -w[2]])  # Euclidean normal of the plane
    basis = [v for v in np.eye(3)]
    u = basis[np.argmin(np.abs(normal))]
    u = u - (u @ normal) / (normal @ normal) * normal
    v = np.cross(normal, u)
    gram = np.array(
        [
            [minkowski_inner(u, u), minkowski_inner(u, v)],
            [minkowski_inner(u, v), minkowski_inner(v, v)],
        ]
    )
    eigvals, eigvecs = np.linalg.eigh(gram)
    # one positive (timelike) and one negative (spacelike) eigenvalue
    vecs = [eigvecs[0, i] * u + eigvecs[1, i] * v for i in range(2)]
    i_pos = int(np.argmax(eigvals))
    a = vecs[i_pos] / np.sqrt(eigvals[i_pos])
    if a[0] < 0:
        a = -a
    b = vecs[1 - i_pos] / np.sqrt(-eigvals[1 - i_pos])
    return a, b


def brute_force_margin(w, x, resolution=1e-3, t_max=20.0):
    """Minimum hyperbolic distance from x to the boundary of w, by dense
    sampling of the boundary geodesic. Independent of the closed form:
    only uses the geodesic parameterization and arccosh distances."""
    a, b = minkowski_orthonormal_boundary_basis(w)
    xa = minkowski_inner(x, a)
    xb = minkowski_inner(x, b)
    t = np.arange(-t_max, t_max, resolution)
    ip = xa * np.cosh(t) + xb * np.sinh(t)
    return float(np.arccosh(max(np.min(ip), 1.0)))


def random_feasible_w(rng, margin=0.05):
    while True:
        w = rng.normal(size=3)
        if minkowski_inner(w, w) < -margin:
            return w


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
