"""Synthetic benchmarks: hyperbolic Gaussian mixtures and PS networks.

The Gaussian sampler draws from the isotropic density proportional to
exp(-d(x, centroid)^2 / (2 * variance)) with respect to hyperbolic area,
using inverse-CDF sampling of the radial law sinh(r) * exp(-r^2 / 2v) on
a fixed grid. The network generator implements the popularity-vs-
similarity growth model at temperature 0 with probabilistically
propagated multi-labels.

Everything is a pure function of (spec, seed); identical seeds give
identical outputs.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from hypersvm.data import LabeledDataset
from hypersvm.errors import ValidationError
from hypersvm.geometry import translate_to

# Radial inverse-CDF grid: reach 12 sigma, 2^14 knots.
_GRID_SIGMAS = 12.0
_GRID_KNOTS = 2**14


def _radial_cdf_grid(variance):
    r_max = _GRID_SIGMAS * math.sqrt(variance)
    grid = np.linspace(0.0, r_max, _GRID_KNOTS)
    dens = np.sinh(grid) * np.exp(-(grid**2) / (2.0 * variance))
    cdf = np.concatenate([[0.0], np.cumsum((dens[1:] + dens[:-1]) / 2.0)])
    cdf /= cdf[-1]
    return grid, cdf


def sample_hyperbolic_gaussian(centroid, variance, count, rng):
    """Sample ball-model points around ``centroid`` (2-d only).

    Radii come from inverse-CDF interpolation of the hyperbolic radial
    density, angles are uniform, and the origin-centered cloud is moved
    to the centroid by an isometry so distances to the centroid keep the
    sampled law.
    """
    centroid = np.asarray(centroid, dtype=float)
    if centroid.shape != (2,):
        raise ValidationError("only 2-d hyperbolic Gaussian sampling is supported")
    if variance <= 0:
        raise ValidationError("variance must be positive")
    grid, cdf = _radial_cdf_grid(variance)
    r = np.interp(rng.random(count), cdf, grid)
    theta = rng.uniform(0.0, 2.0 * np.pi, count)
    ball_r = np.tanh(r / 2.0)
    pts = np.column_stack([ball_r * np.cos(theta), ball_r * np.sin(theta)])
    if np.any(centroid != 0.0):
        pts = translate_to(centroid).apply(pts)
    return pts


@dataclass
class GaussianMixtureSpec:
    """Mixture of hyperbolic Gaussians in the Poincare disk."""

    num_classes: int = 4
    points_per_class: int = 100
    centroid_variance: float = 1.5
    component_variance: float = 1.0
    dim: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.num_classes < 1 or self.points_per_class < 1:
            raise ValidationError("counts must be positive")
        if self.centroid_variance <= 0 or self.component_variance <= 0:
            raise ValidationError("variances must be positive")
        if self.dim != 2:
            raise ValidationError("only dim=2 is supported")


def gen_gaussian_mixture(spec):
    """Sample centroids, then one Gaussian cloud per class."""
    rng = np.random.default_rng(spec.seed)
    origin = np.zeros(2)
    centroids = sample_hyperbolic_gaussian(
        origin, spec.centroid_variance, spec.num_classes, rng
    )
    points, labels = [], []
    for k in range(spec.num_classes):
        points.append(
            sample_hyperbolic_gaussian(
                centroids[k], spec.component_variance, spec.points_per_class, rng
            )
        )
        labels.extend([k] * spec.points_per_class)
    class_ids = [f"c{k}" for k in range(spec.num_classes)]
    mat = np.zeros((len(labels), spec.num_classes), dtype=bool)
    mat[np.arange(len(labels)), labels] = True
    return LabeledDataset(
        points=np.vstack(points),
        model_tag="ball",
        class_ids=class_ids,
        labels=mat,
        metadata={
            "generator": "gaussian_mixture",
            "num_classes": spec.num_classes,
            "points_per_class": spec.points_per_class,
            "centroid_variance": spec.centroid_variance,
            "component_variance": spec.component_variance,
            "dim": spec.dim,
            "seed": spec.seed,
        },
    )


def gen_separated_pair(separation=6.0, variance=0.25, points_per_class=100, seed=0):
    """Two Gaussian clouds with centroids a fixed hyperbolic distance apart."""
    rng = np.random.default_rng(seed)
    phi = rng.uniform(0.0, 2.0 * np.pi)
    ball_r = math.tanh(separation / 4.0)
    c0 = ball_r * np.array([math.cos(phi), math.sin(phi)])
    c1 = -c0
    pts = np.vstack(
        [
            sample_hyperbolic_gaussian(c0, variance, points_per_class, rng),
            sample_hyperbolic_gaussian(c1, variance, points_per_class, rng),
        ]
    )
    mat = np.zeros((2 * points_per_class, 2), dtype=bool)
    mat[:points_per_class, 0] = True
    mat[points_per_class:, 1] = True
    return LabeledDataset(
        points=pts,
        model_tag="ball",
        class_ids=["c0", "c1"],
        labels=mat,
        metadata={
            "generator": "separated_pair",
            "separation": separation,
            "variance": variance,
            "points_per_class": points_per_class,
            "seed": seed,
        },
    )


@dataclass
class PsNetwork:
    """Growth-ordered scale-free network with hyperbolic coordinates.

    ``radii`` holds the final (drifted) radial coordinates; ``edges`` is
    the time-ordered list of (new_node, existing_node) pairs with nodes
    named by 0-based creation index.
    """

    radii: np.ndarray
    theta: np.ndarray
    edges: list = field(repr=False)
    params: dict = field(default_factory=dict)

    @property
    def n_nodes(self):
        return self.radii.shape[0]


def ps_generate(N, avg_degree, gamma, temperature, rng, use_exact_distance=False):
    """Grow a PS-model network at temperature 0.

    Node t (1-based) appears at radius ln t with a uniform angle; every
    earlier node s drifts outward to beta*ln s + (1-beta)*ln t with
    beta = 1/(gamma-1); the newcomer links to the min(m, t-1)
    hyperbolically nearest nodes, m = round(avg_degree/2). The default
    nearness measure is the standard PS approximation
    r_s + r_t + 2*ln(gap/2); the exact hyperbolic distance is available
    behind a flag (at T=0 only the nearest-m ordering matters).
    """
    if N < 2:
        raise ValidationError("need at least two nodes")
    if avg_degree < 2:
        raise ValidationError("average degree must be at least 2")
    if gamma <= 2:
        raise ValidationError("scaling exponent must exceed 2")
    if temperature != 0:
        raise ValidationError("only temperature 0 is supported")
    m = round(avg_degree / 2.0)
    beta = 1.0 / (gamma - 1.0)
    theta = rng.uniform(0.0, 2.0 * np.pi, N)
    birth_r = np.log(np.arange(1, N + 1, dtype=float))
    edges = []
    for t in range(2, N + 1):
        new = t - 1
        r_new = birth_r[new]
        drifted = beta * birth_r[:new] + (1.0 - beta) * r_new
        gap = np.abs(theta[:new] - theta[new])
        gap = np.minimum(gap, 2.0 * np.pi - gap)
        if use_exact_distance:
            dist = np.arccosh(
                np.maximum(
                    np.cosh(drifted) * np.cosh(r_new)
                    - np.sinh(drifted) * np.sinh(r_new) * np.cos(gap),
                    1.0,
                )
            )
        else:
            dist = drifted + r_new + 2.0 * np.log(np.maximum(gap, 1e-15) / 2.0)
        k = min(m, new)
        nearest = np.argsort(dist, kind="stable")[:k]
        edges.extend((new, int(s)) for s in sorted(nearest))
    final_r = beta * birth_r + (1.0 - beta) * birth_r[-1]
    return PsNetwork(
        radii=final_r,
        theta=theta,
        edges=edges,
        params={
            "N": N,
            "m": m,
            "beta": beta,
            "gamma": gamma,
            "avg_degree": avg_degree,
            "temperature": temperature,
        },
    )


@dataclass
class LabelAssignment:
    """Propagated label sets over a PS network."""

    label_sets: list
    pioneers: list
    size_range: tuple
    propagate_prob: float


def _edges_by_new_node(net):
    grouped = {}
    for new, old in net.edges:
        grouped.setdefault(new, []).append(old)
    return grouped


def propagate_labels(
    net, num_labels, size_range, propagate_prob, rng, max_attempts=1000
):
    """Grow label sets by replaying the network evolution.

    Each label starts at a random pioneer node; every later node whose
    creation edges touch a labeled node gets one acquisition trial with
    the given probability (one trial even with several labeled
    neighbors). Labels whose final size falls outside ``size_range``
    (inclusive) are rejected and regrown, up to ``max_attempts`` per
    label.
    """
    if not 0.0 <= propagate_prob <= 1.0:
        raise ValidationError("propagate_prob must lie in [0, 1]")
    lo, hi = size_range
    if lo < 1 or hi < lo:
        raise ValidationError("invalid size range")
    grouped = _edges_by_new_node(net)
    order = sorted(grouped)
    label_sets, pioneers = [], []
    for _ in range(num_labels):
        for _ in range(max_attempts):
            pioneer = int(rng.integers(net.n_nodes))
            labeled = {pioneer}
            for new in order:
                if new in labeled:
                    continue
                if any(old in labeled for old in grouped[new]):
                    if rng.random() < propagate_prob:
                        labeled.add(new)
            if lo <= len(labeled) <= hi:
                label_sets.append(labeled)
                pioneers.append(pioneer)
                break
        else:
            raise ValidationError(
                f"could not grow a label with size in [{lo}, {hi}] "
                f"after {max_attempts} attempts"
            )
    return LabelAssignment(
        label_sets=label_sets,
        pioneers=pioneers,
        size_range=(lo, hi),
        propagate_prob=propagate_prob,
    )


def hyperbolic_embedding_of(net):
    """Ball-model coordinates from the ground-truth PS polar coordinates."""
    ball_r = np.tanh(net.radii / 2.0)
    return np.column_stack([ball_r * np.cos(net.theta), ball_r * np.sin(net.theta)])


def ps_dataset(net, assignment, metadata=None):
    """Assemble a multi-label dataset from a network and its labels."""
    points = hyperbolic_embedding_of(net)
    num_labels = len(assignment.label_sets)
    labels = np.zeros((net.n_nodes, num_labels), dtype=bool)
    for k, members in enumerate(assignment.label_sets):
        labels[sorted(members), k] = True
    meta = {
        "generator": "ps_network",
        **net.params,
        "num_labels": num_labels,
        "size_range": list(assignment.size_range),
        "propagate_prob": assignment.propagate_prob,
    }
    if metadata:
        meta.update(metadata)
    return LabeledDataset(
        points=points,
        model_tag="ball",
        class_ids=[f"l{k}" for k in range(num_labels)],
        labels=labels,
        metadata=meta,
    )


def gen_ps_dataset(
    N=500,
    avg_degree=4.0,
    gamma=2.25,
    num_labels=10,
    size_range=(20, 50),
    propagate_prob=0.8,
    seed=0,
    temperature=0,
    max_attempts=1000,
):
    """Generate a PS network and a propagated label assignment in one go."""
    rng = np.random.default_rng(seed)
    net = ps_generate(N, avg_degree, gamma, temperature, rng)
    assignment = propagate_labels(
        net, num_labels, size_range, propagate_prob, rng, max_attempts
    )
    return ps_dataset(net, assignment, metadata={"seed": seed})
