"""Labeled point datasets and the on-disk file formats.

One self-describing dataset format covers all three point models: a
``model`` tag (ball, hyperboloid or halfspace), a point matrix, per-point
label-id lists and a free-form provenance map. Files are JSON with every
real printed to 17 significant digits, so writing is lossless and
byte-deterministic.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from hypersvm import geometry
from hypersvm.errors import ValidationError

MODEL_TAGS = ("ball", "hyperboloid", "halfspace")


def _write_json(obj, out):
    """Serialize with floats at 17 significant digits (lossless)."""
    if isinstance(obj, bool) or obj is None:
        out.append("true" if obj is True else "false" if obj is False else "null")
    elif isinstance(obj, float):
        if not np.isfinite(obj):
            raise ValidationError("non-finite value in output file")
        out.append(format(obj, ".17g"))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)))
            out.append(":")
            _write_json(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            _write_json(v, out)
        out.append("]")
    elif isinstance(obj, np.floating):
        _write_json(float(obj), out)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    """Deterministic JSON text with 17-significant-digit reals."""
    out = []
    _write_json(obj, out)
    return "".join(out) + "\n"


def save_json(obj, path):
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def load_json(path):
    with open(path) as fh:
        return json.load(fh)


@dataclass
class LabeledDataset:
    """Points in a declared model plus a per-class binary label matrix.

    ``labels`` is an (n_points, n_classes) boolean matrix; a point may
    belong to several classes (multi-label).
    """

    points: np.ndarray
    model_tag: str
    class_ids: list
    labels: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        self.labels = np.asarray(self.labels, dtype=bool)
        if self.model_tag not in MODEL_TAGS:
            raise ValidationError(f"unknown model tag {self.model_tag!r}")
        if self.points.ndim != 2:
            raise ValidationError("points must be a 2-d matrix")
        if self.labels.shape != (self.points.shape[0], len(self.class_ids)):
            raise ValidationError("label matrix shape does not match points/classes")
        if self.model_tag == "ball":
            geometry.check_ball(self.points)
        elif self.model_tag == "hyperboloid":
            geometry.check_hyperboloid(self.points)
        else:
            geometry.check_halfspace(self.points)

    @property
    def n_points(self):
        return self.points.shape[0]

    @property
    def n_classes(self):
        return len(self.class_ids)

    @property
    def dim(self):
        """Intrinsic dimension n of the hyperbolic space."""
        d = self.points.shape[1]
        return d - 1 if self.model_tag == "hyperboloid" else d

    def to_hyperboloid(self):
        """Point matrix in ambient hyperboloid coordinates."""
        if self.model_tag == "hyperboloid":
            return self.points
        if self.model_tag == "ball":
            return geometry.ball_to_hyperboloid(self.points)
        return geometry.halfspace_to_hyperboloid(self.points)

    def to_ball(self):
        """Point matrix in ball coordinates."""
        if self.model_tag == "ball":
            return self.points
        if self.model_tag == "hyperboloid":
            return geometry.hyperboloid_to_ball(self.points)
        return geometry.halfspace_to_ball(self.points)

    def binary_labels(self, class_index):
        """Labels in {+1, -1} for one class against the rest."""
        return np.where(self.labels[:, class_index], 1.0, -1.0)

    def subset(self, indices):
        return LabeledDataset(
            points=self.points[indices],
            model_tag=self.model_tag,
            class_ids=list(self.class_ids),
            labels=self.labels[indices],
            metadata=dict(self.metadata),
        )

    def to_file_dict(self):
        label_lists = [
            [self.class_ids[k] for k in np.flatnonzero(row)] for row in self.labels
        ]
        return {
            "format": "hypersvm-dataset",
            "model": self.model_tag,
            "dim": self.dim,
            "class_ids": list(self.class_ids),
            "points": self.points,
            "labels": label_lists,
            "metadata": self.metadata,
        }

    def save(self, path):
        save_json(self.to_file_dict(), path)

    @classmethod
    def from_file_dict(cls, doc):
        if doc.get("format") != "hypersvm-dataset":
            raise ValidationError("not a hypersvm dataset file")
        class_ids = list(doc["class_ids"])
        index = {c: k for k, c in enumerate(class_ids)}
        points = np.asarray(doc["points"], dtype=float)
        labels = np.zeros((points.shape[0], len(class_ids)), dtype=bool)
        for j, row in enumerate(doc["labels"]):
            for cid in row:
                if cid not in index:
                    raise ValidationError(f"label {cid!r} not in class_ids")
                labels[j, index[cid]] = True
        return cls(
            points=points,
            model_tag=doc["model"],
            class_ids=class_ids,
            labels=labels,
            metadata=doc.get("metadata", {}),
        )

    @classmethod
    def load(cls, path):
        return cls.from_file_dict(load_json(path))
