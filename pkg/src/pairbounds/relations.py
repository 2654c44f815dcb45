"""Synthetic instances, ground-truth binary relations and pair features.

Instances live in the closed unit ball of R^d. A relation maps an ordered
pair ``(x, x')`` to ``+1`` or ``-1``:

* ``equivalence``: +1 iff both points have the same nearest center;
* ``total_order``: +1 iff ``<u, x> <= <u, x'>`` for a direction ``u``
  (ties give +1 both ways, since ``<=`` is reflexive).

Pair features come in three modes whose norm bound ``B`` follows from the
unit-ball constraint alone, so it is a certificate rather than an estimate.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import BadParams, DimMismatch, SizeMismatch
from .pair_graph import TrainingGraph, format_edge_list, read_edge_list
from .rng import make_rng

FEATURE_MODES = ("absdiff", "product", "diff")
# sup of ||phi(x, x')|| over the unit ball
FEATURE_NORM_BOUND = {"absdiff": 2.0, "product": 1.0, "diff": 2.0}
SYMMETRIC_MODES = ("absdiff", "product")


def to_unit_ball(X: np.ndarray) -> np.ndarray:
    """Radially shrink rows with norm above 1 onto the unit sphere."""
    X = np.asarray(X, dtype=np.float64)
    norms = np.linalg.norm(X, axis=-1, keepdims=True)
    return X / np.maximum(norms, 1.0)


def default_centers(c: int, d: int, radius: float = 1.0) -> np.ndarray:
    """``c`` centers spread evenly on a circle (a segment when ``d == 1``)."""
    if d == 1:
        if c == 1:
            return np.zeros((1, 1))
        return np.linspace(-radius, radius, c).reshape(c, 1)
    angles = 2 * np.pi * np.arange(c) / c
    C = np.zeros((c, d))
    C[:, 0] = radius * np.cos(angles)
    C[:, 1] = radius * np.sin(angles)
    return C


@dataclass(frozen=True)
class InstanceDistribution:
    """``kind`` is ``gaussian-mixture`` (equal weights) or ``uniform-cube``.

    The cube is ``[-1/sqrt(d), 1/sqrt(d)]^d`` so it already sits inside the
    unit ball; mixture draws are pulled back into the ball radially.
    """

    kind: str
    d: int
    centers: np.ndarray | None = None
    spread: float = 0.0

    def __post_init__(self):
        if self.kind not in ("gaussian-mixture", "uniform-cube"):
            raise BadParams(f"unknown distribution {self.kind!r}")
        if self.d < 1:
            raise BadParams(f"dimension must be >= 1, got {self.d}")
        if self.kind == "gaussian-mixture":
            if self.centers is None:
                raise BadParams("gaussian-mixture needs centers")
            C = to_unit_ball(np.atleast_2d(np.asarray(self.centers, dtype=np.float64)))
            if C.shape[1] != self.d:
                raise DimMismatch(f"centers have dimension {C.shape[1]}, expected {self.d}")
            object.__setattr__(self, "centers", C)
            if self.spread < 0:
                raise BadParams(f"spread must be non-negative, got {self.spread}")

    @classmethod
    def mixture(cls, c: int, d: int, spread: float, radius: float = 1.0) -> "InstanceDistribution":
        if c < 1:
            raise BadParams(f"need at least one center, got {c}")
        return cls("gaussian-mixture", d, default_centers(c, d, radius), spread)

    @classmethod
    def cube(cls, d: int) -> "InstanceDistribution":
        return cls("uniform-cube", d)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "uniform-cube":
            h = 1.0 / np.sqrt(self.d)
            return rng.uniform(-h, h, size=(n, self.d))
        comp = rng.integers(0, len(self.centers), size=n)
        X = self.centers[comp] + self.spread * rng.standard_normal((n, self.d))
        return to_unit_ball(X)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "d": self.d}
        if self.kind == "gaussian-mixture":
            out["centers"] = self.centers.tolist()
            out["spread"] = self.spread
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "InstanceDistribution":
        kind = obj.get("kind")
        if kind == "uniform-cube":
            return cls.cube(int(obj["d"]))
        if kind == "gaussian-mixture":
            if "centers" in obj:
                return cls(kind, int(obj["d"]), np.asarray(obj["centers"], float), float(obj.get("spread", 0.0)))
            return cls.mixture(int(obj["c"]), int(obj["d"]), float(obj.get("spread", 0.0)),
                               float(obj.get("radius", 1.0)))
        raise BadParams(f"unknown distribution {kind!r}")


def sample_instances(dist: InstanceDistribution, n: int, seed=None) -> np.ndarray:
    """``n`` i.i.d. instances from ``dist`` as an ``(n, d)`` array."""
    if n < 2:
        raise BadParams(f"need at least two instances, got n={n}")
    return dist.sample(int(n), make_rng(seed))


@dataclass(frozen=True)
class RelationSpec:
    kind: str
    centers: np.ndarray | None = None
    direction: np.ndarray | None = None

    def __post_init__(self):
        if self.kind == "equivalence":
            if self.centers is None:
                raise BadParams("equivalence relation needs centers")
            object.__setattr__(self, "centers", np.atleast_2d(np.asarray(self.centers, dtype=np.float64)))
        elif self.kind == "total_order":
            if self.direction is None:
                raise BadParams("total order needs a direction")
            object.__setattr__(self, "direction", np.asarray(self.direction, dtype=np.float64).ravel())
        else:
            raise BadParams(f"unknown relation kind {self.kind!r}")

    @property
    def symmetric(self) -> bool:
        return self.kind == "equivalence"

    @property
    def dim(self) -> int:
        return self.centers.shape[1] if self.kind == "equivalence" else self.direction.shape[0]

    @classmethod
    def equivalence(cls, centers) -> "RelationSpec":
        return cls("equivalence", centers=centers)

    @classmethod
    def total_order(cls, direction) -> "RelationSpec":
        return cls("total_order", direction=direction)

    def cluster(self, X: np.ndarray) -> np.ndarray:
        """Index of the nearest center for each row of ``X``."""
        X = np.atleast_2d(X)
        d2 = ((X[:, None, :] - self.centers[None, :, :]) ** 2).sum(-1)
        return d2.argmin(axis=1)

    def score(self, X: np.ndarray) -> np.ndarray:
        return np.atleast_2d(X) @ self.direction

    def labels(self, X: np.ndarray, Xp: np.ndarray) -> np.ndarray:
        """Vectorized relation over rows: ``r(X[t], Xp[t])``."""
        X, Xp = np.atleast_2d(X), np.atleast_2d(Xp)
        if X.shape[1] != self.dim or Xp.shape[1] != self.dim:
            raise DimMismatch(f"relation is defined on dimension {self.dim}")
        if self.kind == "equivalence":
            same = self.cluster(X) == self.cluster(Xp)
        else:
            same = self.score(X) <= self.score(Xp)
        return np.where(same, 1, -1).astype(np.int64)

    def to_json(self) -> dict:
        if self.kind == "equivalence":
            return {"kind": self.kind, "centers": self.centers.tolist()}
        return {"kind": self.kind, "direction": self.direction.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "RelationSpec":
        kind = obj.get("kind")
        if kind == "equivalence":
            return cls.equivalence(obj["centers"])
        if kind == "total_order":
            return cls.total_order(obj["direction"])
        raise BadParams(f"unknown relation kind {kind!r}")


def relation_label(rel: RelationSpec, x, xp) -> int:
    return int(rel.labels(np.asarray(x, float).reshape(1, -1), np.asarray(xp, float).reshape(1, -1))[0])


def pair_feature_map(x, xp, mode: str) -> np.ndarray:
    """Pair feature vector; rows are mapped independently when given 2-D input.

    ``absdiff`` gives ``|x - x'|``, ``product`` gives ``x * x'`` (both
    symmetric) and ``diff`` gives ``x - x'`` (antisymmetric).
    """
    x = np.asarray(x, dtype=np.float64)
    xp = np.asarray(xp, dtype=np.float64)
    if x.shape != xp.shape:
        raise DimMismatch(f"shapes {x.shape} and {xp.shape} differ")
    if mode == "absdiff":
        return np.abs(x - xp)
    if mode == "product":
        return x * xp
    if mode == "diff":
        return x - xp
    raise BadParams(f"unknown feature mode {mode!r}; expected one of {FEATURE_MODES}")


@dataclass(frozen=True)
class PairDataset:
    """Labeled pairs: instances, the training graph and one label per edge.

    Labels and features refer to the ordered pair in which each edge was
    labeled (``graph.ordered_pairs()``).
    """

    instances: np.ndarray
    graph: TrainingGraph
    labels: np.ndarray
    feature_mode: str
    norm_bound: float
    relation: RelationSpec
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def features(self) -> np.ndarray:
        pairs = np.asarray(self.graph.ordered_pairs(), dtype=np.int64).reshape(-1, 2)
        X = self.instances
        return pair_feature_map(X[pairs[:, 0]], X[pairs[:, 1]], self.feature_mode)

    def without(self, e: int) -> "PairDataset":
        """Same dataset with edge ``e`` removed."""
        keep = [k for k in range(self.m) if k != e]
        return PairDataset(self.instances, self.graph.edge_subgraph(keep), self.labels[keep],
                           self.feature_mode, self.norm_bound, self.relation, dict(self.meta))


def build_dataset(X, g: TrainingGraph, rel: RelationSpec, mode: str, meta: dict | None = None) -> PairDataset:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] != g.n:
        raise SizeMismatch(f"graph has {g.n} vertices but {X.shape[0] if X.ndim else 0} instances were given")
    if mode not in FEATURE_MODES:
        raise BadParams(f"unknown feature mode {mode!r}")
    if X.shape[1] != rel.dim:
        raise DimMismatch(f"instances have dimension {X.shape[1]}, relation expects {rel.dim}")
    if np.any(np.linalg.norm(X, axis=1) > 1 + 1e-12):
        raise BadParams("instances must lie in the unit ball")
    pairs = np.asarray(g.ordered_pairs(), dtype=np.int64).reshape(-1, 2)
    labels = rel.labels(X[pairs[:, 0]], X[pairs[:, 1]]) if g.m else np.zeros(0, dtype=np.int64)
    return PairDataset(X, g, labels, mode, FEATURE_NORM_BOUND[mode], rel, dict(meta or {}))


def save_dataset(data: PairDataset, path: str | os.PathLike) -> None:
    """Write ``instances.csv``, ``edges.txt`` and ``meta.json`` into ``path``.

    ``edges.txt`` lists pairs as ``i < j`` with the label of the stored
    orientation; ``meta.json`` keeps the flipped-edge flags so the original
    orientation survives the round trip.
    """
    os.makedirs(path, exist_ok=True)
    np.savetxt(os.path.join(path, "instances.csv"), data.instances, delimiter=",", fmt="%.17g")
    g = data.graph
    order = sorted(range(g.m), key=lambda e: g.edges[e])
    flipped = list(g.flipped) if g.flipped is not None else [False] * g.m
    # the file stores i < j, so re-evaluate r on that orientation
    X = data.instances
    if g.m:
        ea = g.edge_array
        stored = data.relation.labels(X[ea[:, 0]], X[ea[:, 1]])
    else:
        stored = np.zeros(0, dtype=np.int64)
    with open(os.path.join(path, "edges.txt"), "w") as fh:
        fh.write(format_edge_list(g, stored))
    meta = {
        "n": g.n,
        "d": int(X.shape[1]),
        "feature_mode": data.feature_mode,
        "norm_bound": data.norm_bound,
        "relation": data.relation.to_json(),
        "flipped": [[g.edges[e][0], g.edges[e][1]] for e in order if flipped[e]],
        "extra": data.meta,
    }
    with open(os.path.join(path, "meta.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_dataset(path: str | os.PathLike) -> PairDataset:
    with open(os.path.join(path, "meta.json")) as fh:
        meta = json.load(fh)
    X = np.loadtxt(os.path.join(path, "instances.csv"), delimiter=",", ndmin=2)
    g, file_labels = read_edge_list(os.path.join(path, "edges.txt"), meta["n"])
    flipped = {tuple(p) for p in meta.get("flipped", [])}
    g = TrainingGraph(g.n, g.edges, tuple(e in flipped for e in g.edges))
    rel = RelationSpec.from_json(meta["relation"])
    data = build_dataset(X, g, rel, meta["feature_mode"], meta.get("extra"))
    if file_labels is not None and g.m:
        ea = g.edge_array
        if not np.array_equal(file_labels, rel.labels(X[ea[:, 0]], X[ea[:, 1]])):
            raise BadParams("labels in edges.txt disagree with the stored relation")
    if abs(data.norm_bound - float(meta["norm_bound"])) > 0:
        raise BadParams("stored norm bound does not match the feature mode")
    return data
