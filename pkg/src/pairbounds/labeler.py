"""Labelers: which pairs of instances get labeled.

A labeler only ever sees the number of instances, never their values, so
every sampler here maps ``(spec, n, seed)`` to a :class:`TrainingGraph`.

Pair ranking
------------
Unordered pairs ``i < j`` are ranked colexicographically::

    rank(i, j) = j * (j - 1) / 2 + i

which is a bijection between pairs on ``n`` vertices and ``[0, C(n, 2))``.
The uniform sampler draws ``m`` distinct ranks and unranks them, so any
implementation using the same ranking and the same stream reproduces the
same graphs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadParams, DegreeTooLarge, ParityError, TooManyPairs
from .pair_graph import TrainingGraph, from_edge_list
from .rng import make_rng

VARIANTS = ("complete", "star", "regular", "uniform", "explicit")


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def pair_rank(i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


def pair_unrank(r):
    """Inverse of :func:`pair_rank`; accepts a scalar or an integer array."""
    r = np.asarray(r, dtype=np.int64)
    j = ((1 + np.sqrt(1 + 8 * r.astype(np.float64))) / 2).astype(np.int64)
    # float sqrt can be off by one near perfect squares
    j = np.where(j * (j - 1) // 2 > r, j - 1, j)
    j = np.where((j + 1) * j // 2 <= r, j + 1, j)
    i = r - j * (j - 1) // 2
    return i, j


def complete_graph(n: int) -> TrainingGraph:
    return TrainingGraph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def er_sample(n: int, m: int, seed=None) -> TrainingGraph:
    """Uniform draw from all graphs with ``n`` vertices and exactly ``m`` edges.

    ``seed`` may be an int or a ``numpy.random.Generator`` (the latter is
    consumed, which is how bulk Monte-Carlo loops avoid re-seeding).
    """
    n, m = int(n), int(m)
    total = pair_count(n)
    if m < 0:
        raise BadParams(f"m must be non-negative, got {m}")
    if m > total:
        raise TooManyPairs(f"m={m} exceeds C({n}, 2)={total}")
    if m == total:
        return complete_graph(n)
    rng = make_rng(seed)
    ranks = np.sort(rng.choice(total, size=m, replace=False))
    i, j = pair_unrank(ranks)
    edges = sorted(zip(i.tolist(), j.tolist()))
    return TrainingGraph(n, tuple(edges))


def regular_sample(n: int, k: int) -> TrainingGraph:
    """Circulant k-regular graph: ``i ~ i +- s (mod n)`` for ``s = 1..k//2``,
    plus the diameter ``i ~ i + n/2`` when ``k`` is odd."""
    n, k = int(n), int(k)
    if k < 1:
        raise BadParams(f"k must be >= 1, got {k}")
    if k >= n:
        raise DegreeTooLarge(f"k={k} needs more than n={n} vertices")
    if (n * k) % 2:
        raise ParityError(f"no {k}-regular graph on {n} vertices (n*k odd)")
    offsets = list(range(1, k // 2 + 1))
    if k % 2:
        offsets.append(n // 2)
    edges = set()
    for i in range(n):
        for s in offsets:
            j = (i + s) % n
            edges.add((min(i, j), max(i, j)))
    return TrainingGraph(n, tuple(sorted(edges)))


def star_sample(n: int, m: int) -> TrainingGraph:
    """Vertex 0 joined to vertices ``1..m``: every example shares instance 0."""
    n, m = int(n), int(m)
    if m < 0:
        raise BadParams(f"m must be non-negative, got {m}")
    if m > n - 1:
        raise TooManyPairs(f"a star on {n} vertices has at most {n - 1} edges, asked for {m}")
    return TrainingGraph(n, tuple((0, j) for j in range(1, m + 1)))


@dataclass(frozen=True)
class LabelerSpec:
    """Declarative subsampling regime.

    ``variant`` is one of ``complete``, ``star`` (needs ``m``), ``regular``
    (needs ``k``), ``uniform`` (needs ``m``; ``seed`` optional) and
    ``explicit`` (needs ``edges``).
    """

    variant: str
    n: int
    k: int | None = None
    m: int | None = None
    seed: int | None = None
    edges: tuple[tuple[int, int], ...] | None = field(default=None)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise BadParams(f"unknown labeler variant {self.variant!r}; expected one of {VARIANTS}")
        if self.n < 2:
            raise BadParams(f"labeler needs n >= 2, got {self.n}")
        if self.variant in ("star", "uniform") and self.m is None:
            raise BadParams(f"{self.variant} labeler needs m")
        if self.variant == "regular" and self.k is None:
            raise BadParams("regular labeler needs k")
        if self.variant == "explicit":
            if self.edges is None:
                raise BadParams("explicit labeler needs edges")
            object.__setattr__(self, "edges", tuple(tuple(int(v) for v in e) for e in self.edges))
        if self.m is not None and self.m > pair_count(self.n):
            raise TooManyPairs(f"m={self.m} exceeds C({self.n}, 2)")

    def to_json(self) -> dict:
        out = {"variant": self.variant, "n": self.n}
        for key in ("k", "m", "seed"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.edges is not None:
            out["edges"] = [list(e) for e in self.edges]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "LabelerSpec":
        unknown = set(obj) - {"variant", "n", "k", "m", "seed", "edges"}
        if unknown:
            raise BadParams(f"unknown labeler fields {sorted(unknown)}")
        if "variant" not in obj or "n" not in obj:
            raise BadParams("labeler spec needs 'variant' and 'n'")
        edges = obj.get("edges")
        return cls(
            variant=obj["variant"],
            n=int(obj["n"]),
            k=None if obj.get("k") is None else int(obj["k"]),
            m=None if obj.get("m") is None else int(obj["m"]),
            seed=None if obj.get("seed") is None else int(obj["seed"]),
            edges=None if edges is None else tuple(tuple(e) for e in edges),
        )


def sample_pairs(spec: LabelerSpec, n: int | None = None) -> TrainingGraph:
    """Realize ``spec`` on ``n`` instances (defaults to ``spec.n``)."""
    n = spec.n if n is None else int(n)
    if n != spec.n:
        raise BadParams(f"labeler spec targets n={spec.n}, called with n={n}")
    if spec.variant == "complete":
        return complete_graph(n)
    if spec.variant == "star":
        return star_sample(n, spec.m)
    if spec.variant == "regular":
        return regular_sample(n, spec.k)
    if spec.variant == "uniform":
        return er_sample(n, spec.m, spec.seed)
    return from_edge_list(n, spec.edges)


def expected_degree(n: int, m: int) -> float:
    """Mean degree ``2m/n`` of every vertex under the uniform labeler."""
    return 2.0 * m / n


def log_graph_count(n: int, m: int) -> float:
    """Natural log of the number of graphs with ``n`` vertices and ``m`` edges."""
    N = pair_count(n)
    return math.lgamma(N + 1) - math.lgamma(m + 1) - math.lgamma(N - m + 1)
