"""Training graphs of pairwise examples and their dependency structure.

Instances are vertices ``0..n-1`` and every labeled pair is an undirected
edge ``(i, j)`` with ``i < j``. Two examples are dependent exactly when their
edges share an endpoint, so the dependency graph is the line graph of the
training graph, and a proper edge coloring partitions the examples into
matchings, i.e. sets of mutually independent examples.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DuplicateEdge, EmptyGraph, IndexOutOfRange, InfeasibleDegree, SelfLoop

__all__ = [
    "TrainingGraph",
    "LineGraph",
    "DependencyPartition",
    "EffectiveSize",
    "PruneReport",
    "from_edge_list",
    "degree_sequence",
    "max_instance_frequency",
    "line_graph",
    "edge_coloring",
    "dependency_partition",
    "effective_training_size",
    "maximum_matching",
    "prune_to_regular",
    "is_regular",
    "read_edge_list",
    "write_edge_list",
    "format_edge_list",
    "parse_edge_list",
]


@dataclass(frozen=True)
class TrainingGraph:
    """Simple undirected graph on ``n`` instances.

    ``flipped[e]`` is True when the labeled ordered pair for edge ``e`` was
    ``(j, i)`` rather than the stored ``(i, j)``; it only matters for
    antisymmetric relations.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()
    flipped: tuple[bool, ...] | None = None

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise IndexOutOfRange(f"graph needs at least one vertex, got n={n}")
        object.__setattr__(self, "n", n)
        edges = tuple((int(i), int(j)) for i, j in self.edges)
        seen = set()
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise IndexOutOfRange(f"edge ({i}, {j}) outside [0, {n})")
            if i == j:
                raise SelfLoop(f"self-loop at vertex {i}")
            if i > j:
                raise ValueError(f"edge ({i}, {j}) not normalized to i < j")
            if (i, j) in seen:
                raise DuplicateEdge(f"duplicate pair ({i}, {j})")
            seen.add((i, j))
        object.__setattr__(self, "edges", edges)
        if self.flipped is not None:
            flipped = tuple(bool(f) for f in self.flipped)
            if len(flipped) != len(edges):
                raise ValueError("flipped must have one flag per edge")
            object.__setattr__(self, "flipped", flipped)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_array(self) -> np.ndarray:
        """Edges as an ``(m, 2)`` integer array."""
        return np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)

    def ordered_pairs(self) -> list[tuple[int, int]]:
        """Edges in the orientation in which they were labeled."""
        if self.flipped is None:
            return list(self.edges)
        return [(j, i) if f else (i, j) for (i, j), f in zip(self.edges, self.flipped)]

    def incidence(self) -> list[list[int]]:
        """For each vertex, the indices of incident edges in increasing order."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for e, (i, j) in enumerate(self.edges):
            inc[i].append(e)
            inc[j].append(e)
        return inc

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        for a in adj:
            a.sort()
        return adj

    def edge_subgraph(self, keep: Iterable[int]) -> "TrainingGraph":
        """Subgraph on the same vertex indexing with only edges in ``keep``."""
        keep = sorted(set(keep))
        flipped = None if self.flipped is None else [self.flipped[e] for e in keep]
        return TrainingGraph(self.n, [self.edges[e] for e in keep], flipped)


def from_edge_list(n: int, pairs: Iterable[Sequence[int]]) -> TrainingGraph:
    """Validate ``pairs`` and build a :class:`TrainingGraph`.

    Pairs may be given in either orientation; they are stored as ``i < j``
    and the original orientation is kept in ``flipped``. A pair and its
    converse count as a duplicate.
    """
    if int(n) < 1:
        raise IndexOutOfRange(f"n must be >= 1, got {n}")
    edges = []
    flipped = []
    for pair in pairs:
        a, b = (int(v) for v in pair)
        if not (0 <= a < n and 0 <= b < n):
            raise IndexOutOfRange(f"pair ({a}, {b}) outside [0, {n})")
        if a == b:
            raise SelfLoop(f"self-loop at vertex {a}")
        edges.append((min(a, b), max(a, b)))
        flipped.append(a > b)
    return TrainingGraph(int(n), tuple(edges), tuple(flipped))


def degree_sequence(g: TrainingGraph) -> np.ndarray:
    """Per-vertex degrees (instance frequencies)."""
    if g.m == 0:
        return np.zeros(g.n, dtype=np.int64)
    return np.bincount(g.edge_array.ravel(), minlength=g.n).astype(np.int64)


def max_instance_frequency(g: TrainingGraph) -> int:
    """Maximum degree of the training graph; 0 when there are no edges."""
    if g.m == 0:
        return 0
    return int(degree_sequence(g).max())


def is_regular(g: TrainingGraph, k: int | None = None) -> bool:
    deg = degree_sequence(g)
    if k is None:
        k = int(deg[0])
    return bool(np.all(deg == k))


@dataclass(frozen=True)
class LineGraph:
    """Dependency graph of the examples: one node per edge of the source graph."""

    node_count: int
    neighbors: tuple[tuple[int, ...], ...]

    def degrees(self) -> np.ndarray:
        return np.array([len(nb) for nb in self.neighbors], dtype=np.int64)

    def edge_count(self) -> int:
        return int(self.degrees().sum()) // 2

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.node_count, self.node_count), dtype=bool)
        for u, nb in enumerate(self.neighbors):
            A[u, list(nb)] = True
        return A


def line_graph(g: TrainingGraph) -> LineGraph:
    if g.m == 0:
        raise EmptyGraph("line graph of a graph without edges")
    inc = g.incidence()
    nbrs = []
    for e, (i, j) in enumerate(g.edges):
        # the graph is simple, so inc[i] and inc[j] only share e itself
        nb = set(inc[i])
        nb.update(inc[j])
        nb.discard(e)
        nbrs.append(tuple(sorted(nb)))
    return LineGraph(g.m, tuple(nbrs))


@dataclass(frozen=True)
class DependencyPartition:
    """Proper edge coloring; colors are ``0..num_colors-1``."""

    color_of: tuple[int, ...]
    num_colors: int

    def classes(self) -> list[tuple[int, ...]]:
        out: list[list[int]] = [[] for _ in range(self.num_colors)]
        for e, c in enumerate(self.color_of):
            out[c].append(e)
        return [tuple(c) for c in out]

    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes()]


class _Coloring:
    """Mutable state for Misra-Gries: colors indexed from both endpoints."""

    def __init__(self, n: int, palette: int):
        self.palette = palette
        self.at: list[dict[int, int]] = [dict() for _ in range(n)]  # vertex -> {color: neighbor}
        self.edge: dict[tuple[int, int], int] = {}

    def color(self, u: int, v: int) -> int | None:
        return self.edge.get((u, v) if u < v else (v, u))

    def is_free(self, v: int, c: int) -> bool:
        return c not in self.at[v]

    def free_color(self, v: int) -> int:
        used = self.at[v]
        for c in range(self.palette):
            if c not in used:
                return c
        raise AssertionError("no free color; palette smaller than degree + 1")

    def set(self, u: int, v: int, c: int) -> None:
        self.edge[(u, v) if u < v else (v, u)] = c
        self.at[u][c] = v
        self.at[v][c] = u

    def unset(self, u: int, v: int) -> int:
        c = self.edge.pop((u, v) if u < v else (v, u))
        del self.at[u][c]
        del self.at[v][c]
        return c


def _maximal_fan(st: _Coloring, x: int, f0: int) -> list[int]:
    fan = [f0]
    in_fan = {f0}
    while True:
        last = fan[-1]
        nxt = None
        # lowest color that is free on the last fan vertex and colors an edge at x
        for c in sorted(st.at[x]):
            if st.is_free(last, c):
                u = st.at[x][c]
                if u not in in_fan:
                    nxt = u
                    break
        if nxt is None:
            return fan
        fan.append(nxt)
        in_fan.add(nxt)


def _invert_cd_path(st: _Coloring, x: int, c: int, d: int) -> None:
    # c is free at x, so the path leaves x along its d edge (if any)
    path = []
    v, col = x, d
    while col in st.at[v]:
        u = st.at[v][col]
        path.append((v, u, col))
        v, col = u, (c if col == d else d)
    for v, u, _ in path:
        st.unset(v, u)
    for v, u, col in path:
        st.set(v, u, d if col == c else c)


def edge_coloring(g: TrainingGraph) -> DependencyPartition:
    """Proper edge coloring with at most ``max_degree + 1`` colors (Misra-Gries).

    Edges are colored in index order and every choice takes the lowest
    available color or vertex, so the result is deterministic. Color ids are
    renumbered by first appearance in edge order.
    """
    if g.m == 0:
        raise EmptyGraph("cannot color a graph without edges")
    delta = max_instance_frequency(g)
    st = _Coloring(g.n, delta + 1)
    for x, f0 in g.edges:
        fan = _maximal_fan(st, x, f0)
        c = st.free_color(x)
        d = st.free_color(fan[-1])
        _invert_cd_path(st, x, c, d)
        w = next(i for i, f in enumerate(fan) if st.is_free(f, d))
        fan = fan[: w + 1]
        # rotate: each fan edge takes the color of the next one
        for i in range(len(fan) - 1):
            nc = st.unset(x, fan[i + 1])
            st.set(x, fan[i], nc)
        st.set(x, fan[-1], d)

    raw = [st.edge[e] for e in g.edges]
    relabel: dict[int, int] = {}
    for c in raw:
        relabel.setdefault(c, len(relabel))
    return DependencyPartition(tuple(relabel[c] for c in raw), len(relabel))


def dependency_partition(g: TrainingGraph) -> list[frozenset[int]]:
    """Color classes of :func:`edge_coloring` as sets of edge indices."""
    return [frozenset(c) for c in edge_coloring(g).classes()]


@dataclass(frozen=True)
class EffectiveSize:
    ratio: Fraction
    rho: int
    m: int
    n: int
    mean_degree: float

    def __float__(self) -> float:
        return float(self.ratio)


def effective_training_size(g: TrainingGraph) -> EffectiveSize:
    """``m / rho``, the number of examples per unit of maximal dependence."""
    if g.m == 0:
        raise EmptyGraph("effective training size needs at least one edge")
    rho = max_instance_frequency(g)
    return EffectiveSize(Fraction(g.m, rho), rho, g.m, g.n, 2.0 * g.m / g.n)


def maximum_matching(g: TrainingGraph) -> list[int]:
    """Edge indices of a maximum-cardinality matching (Edmonds' blossom).

    Starts from the greedy matching in edge-index order and augments along
    shortest alternating paths, scanning roots and neighbors by lowest index.
    """
    n = g.n
    adj = g.neighbors()
    match = [-1] * n
    for i, j in g.edges:
        if match[i] == -1 and match[j] == -1:
            match[i], match[j] = j, i

    def find_path(root: int) -> tuple[int, list[int]]:
        used = [False] * n
        parent = [-1] * n
        base = list(range(n))
        used[root] = True
        q = deque([root])

        def lca(a: int, b: int) -> int:
            seen = [False] * n
            while True:
                a = base[a]
                seen[a] = True
                if match[a] == -1:
                    break
                a = parent[match[a]]
            while True:
                b = base[b]
                if seen[b]:
                    return b
                b = parent[match[b]]

        def mark(v: int, b: int, child: int, blossom: list[bool]) -> None:
            while base[v] != b:
                blossom[base[v]] = blossom[base[match[v]]] = True
                parent[v] = child
                child = match[v]
                v = parent[match[v]]

        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and parent[match[to]] != -1):
                    cur = lca(v, to)
                    blossom = [False] * n
                    mark(v, cur, to, blossom)
                    mark(to, cur, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if match[to] == -1:
                        return to, parent
                    used[match[to]] = True
                    q.append(match[to])
        return -1, parent

    for root in range(n):
        if match[root] != -1 or not adj[root]:
            continue
        v, parent = find_path(root)
        while v != -1:
            pv = parent[v]
            ppv = match[pv]
            match[v], match[pv] = pv, v
            v = ppv

    index = {e: k for k, e in enumerate(g.edges)}
    return sorted(index[(i, match[i])] for i in range(n) if match[i] > i)


@dataclass(frozen=True)
class PruneReport:
    k: int
    surviving_vertices: tuple[int, ...]
    discarded_edges: tuple[int, ...]
    spanning: bool  # True when every vertex kept degree k, i.e. a k-factor was found
    regular: bool  # post-check: every surviving vertex has degree exactly k


def prune_to_regular(g: TrainingGraph, k: int) -> tuple[TrainingGraph, PruneReport]:
    """Discard edges so that the non-isolated vertices form a k-regular graph.

    ``k == 1`` keeps a maximum matching, which is exact. For ``k >= 2`` a
    largest k-regular subgraph is NP-hard to find, so this peels vertices of
    degree below ``k`` (k-core), drops edges between two over-full vertices
    and, when stuck, cuts one edge at the lowest over-full vertex and peels
    again. Vertex indices are never renumbered; discarded vertices simply end
    up isolated.
    """
    k = int(k)
    if k < 1:
        raise InfeasibleDegree(f"k must be >= 1, got {k}")
    delta = max_instance_frequency(g)
    if k > delta:
        raise InfeasibleDegree(f"k={k} exceeds the maximum degree {delta}")

    if is_regular(g, k):
        keep = list(range(g.m))
    elif k == 1:
        keep = maximum_matching(g)
    else:
        keep = _peel_and_trim(g, k)

    sub = g.edge_subgraph(keep)
    deg = degree_sequence(sub)
    surviving = tuple(int(v) for v in np.flatnonzero(deg))
    discarded = tuple(sorted(set(range(g.m)) - set(keep)))
    regular = bool(np.all(deg[list(surviving)] == k)) if surviving else True
    report = PruneReport(k, surviving, discarded, len(surviving) == g.n, regular)
    return sub, report


def _peel_and_trim(g: TrainingGraph, k: int) -> list[int]:
    alive = set(range(g.m))
    inc = [set(s) for s in g.incidence()]
    ends = g.edges

    def drop(e: int) -> None:
        alive.discard(e)
        i, j = ends[e]
        inc[i].discard(e)
        inc[j].discard(e)

    while True:
        # peel: anything below k cannot be part of a k-regular subgraph
        stack = [v for v in range(g.n) if 0 < len(inc[v]) < k]
        while stack:
            v = stack.pop()
            for e in sorted(inc[v]):
                i, j = ends[e]
                drop(e)
                u = j if i == v else i
                if 0 < len(inc[u]) < k:
                    stack.append(u)
        # trim edges joining two over-full vertices, lowest index first
        for e in sorted(alive):
            i, j = ends[e]
            if len(inc[i]) > k and len(inc[j]) > k:
                drop(e)
        over = [v for v in range(g.n) if len(inc[v]) > k]
        if not over:
            return sorted(alive)
        v = over[0]
        drop(min(inc[v]))


# --- edge-list text format -------------------------------------------------


def parse_edge_list(text: str, n: int | None = None):
    """Parse ``i j`` or ``i j y`` lines; ``#`` starts a comment.

    A header comment ``# n=<count>`` fixes the vertex count; otherwise ``n``
    falls back to the argument, then to ``max index + 1``. Returns
    ``(graph, labels)`` where labels is None unless every line carries one.
    """
    pairs = []
    labels = []
    header_n = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip().replace(" ", "")
            if body.startswith("n="):
                header_n = int(body[2:])
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 'i j' or 'i j y', got {raw!r}")
        pairs.append((int(tok[0]), int(tok[1])))
        if len(tok) == 3:
            y = int(float(tok[2]))
            if y not in (-1, 1):
                raise ValueError(f"line {lineno}: label must be -1 or +1, got {tok[2]}")
            labels.append(y)
    if labels and len(labels) != len(pairs):
        raise ValueError("labels must be given on every line or on none")
    if header_n is None:
        header_n = n
    if header_n is None:
        header_n = max((max(p) for p in pairs), default=0) + 1
    g = from_edge_list(header_n, pairs)
    return g, (np.array(labels, dtype=np.int64) if labels else None)


def format_edge_list(g: TrainingGraph, labels=None) -> str:
    """Serialize with a ``# n=`` header and edges sorted by ``(i, j)``."""
    order = sorted(range(g.m), key=lambda e: g.edges[e])
    lines = [f"# n={g.n}"]
    for e in order:
        i, j = g.edges[e]
        if labels is None:
            lines.append(f"{i} {j}")
        else:
            lines.append(f"{i} {j} {int(labels[e]):+d}")
    return "\n".join(lines) + "\n"


def read_edge_list(path: str | os.PathLike, n: int | None = None):
    with open(path) as fh:
        return parse_edge_list(fh.read(), n)


def write_edge_list(path: str | os.PathLike, g: TrainingGraph, labels=None) -> None:
    with open(path, "w") as fh:
        fh.write(format_edge_list(g, labels))
