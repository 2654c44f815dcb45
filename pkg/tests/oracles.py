"""Independent reference computations used to freeze expected values.

Nothing here imports the code under test except for plain data types.
"""
import itertools
import math

import mpmath
import numpy as np


def brute_line_adjacency(edges):
    """Line-graph adjacency by checking every pair of edges for a shared endpoint."""
    E = np.asarray(edges).reshape(-1, 2)
    shared = (
        (E[:, None, 0] == E[None, :, 0]) | (E[:, None, 0] == E[None, :, 1])
        | (E[:, None, 1] == E[None, :, 0]) | (E[:, None, 1] == E[None, :, 1])
    )
    np.fill_diagonal(shared, False)
    return shared


def edge_colorable(edges, k):
    """Backtracking: can ``edges`` be properly colored with ``k`` colors?"""
    m = len(edges)
    used = {}
    colors = [-1] * m
    # most constrained first: edges at high-degree vertices
    deg = {}
    for i, j in edges:
        deg[i] = deg.get(i, 0) + 1
        deg[j] = deg.get(j, 0) + 1
    order = sorted(range(m), key=lambda e: -(deg[edges[e][0]] + deg[edges[e][1]]))

    def go(t, top):
        if t == m:
            return True
        e = order[t]
        i, j = edges[e]
        bi, bj = used.setdefault(i, set()), used.setdefault(j, set())
        # symmetry breaking: never open more than one new color at a time
        for c in range(min(k, top + 1)):
            if c in bi or c in bj:
                continue
            bi.add(c)
            bj.add(c)
            colors[e] = c
            if go(t + 1, max(top, c + 1)):
                return True
            bi.discard(c)
            bj.discard(c)
        return False

    return go(0, 0)


def chromatic_index(edges):
    if not edges:
        return 0
    deg = {}
    for i, j in edges:
        deg[i] = deg.get(i, 0) + 1
        deg[j] = deg.get(j, 0) + 1
    delta = max(deg.values())
    return delta if edge_colorable(list(edges), delta) else delta + 1


def brute_max_matching(edges):
    """Size of a maximum matching by trying subsets from largest down."""
    edges = list(edges)
    for size in range(len(edges), 0, -1):
        for sub in itertools.combinations(edges, size):
            verts = [v for e in sub for v in e]
            if len(verts) == len(set(verts)):
                return size
    return 0


def all_graphs(n, m):
    """Every edge set of size ``m`` on ``n`` labeled vertices, as frozensets."""
    pairs = list(itertools.combinations(range(n), 2))
    return [frozenset(c) for c in itertools.combinations(pairs, m)]


mpmath.mp.dps = 50


def mp(x):
    return mpmath.mpf(x)


def hp_rad_generic(remp, rad, rho, m, delta):
    return mp(remp) + mp(rad) + mpmath.sqrt((mp(rho) + 1) / (2 * mp(m)) * mpmath.log(1 / mp(delta)))


def hp_rad_kernel(remp, B, gamma, rho, m, delta):
    return (mp(remp) + 4 * mp(B) / (mp(gamma) * mpmath.sqrt(m))
            + mpmath.sqrt((mp(rho) + 1) / (2 * mp(m)) * mpmath.log(1 / mp(delta))))


def hp_stab_generic(remp, beta, rho, m, M, delta):
    beta, rho, m = mp(beta), mp(rho), mp(m)
    return mp(remp) + 4 * rho * beta + (4 * m * beta + mp(M)) * mpmath.sqrt(rho / m * mpmath.log(1 / mp(delta)))


def hp_stab_ramp(remp, beta, gamma, rho, m, delta):
    beta, gamma, rho, m = mp(beta), mp(gamma), mp(rho), mp(m)
    return (mp(remp) + 4 * rho * beta / gamma
            + (4 * m * beta / gamma + 1) * mpmath.sqrt(rho / m * mpmath.log(1 / mp(delta))))


def hp_stab_svm(remp, B, lam, rho, m, delta):
    B, lam, rho, m = mp(B), mp(lam), mp(rho), mp(m)
    return (mp(remp) + 2 * rho * B**2 / (lam * m)
            + (2 * B**2 / lam + 1) * mpmath.sqrt(rho / m * mpmath.log(1 / mp(delta))))


def hp_er_max_degree(n, m, delta):
    n, m = mp(n), mp(m)
    return 2 * m / n * (1 + mpmath.sqrt(3 * n / (2 * m) * mpmath.log(n / mp(delta))))


def hp_er_rad_kernel(remp, B, gamma, n, m, delta):
    n, m, delta = mp(n), mp(m), mp(delta)
    C = 1 + mpmath.sqrt(3 * n / (2 * m) * mpmath.log(2 * n / delta))
    total = (mp(remp) + mpmath.sqrt(32) * mp(B) / (mp(gamma) * mpmath.sqrt(n))
             + mpmath.sqrt((C + 1) / n * mpmath.log(2 / delta)))
    return C, total


def grid_minimize(f, lo, hi, steps=200001):
    xs = np.linspace(lo, hi, steps)
    vals = np.array([f(x) for x in xs])
    k = int(vals.argmin())
    return xs[k], vals[k]


def rel_close(a, b, rtol):
    a, b = mp(a), mp(b)
    return abs(a - b) <= rtol * max(abs(b), mpmath.mpf("1e-300"))


def within(a, b, tol=1e-4):
    return math.isclose(float(a), float(b), abs_tol=tol)
