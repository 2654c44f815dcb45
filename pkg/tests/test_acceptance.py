"""Exit criteria, one test each; the terminal summary prints PASS/FAIL per criterion."""
import itertools
import math
import time

import mpmath
import numpy as np
import pytest
from scipy import stats

from pairbounds.bounds import (
    empirical_rademacher_mc,
    er_max_degree_bound,
    er_rad_kernel_bound,
    rad_generic_bound,
    rad_kernel_bound,
    stab_generic_bound,
    stab_ramp_bound,
    stab_svm_bound,
)
from pairbounds.experiments import defect_study
from pairbounds.labeler import er_sample
from pairbounds.learner import classification_stability_probe
from pairbounds.pair_graph import TrainingGraph, degree_sequence, edge_coloring, line_graph
from pairbounds.relations import InstanceDistribution, RelationSpec, build_dataset, sample_instances

import oracles

E_INV = math.exp(-1)


@pytest.mark.acceptance(1, "handshaking and line-graph degree identity on 1000 random graphs, < 5 s")
def test_graph_identities(corpus):
    assert len(corpus) == 1000 and max(g.n for g in corpus) <= 200
    t0 = time.perf_counter()
    for g in corpus:
        deg = degree_sequence(g)
        assert int(deg.sum()) == 2 * g.m
        if g.m == 0:
            continue
        ld = line_graph(g).degrees()
        ea = g.edge_array
        assert np.array_equal(ld, deg[ea[:, 0]] + deg[ea[:, 1]] - 2)
    elapsed = time.perf_counter() - t0
    # the identity is checked against brute-force shared-endpoint adjacency on the smaller graphs
    for g in corpus[:300]:
        if 0 < g.m <= 300:
            assert np.array_equal(line_graph(g).degrees(), oracles.brute_line_adjacency(g.edges).sum(axis=1))
    assert elapsed < 5.0


@pytest.mark.acceptance(2, "edge coloring proper with <= Delta+1 colors; matches exhaustive chromatic index for n <= 6, < 30 s")
def test_coloring(corpus):
    t0 = time.perf_counter()
    for g in corpus:
        if g.m == 0:
            continue
        part = edge_coloring(g)
        delta = int(degree_sequence(g).max())
        assert delta <= part.num_colors <= delta + 1
        for inc in g.incidence():
            cols = [part.color_of[e] for e in inc]
            assert len(cols) == len(set(cols))
    checked = 0
    for n in range(2, 7):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1, 2 ** len(pairs)):
            es = [p for b, p in enumerate(pairs) if mask >> b & 1]
            chi = oracles.chromatic_index(es)
            used = edge_coloring(TrainingGraph(n, tuple(es))).num_colors
            assert chi <= used <= chi + 1
            checked += 1
    assert checked == sum(2 ** math.comb(n, 2) - 1 for n in range(2, 7))
    assert time.perf_counter() - t0 < 30.0


@pytest.mark.acceptance(3, "G(n,m) uniform by chi-square for (3,2) and (4,3) over 1e5 draws; mean degree 2m/n within 2%, < 30 s")
def test_er_fidelity():
    t0 = time.perf_counter()
    for n, m in [(3, 2), (4, 3)]:
        bits = {p: 1 << b for b, p in enumerate(itertools.combinations(range(n), 2))}
        rng = np.random.default_rng(100 + n)
        counts, deg_total, draws = {}, np.zeros(n), 100_000
        for _ in range(draws):
            g = er_sample(n, m, rng)
            k = sum(bits[e] for e in g.edges)
            counts[k] = counts.get(k, 0) + 1
            for i, j in g.edges:
                deg_total[i] += 1
                deg_total[j] += 1
        cells = math.comb(math.comb(n, 2), m)
        assert len(counts) == cells
        stat = stats.chisquare(np.array(list(counts.values()), dtype=float)).statistic
        assert stat < stats.chi2.ppf(0.999, cells - 1)
        assert np.all(np.abs(deg_total / draws / (2 * m / n) - 1) <= 0.02)
    assert time.perf_counter() - t0 < 30.0


@pytest.mark.acceptance(4, "max-degree cap for G(100,500), delta=0.1: exceedance fraction <= 0.1 over 1000 draws, < 10 s")
def test_max_degree_coverage():
    cap = float(oracles.hp_er_max_degree(100, 500, 0.1))
    assert cap == pytest.approx(24.40, abs=5e-3)
    assert er_max_degree_bound(100, 500, 0.1) == pytest.approx(cap, rel=1e-12)
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    hits = 0
    for _ in range(1000):
        g = er_sample(100, 500, rng)
        hits += np.bincount(np.ravel(g.edges), minlength=100).max() >= cap
    assert hits / 1000 <= 0.1
    assert time.perf_counter() - t0 < 10.0


@pytest.mark.acceptance(5, "worked bound values agree with 50-digit evaluation to 1e-6; stability identities to 1e-12")
def test_bound_arithmetic():
    cases = [
        (rad_generic_bound(0.1, 0.2, 3, 200, 0.05).total, oracles.hp_rad_generic(0.1, 0.2, 3, 200, 0.05), 0.4731),
        (rad_kernel_bound(0, 1, 1, 1, 100, 0.5).total, oracles.hp_rad_kernel(0, 1, 1, 1, 100, 0.5), 0.4833),
        (stab_generic_bound(0, 0.005, 2, 100, 1, E_INV).total,
         oracles.hp_stab_generic(0, 0.005, 2, 100, 1, mpmath.exp(-1)), 0.4643),
        (stab_ramp_bound(0, 0.005, 0.5, 2, 100, E_INV).total,
         oracles.hp_stab_ramp(0, 0.005, 0.5, 2, 100, mpmath.exp(-1)), 0.7871),
        (stab_svm_bound(0, 1, 1, 2, 100, E_INV).total, oracles.hp_stab_svm(0, 1, 1, 2, 100, mpmath.exp(-1)), 0.4643),
        (er_max_degree_bound(100, 500, 0.1), oracles.hp_er_max_degree(100, 500, 0.1), 24.40),
        (er_rad_kernel_bound(0, 1, 1, 100, 500, 0.1).total, oracles.hp_er_rad_kernel(0, 1, 1, 100, 500, 0.1)[1],
         0.8900),
    ]
    for got, exact, printed in cases:
        assert oracles.rel_close(got, exact, 1e-6)
        assert abs(float(exact) - printed) <= 5e-4 * max(1.0, printed)
    C = er_rad_kernel_bound(0, 1, 1, 100, 500, 0.1).inputs["C"]
    assert oracles.rel_close(C, oracles.hp_er_rad_kernel(0, 1, 1, 100, 500, 0.1)[0], 1e-6)

    rng = np.random.default_rng(5)
    for _ in range(500):
        B, lam = rng.uniform(0.1, 3), 10 ** rng.uniform(-3, 1)
        rho, m = int(rng.integers(1, 100)), int(rng.integers(100, 10_000))
        delta, remp = rng.uniform(1e-4, 0.999), rng.uniform(0, 2)
        beta = B * B / (2 * lam * m)
        svm = stab_svm_bound(remp, B, lam, rho, m, delta).total
        for other in (stab_ramp_bound(remp, beta, 1.0, rho, m, delta).total,
                      stab_generic_bound(remp, beta, rho, m, 1.0, delta).total):
            assert abs(svm - other) <= 1e-12 * abs(other)


@pytest.mark.acceptance(6, "leave-one-out change <= B^2/(2 lam m) + 2 tau_h on 20 datasets with m=50, d=2, < 2 min")
def test_stability():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    for k in range(20):
        seed = int(rng.integers(2**31))
        if k % 2 == 0:
            dist = InstanceDistribution.mixture(2, 2, float(rng.uniform(0.1, 0.6)))
            rel, mode = RelationSpec.equivalence(dist.centers), ("product", "absdiff")[k % 4 // 2]
        else:
            dist = InstanceDistribution.cube(2)
            rel, mode = RelationSpec.total_order(rng.normal(size=2)), "diff"
        n = int(rng.integers(15, 60))
        X = sample_instances(dist, n, seed)
        data = build_dataset(X, er_sample(n, 50, seed), rel, mode)
        lam = float(10 ** rng.uniform(-2, 0))
        probe = classification_stability_probe(data, lam, probe_points=200, removals=20, seed=seed)
        assert probe.certified == data.norm_bound**2 / (2 * lam * 50)
        assert probe.observed_sup <= probe.certified + probe.slack
        assert probe.exact_sup <= probe.certified + probe.slack
    assert time.perf_counter() - t0 < 120.0


@pytest.mark.acceptance(7, "ER defect study (n=200, m=2000, 100 trials, delta=0.1): risk_mc <= SVM stability bound in >= 99 trials, < 5 min")
def test_defect_study_coverage():
    t0 = time.perf_counter()
    rows = defect_study({"regime": "er", "n": 200, "m": 2000, "trials": 100, "delta": 0.1, "seed": 7})
    assert len(rows) == 100
    covered = sum(r["risk_mc"] <= r["bound_stability"] for r in rows)
    assert covered >= 99
    assert time.perf_counter() - t0 < 300.0


@pytest.mark.acceptance(8, "star (m/rho=1, vacuous) vs 2-regular (m/rho=100): star total larger in 100/100 paired trials")
def test_regime_separation():
    common = {"n": 200, "trials": 100, "delta": 0.1, "seed": 8, "mc_samples": 5000}
    star = defect_study({**common, "regime": "star", "m": 199})
    reg = defect_study({**common, "regime": "regular", "k": 2})
    assert all(r["effective_size"] == 1 and r["m"] == 199 for r in star)
    assert all(r["effective_size"] == 100 and r["m"] == 200 for r in reg)
    assert all(r["bound_stability"] >= 1 for r in star)
    assert sum(s["bound_stability"] > r["bound_stability"] for s, r in zip(star, reg)) == 100


@pytest.mark.acceptance(9, "Monte-Carlo Rademacher <= 2W sqrt(tr K)/m + 3 SE on 50 feature sets; equals 2W||phi|| at m=1")
def test_rademacher_cross_check():
    rng = np.random.default_rng(9)
    for k in range(50):
        m, d = int(rng.integers(1, 300)), int(rng.integers(1, 6))
        F = rng.normal(size=(m, d)) * rng.uniform(0.1, 2)
        W = float(rng.uniform(0.1, 5))
        est = empirical_rademacher_mc(F, W, draws=2000, seed=k)
        jensen = 2 * W * math.sqrt(float(np.sum(F * F))) / m
        assert est.value <= jensen + 3 * est.stderr
    for _ in range(20):
        phi, W = rng.normal(size=(1, 3)), float(rng.uniform(0.1, 5))
        est = empirical_rademacher_mc(phi, W, draws=500, seed=1)
        assert est.value == pytest.approx(2 * W * np.linalg.norm(phi), rel=4 * np.finfo(float).eps)
        assert est.stderr <= 4 * np.finfo(float).eps * est.value
