import itertools
import json
import math

import numpy as np
import pytest
from scipy import stats

from pairbounds.errors import BadParams, DegreeTooLarge, ParityError, TooManyPairs
from pairbounds.labeler import (
    LabelerSpec,
    complete_graph,
    er_sample,
    expected_degree,
    log_graph_count,
    pair_count,
    pair_rank,
    pair_unrank,
    regular_sample,
    sample_pairs,
    star_sample,
)
from pairbounds.pair_graph import degree_sequence, effective_training_size, is_regular, max_instance_frequency


def pair_bits(n):
    return {p: 1 << b for b, p in enumerate(itertools.combinations(range(n), 2))}


def chi_square_uniform(n, m, draws, seed):
    """Chi-square statistic and 0.999 critical value over all C(C(n,2), m) graphs."""
    cells = math.comb(pair_count(n), m)
    rng = np.random.default_rng(seed)
    bits = pair_bits(n)
    counts = {}
    for _ in range(draws):
        k = sum(bits[e] for e in er_sample(n, m, rng).edges)
        counts[k] = counts.get(k, 0) + 1
    assert len(counts) <= cells
    obs = np.zeros(cells)
    obs[: len(counts)] = list(counts.values())
    stat = stats.chisquare(obs).statistic
    return stat, stats.chi2.ppf(0.999, cells - 1)


def test_pair_ranking_is_bijection():
    for n in range(2, 30):
        ranks = sorted(pair_rank(i, j) for i, j in itertools.combinations(range(n), 2))
        assert ranks == list(range(pair_count(n)))
    r = np.arange(pair_count(2000))
    i, j = pair_unrank(r)
    assert np.all(i < j)
    assert np.array_equal(j * (j - 1) // 2 + i, r)


def test_pair_rank_symmetric():
    assert pair_rank(3, 7) == pair_rank(7, 3) == 24


def test_complete_spec():
    g = sample_pairs(LabelerSpec("complete", 4), 4)
    assert g.m == 6
    assert g.edges == complete_graph(4).edges


def test_explicit_spec():
    g = sample_pairs(LabelerSpec("explicit", 3, edges=[(0, 1)]), 3)
    assert g.n == 3 and g.edges == ((0, 1),)


def test_explicit_spec_keeps_orientation():
    g = sample_pairs(LabelerSpec("explicit", 3, edges=[(2, 1)]))
    assert g.ordered_pairs() == [(2, 1)]


def test_uniform_m_zero():
    g = sample_pairs(LabelerSpec("uniform", 10, m=0, seed=3))
    assert g.m == 0 and g.n == 10


def test_spec_n_mismatch():
    with pytest.raises(BadParams):
        sample_pairs(LabelerSpec("complete", 4), 5)


@pytest.mark.parametrize("seed", [0, 1, 99])
def test_er_full_is_complete(seed):
    assert er_sample(6, 15, seed) == complete_graph(6)


def test_er_too_many():
    with pytest.raises(TooManyPairs):
        er_sample(4, 7, 0)
    with pytest.raises(TooManyPairs):
        LabelerSpec("uniform", 4, m=7)


def test_er_negative_m():
    with pytest.raises(BadParams):
        er_sample(4, -1, 0)


def test_er_n3_m2_frequencies():
    rng = np.random.default_rng(2024)
    counts = {}
    for _ in range(30_000):
        e = er_sample(3, 2, rng).edges
        counts[e] = counts.get(e, 0) + 1
    assert len(counts) == 3
    for c in counts.values():
        assert abs(c / 30_000 - 1 / 3) <= 0.02


def test_er_expected_degree():
    n, m, draws = 20, 60, 20_000
    rng = np.random.default_rng(5)
    total = np.zeros(n)
    for _ in range(draws):
        total += degree_sequence(er_sample(n, m, rng))
    mean = total / draws
    assert expected_degree(n, m) == 6.0
    assert np.all(np.abs(mean / 6.0 - 1) <= 0.02)


UNIFORMITY_CASES = [
    (n, m) for n in range(2, 7) for m in range(1, pair_count(n)) if math.comb(pair_count(n), m) > 1
]


@pytest.mark.parametrize("n,m", UNIFORMITY_CASES)
def test_er_uniformity_chi_square(n, m):
    stat, crit = chi_square_uniform(n, m, 100_000, seed=1000 * n + m)
    assert stat < crit


def test_er_determinism():
    assert er_sample(50, 300, 17) == er_sample(50, 300, 17)
    assert er_sample(50, 300, 17) != er_sample(50, 300, 18)
    spec = LabelerSpec("uniform", 40, m=100, seed=4)
    assert sample_pairs(spec) == sample_pairs(spec)


def test_er_edges_sorted_and_valid():
    g = er_sample(30, 200, 0)
    assert list(g.edges) == sorted(g.edges)
    assert len(set(g.edges)) == 200


def test_regular_cycle():
    g = regular_sample(6, 2)
    assert degree_sequence(g).tolist() == [2] * 6
    assert g.edges == ((0, 1), (0, 5), (1, 2), (2, 3), (3, 4), (4, 5))


def test_regular_parity():
    with pytest.raises(ParityError):
        regular_sample(5, 3)


def test_regular_k3_n4_is_k4():
    assert regular_sample(4, 3) == complete_graph(4)


def test_regular_bad_degree():
    with pytest.raises(DegreeTooLarge):
        regular_sample(4, 4)
    with pytest.raises(BadParams):
        regular_sample(4, 0)


@pytest.mark.parametrize("n,k", [(n, k) for n in range(2, 25) for k in range(1, n) if n * k % 2 == 0])
def test_regular_sample_properties(n, k):
    g = regular_sample(n, k)
    assert is_regular(g, k)
    assert g.m == n * k // 2
    assert max_instance_frequency(g) == k
    assert effective_training_size(g).ratio == n / 2


def test_star_examples():
    assert degree_sequence(star_sample(5, 4)).tolist() == [4, 1, 1, 1, 1]
    assert star_sample(2, 1).edges == ((0, 1),)
    with pytest.raises(TooManyPairs):
        star_sample(5, 5)


def test_star_spec_rho_equals_m():
    g = sample_pairs(LabelerSpec("star", 200, m=199))
    assert max_instance_frequency(g) == g.m == 199


@pytest.mark.parametrize("spec", [
    LabelerSpec("complete", 5),
    LabelerSpec("star", 6, m=3),
    LabelerSpec("regular", 8, k=3),
    LabelerSpec("uniform", 10, m=12, seed=7),
    LabelerSpec("explicit", 4, edges=[(0, 1), (3, 2)]),
], ids=lambda s: s.variant)
def test_spec_json_round_trip(spec):
    obj = json.loads(json.dumps(spec.to_json()))
    assert LabelerSpec.from_json(obj) == spec
    assert sample_pairs(LabelerSpec.from_json(obj)) == sample_pairs(spec)


def test_spec_json_keys():
    assert LabelerSpec("uniform", 10, m=12, seed=7).to_json() == {"variant": "uniform", "n": 10, "m": 12, "seed": 7}


@pytest.mark.parametrize("obj", [
    {"variant": "bogus", "n": 4},
    {"variant": "star", "n": 4},
    {"variant": "regular", "n": 4},
    {"variant": "explicit", "n": 4},
    {"n": 4},
    {"variant": "complete", "n": 4, "features": [1, 2]},
])
def test_spec_rejects_bad_json(obj):
    with pytest.raises(BadParams):
        LabelerSpec.from_json(obj)


def test_log_graph_count():
    assert math.isclose(log_graph_count(6, 7), math.log(math.comb(15, 7)))
    assert log_graph_count(5, 0) == 0.0
