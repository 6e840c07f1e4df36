from collections import Counter

import pytest
from scipy.stats import chisquare

from thompson_density.density import iter_sphere
from thompson_density.element import Element
from thompson_density.sampling import (
    PAIR_SAMPLER_CAP, RngStream, StratumSpec, acceptance_rate, make_tuple, random_element,
    random_reduced_pair, random_tree, random_tuple, uniform_multiset,
)
from thompson_density.spheres import sphere_size
from thompson_density.trees import enumerate_reduced_pairs, enumerate_trees, is_reduced

P_MIN = 1e-3


def assert_uniform(draws, support):
    counts = Counter(draws)
    assert set(counts) <= set(support)
    observed = [counts.get(s, 0) for s in support]
    assert chisquare(observed).pvalue > P_MIN


def test_tree_uniform():
    rng = RngStream(10)
    support = [t.code for t in enumerate_trees(3)]
    assert_uniform([random_tree(3, rng).code for _ in range(10_000)], support)


def test_pair_uniform():
    rng = RngStream(11)
    support = [p.encode() for p in enumerate_reduced_pairs(3)]
    draws = []
    for _ in range(14_000):
        p = random_reduced_pair(3, rng)
        assert is_reduced(p)
        draws.append(p.encode())
    assert_uniform(draws, support)


@pytest.mark.parametrize("kind,k,n,samples", [("sum", 3, 5, 6_000), ("max", 2, 3, 15_000)])
def test_tuple_uniform(kind, k, n, samples):
    spec = StratumSpec(k, n, kind)
    support = [make_tuple(t, spec).encode() for t in iter_sphere(kind, k, n)]
    assert len(set(support)) == len(support) == sphere_size(kind, k, n)
    rng = RngStream(12)
    draws = []
    for _ in range(samples):
        t = random_tuple(spec, rng)
        assert spec.contains_sizes(t.sizes)
        draws.append(t.encode())
    assert_uniform(draws, support)


def test_multiset_weighting():
    # pool of 3, multisets of size 2: 6 outcomes, repeats included
    rng = RngStream(13)
    pool = [Element.decode(p.encode()) for p in enumerate_reduced_pairs(2)] + [Element.decode("100|100")]
    pool.sort(key=Element.sort_key)
    draw = lambda: pool[rng.randbelow(3)]
    draws = [tuple(pool.index(e) for e in uniform_multiset(3, 2, draw, rng)) for _ in range(6_000)]
    support = [(i, j) for i in range(3) for j in range(i, 3)]
    assert len(support) == 6
    assert_uniform(draws, support)


def test_determinism_and_substreams():
    first = random_element(7, RngStream(5)).encode()
    r1, r2 = RngStream(5), RngStream(5)
    s1 = [random_element(7, r1).encode() for _ in range(50)]
    s2 = [random_element(7, r2).encode() for _ in range(50)]
    assert s1 == s2 and s1[0] == first
    assert random_tree(6, RngStream(5).substream(1)).code == random_tree(6, RngStream(5, (1,))).code
    x = [RngStream(5).substream(i).randbits(64) for i in range(4)]
    assert len(set(x)) == 4
    assert RngStream(5).randbits(64) != RngStream(6).randbits(64)


def test_acceptance_rate_reported():
    rng = RngStream(14)
    assert acceptance_rate(rng, 20) is None
    for _ in range(100):
        random_element(20, rng)
    rate = acceptance_rate(rng, 20)
    # r_n / c_n^2 tends to A_r / A_c^2 ~ 0.32 times a power of n
    assert 0 < rate < 1


def test_errors():
    rng = RngStream(0)
    with pytest.raises(ValueError):
        random_element(0, rng)
    with pytest.raises(ValueError):
        random_element(PAIR_SAMPLER_CAP + 1, rng)
    with pytest.raises(ValueError):
        random_tree(-1, rng)
    with pytest.raises(ValueError):
        StratumSpec(3, 2, "sum")
    with pytest.raises(ValueError):
        StratumSpec(2, 3, "mean")
    with pytest.raises(ValueError):
        RngStream(-1)
    with pytest.raises(ValueError):
        rng.randbelow(0)
    with pytest.raises(ValueError):
        make_tuple([Element.decode("100|100")], StratumSpec(1, 2, "max"))


def test_large_bound_randbelow():
    rng = RngStream(3)
    big = 10 ** 40 + 7
    vals = [rng.randbelow(big) for _ in range(200)]
    assert all(0 <= v < big for v in vals)
    assert max(vals) > big // 2
