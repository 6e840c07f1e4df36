from fractions import Fraction
from itertools import product as pairs_of

import pytest

from thompson_density.constructions import clone, commutator_wrap
from thompson_density.element import (
    IDENTITY, Dyadic, Element, PLMap, commutator, commute, conjugate, endpoint_slopes,
    evaluate_word, exponent_sums, first_slope_exponent, from_plmap, in_commutator,
    in_commutator_by_kernel, in_commutator_by_slopes, invert, multiply, normalize_exponents,
    power, product, support_bounds, to_plmap, translate_support, x, x0, x1,
)
from thompson_density.sampling import RngStream, random_element
from thompson_density.trees import enumerate_reduced_pairs


def elements_up_to(n):
    return [Element.from_pair(p) for s in range(1, n + 1) for p in enumerate_reduced_pairs(s)]


def frac_points(m: PLMap):
    return [(px.to_fraction(), py.to_fraction()) for px, py in m.points]


def evaluate(points, t: Fraction) -> Fraction:
    for (x0_, y0), (x1_, y1) in zip(points, points[1:]):
        if x0_ <= t <= x1_:
            return y0 + (t - x0_) * (y1 - y0) / (x1_ - x0_)
    raise ValueError(t)


def compose_oracle(a: Element, b: Element):
    """Breakpoints of 'a then b' with Fractions, independent of PLMap.then."""
    pa, pb = frac_points(to_plmap(a)), frac_points(to_plmap(b))
    inv_a = [(y, x_) for x_, y in pa]
    xs = sorted({p for p, _ in pa} | {evaluate(inv_a, p) for p, _ in pb})
    return [(t, evaluate(pb, evaluate(pa, t))) for t in xs]


def same_map(points, m: PLMap) -> bool:
    ref = frac_points(m)
    xs = {p for p, _ in points} | {p for p, _ in ref}
    return all(evaluate(points, t) == evaluate(ref, t) for t in xs)


def test_dyadic():
    d = Dyadic(6, 3)
    assert (d.num, d.exp) == (3, 2)
    assert d + Dyadic(1, 2) == Dyadic(1)
    assert Dyadic(0, 5) == Dyadic(0)
    assert Dyadic(3, 2) - Dyadic(1, 1) == Dyadic(1, 2)
    assert Dyadic(3, 2).scale2(2) == Dyadic(3)
    assert Dyadic.from_json(Dyadic(5, 3).to_json()) == Dyadic(5, 3)
    assert Dyadic(1, 1) < Dyadic(3, 2)
    assert float(Dyadic(3, 2)) == 0.75


def test_plmap_validation():
    with pytest.raises(ValueError):
        PLMap([(Dyadic(0), Dyadic(0)), (Dyadic(1, 1), Dyadic(3, 4)), (Dyadic(1), Dyadic(1))])
    with pytest.raises(ValueError):
        PLMap([(Dyadic(0), Dyadic(0)), (Dyadic(1, 1), Dyadic(1, 1))])
    m = to_plmap(x0())
    assert PLMap.from_json(m.to_json()) == m
    assert list(to_plmap(IDENTITY).points) == [(Dyadic(0), Dyadic(0)), (Dyadic(1), Dyadic(1))]


def test_generators():
    assert x0().encode() == "11000|10100"
    assert x1().encode() == "1011000|1010100"
    assert x0().size == 2 and x1().size == 3
    assert endpoint_slopes(x0()) == (1, -1)
    assert endpoint_slopes(x1()) == (0, -1)
    assert exponent_sums(x0()) == (1, 0)
    assert exponent_sums(x1()) == (0, 1)
    assert support_bounds(x1()) == (Dyadic(1, 1), Dyadic(1))
    assert first_slope_exponent(x1()) == 1
    assert support_bounds(IDENTITY) == "empty"
    with pytest.raises(ValueError):
        first_slope_exponent(IDENTITY)


def test_relators_and_infinite_generators():
    a, b = x0(), x1()
    ab = a * invert(b)
    assert commutator(ab, conjugate(b, a)).is_identity()
    assert commutator(ab, conjugate(b, power(a, 2))).is_identity()
    assert x(0) == a and x(1) == b
    for i in range(1, 5):
        assert conjugate(x(i), a) == x(i + 1)
        assert endpoint_slopes(x(i)) == (0, -1)
    assert conjugate(x(2), b) == x(3)


def test_multiply_matches_composition_up_to_four_carets():
    els = elements_up_to(4)
    for a, b in pairs_of(els, repeat=2):
        assert same_map(compose_oracle(a, b), to_plmap(multiply(a, b)))


def test_group_axioms_random():
    rng = RngStream(1)
    for _ in range(2000):
        a, b, c = (random_element(1 + rng.randbelow(12), rng) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * IDENTITY == a == IDENTITY * a
        assert (a * invert(a)).is_identity()
        assert invert(invert(a)) == a


def test_inverse_and_round_trip_exhaustive():
    for a in elements_up_to(5):
        m = to_plmap(a)
        assert to_plmap(invert(a)) == m.inverse()
        assert from_plmap(m) == a


def test_power():
    assert power(x0(), 0).is_identity()
    assert power(x1(), 3) == x1() * (x1() * x1())
    assert power(x0(), -2) == invert(x0() * x0())
    rng = RngStream(2)
    for _ in range(300):
        f = random_element(2 + rng.randbelow(6), rng)
        if f.is_identity():
            continue
        k = rng.randbelow(7) - 3
        if k:
            assert first_slope_exponent(power(f, k)) == k * first_slope_exponent(f)


def test_exponent_sum_word_bookkeeping():
    w = product([x0(), x1(), x1(), invert(x0())])
    assert exponent_sums(w) == (0, 2)
    rng = RngStream(3)
    letters = [x0(), x1(), invert(x0()), invert(x1())]
    counts = [(1, 0), (0, 1), (-1, 0), (0, -1)]
    for _ in range(200):
        idx = [rng.randbelow(4) for _ in range(1 + rng.randbelow(12))]
        e = product(letters[i] for i in idx)
        expect = (sum(counts[i][0] for i in idx), sum(counts[i][1] for i in idx))
        assert exponent_sums(e) == expect


def test_homomorphisms_additive():
    rng = RngStream(4)
    for _ in range(1000):
        a = random_element(1 + rng.randbelow(10), rng)
        b = random_element(1 + rng.randbelow(10), rng)
        s, t, st = endpoint_slopes(a), endpoint_slopes(b), endpoint_slopes(a * b)
        assert st == (s.a + t.a, s.b + t.b)


def test_commutator_membership_three_ways():
    for a in elements_up_to(5):
        assert in_commutator(a) == in_commutator_by_slopes(a) == in_commutator_by_kernel(a)
    assert in_commutator(IDENTITY) and not in_commutator(x0())
    assert in_commutator(commutator(x0(), x1()))
    assert commutator(x0(), x0()).is_identity()


def test_commutator_wrap_lands_in_kernel():
    for s in range(1, 5):
        for p in enumerate_reduced_pairs(s):
            assert in_commutator(commutator_wrap(p))


def test_caret_breakpoint_bound():
    for a in elements_up_to(6):
        for px, py in to_plmap(a).points:
            assert a.size >= max(px.exp, py.exp)
        if not a.is_identity():
            assert abs(first_slope_exponent(a)) <= a.size


def test_disjoint_supports_commute():
    left, right = clone(x1(), "0"), clone(x0(), "1")
    assert commutator(left, right).is_identity()
    lo, hi = support_bounds(left)
    assert hi <= Dyadic(1, 1)


def test_translate_support():
    assert translate_support([x0(), x1()]) == [x0(), x1()]
    # x1 is a copy of x0 on [1/2, 1]; moved left it becomes the copy on [0, 1/2]
    assert translate_support([x1()]) == [clone(x0(), "0")]
    w = commutator_wrap(enumerate_reduced_pairs(3)[5])
    out = translate_support([w])
    assert endpoint_slopes(out[0]).a != 0
    a, b = clone(x0(), "10"), clone(x1(), "11")
    ta, tb = translate_support([a, b])
    assert commute(a, b) and commute(ta, tb)
    with pytest.raises(ValueError):
        translate_support([IDENTITY])


def test_normalize_exponents():
    out = normalize_exponents([x0(), x1()])
    assert [exponent_sums(g).a for g in out] == [1, 0]
    out = normalize_exponents([x0(), x0() * x1()])
    assert exponent_sums(out[0]).a != 0 and exponent_sums(out[1]).a == 0
    gens = [power(x0(), 4) * x1(), power(x0(), -6), x1() * power(x0(), 9)]
    out, words = normalize_exponents(gens, return_words=True)
    e0 = [exponent_sums(g).a for g in out]
    assert e0[0] == 1 and e0[1:] == [0, 0]
    for g, w in zip(out, words):
        assert evaluate_word(w, gens) == g
    with pytest.raises(ValueError):
        normalize_exponents([x1(), commutator(x0(), x1())])
