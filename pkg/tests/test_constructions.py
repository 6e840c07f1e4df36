import pytest

from thompson_density import constructions as C
from thompson_density.constructions import (
    VerificationError, address_interval, address_tree, assemble, block_form, burillo_zn, clone,
    clone_subgroup, commutator_tuple, commutator_wrap, f_relators_hold, fpersis_tuple, lemma_z_tuple,
    product_tuple, product_with_z_tuple, prop_spec2_tuple, restrict, standard_fxf, theorem_specs_tuple,
    wreath_tuple, wreath_with_z, zn_generators, zwrz,
)
from thompson_density.density import theoretical_bounds
from thompson_density.element import (
    IDENTITY, Dyadic, commute, conjugate, endpoint_slopes, in_commutator, invert, power,
    support_bounds, x, x0, x1,
)
from thompson_density.enumeration import mu
from thompson_density.sampling import RngStream
from thompson_density.trees import LEAF, TreePair, enumerate_reduced_pairs, is_reduced

ID_PAIR = TreePair.decode("100|100")


def test_addresses():
    assert address_tree("") == (LEAF, 0)
    t, v = address_tree("10")
    assert t.code == "10100" and v == 1
    assert address_interval("10") == (Dyadic(1, 1), Dyadic(3, 2))
    assert address_interval("010") == (Dyadic(1, 2), Dyadic(3, 3))
    with pytest.raises(ValueError):
        address_tree("12")


def test_clone_restrict_round_trip():
    rng = RngStream(1)
    for _ in range(100):
        h = C.random_nonidentity(6, rng)
        addr = C.random_address(rng)
        e = clone(h, addr)
        assert restrict(e, addr) == h
        assert block_form(e, {addr: h})
    assert restrict(x0(), "1") is None


def test_zn_figure_example():
    g = zn_generators([x0()] * 3)
    # the first element reduces from 4 to 3 carets
    raw, first = assemble(C.right_vine(2), {0: x0()})
    assert raw.caret_count == 4 and first.size == 3 and g[0] == first
    assert all(commute(a, b) for a in g for b in g)
    assert len(zn_generators([x1()])) == 1


def test_burillo():
    g = burillo_zn(2)
    assert g[0] == x0() * invert(x1())
    assert g[1] == x(2) * invert(x(3))
    assert commute(g[0], g[1])
    assert endpoint_slopes(g[0]) == (1, 0)
    with pytest.raises(ValueError):
        burillo_zn(0)


def test_standard_fxf():
    g = standard_fxf()
    for h in g[:2]:
        lo, hi = support_bounds(h)
        assert lo >= Dyadic(1, 1) and hi <= Dyadic(1)
    assert (g[0] * g[2] * invert(g[0]) * invert(g[2])).is_identity()
    assert f_relators_hold(g[0], g[1])


def test_clone_subgroup():
    h0, h1 = clone_subgroup("1")
    assert support_bounds(h0)[0] >= Dyadic(1, 1)
    assert f_relators_hold(h0, h1)
    left = clone_subgroup("0")
    assert all(commute(a, b) for a in (h0, h1) for b in left)
    with pytest.raises(ValueError):
        clone_subgroup("")


def test_wreath_with_z():
    g = wreath_with_z([x1()])
    assert len(g) == 2 and g[-1] == x0()
    k = g[0]
    assert commute(conjugate(k, x0()), k)
    z = zwrz()
    assert z[1] == x1() * x(2) * power(x1(), -2)


def test_commutator_wrap():
    for n in range(2, 5):
        for p in enumerate_reduced_pairs(n):
            if p.domain == p.range:
                continue
            e = commutator_wrap(p.domain, p.range)
            assert e.size == n + 2 and in_commutator(e)
    # the single-caret pair is the identity; its wrap reduces away entirely
    assert commutator_wrap(ID_PAIR).is_identity()
    assert commutator_tuple(ID_PAIR).sizes == (1,)
    with pytest.raises(ValueError):
        commutator_wrap(TreePair.decode("11000|11000"))


def test_theorem_specs():
    rng = RngStream(2)
    g = C.random_theorem_specs([x0()], 2, 9, rng)
    assert sum(g.sizes) == 9
    assert g[1] == IDENTITY
    assert not in_commutator(g[0])
    assert abs(g.metadata["lower_bound"] - mu() ** -5) < 1e-20
    with pytest.raises(ValueError):
        theorem_specs_tuple([x0()], 2, 4, x0())
    with pytest.raises(ValueError):
        theorem_specs_tuple([x1()], 2, 9, C.random_payload(4, rng))


def test_lemma_z():
    rng = RngStream(3)
    g = C.random_lemma_z(3, 7, rng)
    assert max(g.sizes) == 7 and g.sizes[-1] == 7
    assert all(commute(a, b) for a in g for b in g)
    single = lemma_z_tuple(1, 4, [C.random_payload(4, rng)])
    assert len(single) == 1 and single.sizes == (4,)
    with pytest.raises(ValueError):
        lemma_z_tuple(2, 6, [x0(), x0()])
    with pytest.raises(ValueError):
        lemma_z_tuple(1, 1, [ID_PAIR])


def test_spec2():
    rng = RngStream(4)
    g = C.random_spec2(x0(), x1(), 10, rng)
    assert g.sizes == (10, 10)
    assert restrict(g[0], "0") == x0() and restrict(g[1], "0") == x1()
    assert g.metadata["lower_bound"] == theoretical_bounds("spec2", n1=2, n2=3)
    with pytest.raises(ValueError):
        prop_spec2_tuple(x1(), x1(), 10, x0(), x0())
    with pytest.raises(ValueError):
        prop_spec2_tuple(x0(), x1(), 7, x0(), x0())


def test_fpersis():
    rng = RngStream(5)
    g = C.random_fpersis(4, 9, rng)
    assert g.sizes == (9,) * 4
    assert all(in_commutator(restrict(h, "0")) for h in g[2:])
    assert abs(g.metadata["lower_bound"] - mu() ** -15 / 4) < 1e-25
    with pytest.raises(ValueError):
        fpersis_tuple(2, 9, x0(), x0(), [])


def test_product_with_z():
    rng = RngStream(6)
    g = C.random_product_with_z([x0(), x1()], 6, rng)
    assert len(g) == 3
    assert all(commute(g[-1], h) for h in g[:2])
    assert [restrict(h, "0") for h in g[:2]] == [x0(), x1()]
    only = product_with_z_tuple([], x0())
    assert len(only) == 1


def test_wreath():
    rng = RngStream(7)
    g = C.random_wreath([x0(), x1()], 8, rng)
    assert len(g) == 3 and g.sizes[-1] == 8
    assert restrict(g[-1], "0") == x0()
    assert restrict(g[0], "010") == x0()
    with pytest.raises(ValueError):
        wreath_tuple([], x0())
    with pytest.raises(ValueError):
        wreath_tuple([x1()], x0())


def test_product():
    g = product_tuple([x0()], [x0()])
    assert len(g) == 2 and commute(g[0], g[1])
    assert restrict(g[0], "0") == x0() and restrict(g[1], "1") == x0()


def test_builders_reject_identity_payloads():
    with pytest.raises(ValueError):
        zn_generators([ID_PAIR])
    with pytest.raises(ValueError):
        C.random_payload(1, RngStream(0))
    with pytest.raises(ValueError):
        zn_generators([TreePair.decode("11000|11000")])


def test_verifier_raises(monkeypatch):
    # a corrupted primitive must surface as a VerificationError
    monkeypatch.setattr(C, "commute", lambda a, b: False)
    with pytest.raises(VerificationError):
        zn_generators([x0(), x0()])
    assert issubclass(VerificationError, AssertionError)


@pytest.mark.parametrize("name", C.CONSTRUCTION_NAMES)
def test_build_by_name(name):
    rng = RngStream(8)
    for _ in range(10):
        gt = C.build(name, k=3 if name in ("fpersis", "lemma_z") else 2, n=9, rng=rng,
                     address=C.random_address(rng))
        assert all(is_reduced(e.pair) for e in gt)
        assert gt.report()["construction"] == name


def test_build_unknown():
    with pytest.raises(ValueError):
        C.build("nope")
