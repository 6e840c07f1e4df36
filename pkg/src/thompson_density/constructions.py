"""Explicit generating tuples built by grafting tree pairs onto small trees.

Every builder returns a GeneratorTuple and runs a structural verifier
before returning; a failed check raises VerificationError.  The verifiers
cross-check the grafted pairs against an independent computation: an
element is cut back to a dyadic interval through its PL map and compared
with the payload that was attached there.

Leaf numbers are 0-based throughout.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .density import theoretical_bounds
from .element import (
    IDENTITY, Dyadic, Element, PLMap, commutator, commute, conjugate, endpoint_slopes, exponent_sums,
    from_plmap, in_commutator, invert, power, product, support_bounds, to_plmap, x, x0, x1,
)
from .sampling import RngStream, random_element
from .trees import LEAF, Tree, TreePair, caret, graft_many, is_reduced, right_vine

Payload = Union[Element, TreePair]


class VerificationError(AssertionError):
    """A construction produced something its defining property rules out."""


@dataclass
class GeneratorTuple:
    elements: Tuple[Element, ...]
    label: str
    params: Dict[str, object] = field(default_factory=dict)
    claimed_type: str = ""
    metadata: Dict[str, object] = field(default_factory=dict)
    checks: List[str] = field(default_factory=list)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i: int) -> Element:
        return self.elements[i]

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(e.size for e in self.elements)

    def report(self) -> dict:
        return {
            "construction": self.label,
            "params": {k: str(v) for k, v in self.params.items()},
            "claimed_type": self.claimed_type,
            "sizes": list(self.sizes),
            "elements": [e.encode() for e in self.elements],
            "checks": {name: True for name in self.checks},
            "metadata": {k: str(v) for k, v in self.metadata.items()},
        }


class _Checker:
    def __init__(self):
        self.passed: List[str] = []

    def __call__(self, name: str, ok: bool, detail: str = ""):
        if not ok:
            raise VerificationError(f"{name} failed" + (f": {detail}" if detail else ""))
        self.passed.append(name)


# ---------------------------------------------------------------- primitives

def _as_pair(p: Payload) -> TreePair:
    if isinstance(p, Element):
        return p.pair
    if isinstance(p, TreePair):
        if not is_reduced(p):
            raise ValueError(f"payload {p.encode()} is not reduced")
        return p
    raise TypeError(f"expected an Element or TreePair, got {type(p).__name__}")


def _as_element(p: Payload) -> Element:
    return p if isinstance(p, Element) else Element.from_pair(_as_pair(p))


def _nontrivial(p: Payload, what: str) -> TreePair:
    pair = _as_pair(p)
    if pair.domain == pair.range:
        raise ValueError(f"{what} must not be the identity")
    return pair


def _elements(gens) -> List[Element]:
    return list(gens.elements if isinstance(gens, GeneratorTuple) else gens)


def assemble(base: Tree, parts: Mapping[int, Payload]) -> Tuple[TreePair, Element]:
    """Graft each payload's trees onto leaf i of two copies of base.

    Returns the raw pair (before reduction) and the reduced element.
    """
    pairs = {i: _as_pair(p) for i, p in parts.items()}
    raw = TreePair(graft_many(base, {i: p.domain for i, p in pairs.items()}),
                   graft_many(base, {i: p.range for i, p in pairs.items()}))
    return raw, Element.from_pair(raw)


def address_tree(address: str) -> Tuple[Tree, int]:
    """The caret path spelled by a bit string and the index of its marked leaf.

    Each letter but the last adds a caret on the left (0) or right (1) leaf
    of the previous one; the last letter picks the marked leaf.  The empty
    address is the single leaf.
    """
    if any(ch not in "01" for ch in address):
        raise ValueError(f"address must be a bit string, got {address!r}")
    parts: List[str] = []
    target = -1
    leaves = 0

    def walk(prefix: str):
        nonlocal target, leaves
        if len(prefix) < len(address) and address.startswith(prefix):
            parts.append("1")
            walk(prefix + "0")
            walk(prefix + "1")
        else:
            if prefix == address:
                target = leaves
            leaves += 1
            parts.append("0")

    walk("")
    return Tree("".join(parts)), target


def address_interval(address: str) -> Tuple[Dyadic, Dyadic]:
    m = len(address)
    left = Dyadic(int(address, 2) if address else 0, m)
    return left, left + Dyadic(1, m)


def clone(p: Payload, address: str) -> Element:
    """Copy of p acting on the dyadic interval named by address."""
    base, v = address_tree(address)
    return assemble(base, {v: p})[1]


def restrict(e: Element, address: str) -> Optional[Element]:
    """e cut back to the dyadic interval of address and rescaled to [0,1].

    None if e does not map that interval onto itself.
    """
    a, b = address_interval(address)
    m = to_plmap(e)
    if m(a) != a or m(b) != b:
        return None
    k = len(address)
    pts = [(a, a)] + [(px, py) for px, py in m.points if a < px < b] + [(b, b)]
    return from_plmap(PLMap([((px - a).scale2(k), (py - a).scale2(k)) for px, py in pts]))


def block_form(e: Element, blocks: Mapping[str, Payload]) -> bool:
    """e acts as blocks[addr] on each listed interval and trivially elsewhere."""
    for addr, h in blocks.items():
        if restrict(e, addr) != _as_element(h):
            return False
    return e == product(clone(h, addr) for addr, h in blocks.items())


def _inside(e: Element, address: str) -> bool:
    if e.is_identity():
        return True
    lo, hi = support_bounds(e)
    a, b = address_interval(address)
    return a <= lo and hi <= b


def f_relators_hold(a: Element, b: Element) -> bool:
    """Both defining relators of F for the pair (a, b)."""
    ab = a * invert(b)
    return (commutator(ab, conjugate(b, a)).is_identity()
            and commutator(ab, conjugate(b, power(a, 2))).is_identity())


def _pairwise_commute(gens: Sequence[Element]) -> bool:
    return all(commute(f, g) for f, g in combinations(gens, 2))


def _vine_address(i: int, leaves: int) -> str:
    """Dyadic address of leaf i in the right vine with `leaves` leaves."""
    return "1" * i + ("0" if i < leaves - 1 else "")


def _left_rooted(t: Tree) -> Tree:
    return caret(t, LEAF)


# ---------------------------------------------------------------- Z^n

def zn_generators(pairs: Sequence[Payload]) -> GeneratorTuple:
    """Payload i on leaf i of the right vine with len(pairs) - 1 carets."""
    n = len(pairs)
    if n < 1:
        raise ValueError("need at least one payload pair")
    ps = [_nontrivial(p, f"payload {i}") for i, p in enumerate(pairs)]
    base = right_vine(n - 1)
    gens = tuple(assemble(base, {i: p})[1] for i, p in enumerate(ps))
    check = _Checker()
    for i, (g, p) in enumerate(zip(gens, ps)):
        addr = _vine_address(i, n)
        check(f"block form of h{i + 1}", block_form(g, {addr: p}))
        check(f"h{i + 1} size", g.size <= (n - 1) + p.caret_count)
    check("pairwise commuting", _pairwise_commute(gens))
    return GeneratorTuple(gens, "zn", {"n": n}, f"Z^{n}", {}, check.passed)


def burillo_zn(n: int) -> GeneratorTuple:
    """x_{2i} x_{2i+1}^-1 for i < n."""
    if n < 1:
        raise ValueError("n must be at least 1")
    gens = tuple(x(2 * i) * invert(x(2 * i + 1)) for i in range(n))
    check = _Checker()
    check("pairwise commuting", _pairwise_commute(gens))
    check("first endpoint slopes", endpoint_slopes(gens[0]) == (1, 0))
    images = [tuple(endpoint_slopes(g)) for g in gens]
    return GeneratorTuple(gens, "burillo", {"n": n}, f"Z^{n}", {"endpoint_slopes": images}, check.passed)


# ---------------------------------------------------------------- copies of F

def clone_subgroup(address: str) -> GeneratorTuple:
    """Copies of x0 and x1 acting on the dyadic interval of address."""
    if not address:
        raise ValueError("address must be a nonempty bit string")
    base, v = address_tree(address)
    h0 = assemble(base, {v: x0()})[1]
    h1 = assemble(base, {v: x1()})[1]
    check = _Checker()
    check("support in interval", _inside(h0, address) and _inside(h1, address))
    check("restriction recovers x0, x1", restrict(h0, address) == x0() and restrict(h1, address) == x1())
    check("F relators", f_relators_hold(h0, h1))
    return GeneratorTuple((h0, h1), "clone", {"address": address}, "F", {}, check.passed)


def standard_fxf() -> GeneratorTuple:
    right = clone_subgroup("1")
    left = clone_subgroup("0")
    gens = right.elements + left.elements
    check = _Checker()
    check("first factor in [1/2, 1]", all(_inside(g, "1") for g in right))
    check("second factor in [0, 1/2]", all(_inside(g, "0") for g in left))
    check("cross commutators", all(commute(a, b) for a in right for b in left))
    check("F relators in each factor", f_relators_hold(*right.elements) and f_relators_hold(*left.elements))
    return GeneratorTuple(gens, "fxf", {}, "F x F", {}, check.passed)


# ---------------------------------------------------------------- wreath products

_TWO_RIGHT = right_vine(2)  # leaves 0, 1, 2; leaf 1 is [1/2, 3/4]


def _check_wreath_shifts(check: _Checker, ks: Sequence[Element], t: Element, shifts: int = 2):
    for s in range(1, shifts + 1):
        ok = all(commute(conjugate(a, power(t, s)), b) for a in ks for b in ks)
        check(f"conjugates by t^{s} commute", ok)


def wreath_with_z(hgens) -> GeneratorTuple:
    """Each h_i moved onto the middle leaf of two right carets, plus x0."""
    hs = _elements(hgens)
    if not hs:
        raise ValueError("need at least one generator of H")
    ks = [assemble(_TWO_RIGHT, {1: h})[1] for h in hs]
    check = _Checker()
    check("block form", all(block_form(k, {"10": h}) for k, h in zip(ks, hs)))
    _check_wreath_shifts(check, ks, x0())
    return GeneratorTuple(tuple(ks) + (x0(),), "wreath_z", {"k": len(hs)}, "H wr Z", {}, check.passed)


def zwrz() -> GeneratorTuple:
    """x0 and y = x1 x2 x1^-2."""
    y = product([x1(), x(2), power(x1(), -2)])
    check = _Checker()
    check("y supported in [1/2, 3/4]", _inside(y, "10"))
    _check_wreath_shifts(check, [y], x0(), shifts=3)
    return GeneratorTuple((x0(), y), "zwrz", {}, "Z wr Z", {}, check.passed)


# ---------------------------------------------------------------- commutator subgroup

_COMM_BASE = caret(caret(LEAF, LEAF), LEAF)  # payload on leaf 1: [1/4, 1/2]


def commutator_wrap(a: Payload, b: Optional[Tree] = None) -> Element:
    """An (n+2)-caret element of [F,F] carrying the n-caret pair (A, B).

    Accepts either two trees or one pair.  The payload sits on the middle
    leaf of a 2-caret tree whose first and last leaves are at depths 2 and
    1 in both trees.
    """
    pair = TreePair(a, b) if b is not None else _as_pair(a)
    return _wrap_checked(pair)[0]


def commutator_tuple(p: Payload) -> GeneratorTuple:
    pair = _as_pair(p)
    e, checks = _wrap_checked(pair)
    return GeneratorTuple((e,), "commutator", {"n": pair.caret_count}, "Z", {}, checks)


def _wrap_checked(pair: TreePair) -> Tuple[Element, List[str]]:
    if not is_reduced(pair):
        raise ValueError("(A, B) must be reduced")
    raw, e = assemble(_COMM_BASE, {1: pair})
    check = _Checker()
    check("leaf-level [F,F] criterion", in_commutator(e))
    check("block form", block_form(e, {"01": pair}))
    if pair.domain != pair.range:
        check("raw pair reduced", is_reduced(raw))
        check("n + 2 carets", e.size == pair.caret_count + 2)
    return e, check.passed


# ---------------------------------------------------------------- sum stratum

def theorem_specs_tuple(hgens, k: int, n: int, ab: Payload) -> GeneratorTuple:
    """k generators of total size n carrying H on [0, 1/2] and (A, B) on [1/2, 1].

    hgens must be normalized: only the first has a nonzero x0 exponent sum.
    """
    hs = _elements(hgens)
    m = len(hs)
    if m < 1 or k < m:
        raise ValueError("need 1 <= len(hgens) <= k")
    if any(h.is_identity() for h in hs):
        raise ValueError("drop identity generators first")
    e0 = [exponent_sums(h).a for h in hs]
    if e0[0] == 0 or any(e0[1:]):
        raise ValueError(f"hgens are not normalized, x0 exponent sums {e0}")
    s = sum(h.size for h in hs)
    if n <= s + k:
        raise ValueError(f"n = {n} must exceed s + k = {s + k}")
    pair = _nontrivial(ab, "(A, B)")
    if pair.caret_count != n - (s + k):
        raise ValueError(f"(A, B) needs {n - s - k} carets, has {pair.caret_count}")
    root = caret(LEAF, LEAF)
    raws = [assemble(root, {0: hs[0], 1: pair})]
    raws += [assemble(root, {0: h}) for h in hs[1:]]
    gens = [e for _, e in raws] + [IDENTITY] * (k - m)
    check = _Checker()
    check("raw pairs reduced", all(is_reduced(r) for r, _ in raws))
    check("total size n", sum(g.size for g in gens) == n)
    check("first generator outside [F,F]", not in_commutator(gens[0]))
    check("block form of l1", block_form(gens[0], {"0": hs[0], "1": pair}))
    check("block form of l2..lm", all(block_form(g, {"0": h}) for g, h in zip(gens[1:m], hs[1:])))
    z = clone(pair, "1")
    check("Z factor commutes with H copy", all(commute(z, clone(h, "0")) for h in hs))
    meta = {"lower_bound": theoretical_bounds("sum_visible", s=s, k=k)}
    return GeneratorTuple(tuple(gens), "theorem_specs", {"k": k, "n": n, "s": s},
                          "H or H x Z", meta, check.passed)


# ---------------------------------------------------------------- max stratum

def lemma_z_tuple(k: int, n: int, pairs: Sequence[Payload]) -> GeneratorTuple:
    """k commuting elements, pair i on leaf i of the (k-1)-caret right vine."""
    if k < 1 or len(pairs) != k:
        raise ValueError("need exactly k payload pairs")
    size = n - k + 1
    ps = [_nontrivial(p, f"payload {i}") for i, p in enumerate(pairs)]
    if any(p.caret_count != size for p in ps):
        raise ValueError(f"every payload needs n - k + 1 = {size} carets")
    inner = zn_generators(ps)
    gens = inner.elements
    check = _Checker()
    check.passed.extend(inner.checks)
    check("last generator has n carets", gens[-1].size == n)
    check("max size n", max(g.size for g in gens) == n)
    meta = {"lower_bound": theoretical_bounds("lemma_z", k=k)}
    return GeneratorTuple(gens, "lemma_z", {"k": k, "n": n}, f"Z^{k}", meta, check.passed)


def prop_spec2_tuple(h1: Element, h2: Element, n: int, ab: Payload, cd: Payload) -> GeneratorTuple:
    """h1 with (A, B) on leaf 1 and h2 with (C, D) on leaf 2, over two right carets."""
    if in_commutator(h1) or exponent_sums(h1).a == 0:
        raise ValueError("h1 must have a nonzero x0 exponent sum")
    if exponent_sums(h2).a != 0:
        raise ValueError("h2 must have zero x0 exponent sum")
    if n <= max(h1.size, h2.size) + 4:
        raise ValueError("n must exceed max(|h1|, |h2|) + 4")
    p = _nontrivial(ab, "(A, B)")
    q = _nontrivial(cd, "(C, D)")
    if p.caret_count != n - h1.size - 2 or q.caret_count != n - h2.size - 2:
        raise ValueError("payload sizes must be n - |h_i| - 2")
    r1, k1 = assemble(_TWO_RIGHT, {0: h1, 1: p})
    r2, k2 = assemble(_TWO_RIGHT, {0: h2, 2: q})
    check = _Checker()
    check("raw pairs reduced", is_reduced(r1) and is_reduced(r2))
    check("both have n carets", k1.size == n and k2.size == n)
    check("block form of k1", block_form(k1, {"0": h1, "10": p}))
    check("block form of k2", block_form(k2, {"0": h2, "11": q}))
    meta = {"lower_bound": theoretical_bounds("spec2", n1=h1.size, n2=h2.size)}
    return GeneratorTuple((k1, k2), "spec2", {"n": n}, "H", meta, check.passed)


def fpersis_tuple(k: int, n: int, c1d1: Payload, c2d2: Payload, abs_: Sequence[Payload]) -> GeneratorTuple:
    """k n-caret generators of a copy of F (x0, x1 on [0, 1/2] plus wrapped commutators)."""
    if k < 2 or len(abs_) != k - 2:
        raise ValueError("need k >= 2 and k - 2 extra payloads")
    p1 = _nontrivial(c1d1, "(C1, D1)")
    p2 = _nontrivial(c2d2, "(C2, D2)")
    if p1.caret_count != n - 4 or p2.caret_count != n - 5:
        raise ValueError("(C1, D1) needs n - 4 carets and (C2, D2) n - 5")
    extra = [_nontrivial(p, f"payload {i + 3}") for i, p in enumerate(abs_)]
    if any(p.caret_count != n - 3 for p in extra):
        raise ValueError("each extra payload needs n - 3 carets")
    r1, h1 = assemble(_TWO_RIGHT, {0: x0(), 1: p1})
    r2, h2 = assemble(_TWO_RIGHT, {0: x1(), 2: p2})
    wrapped = [commutator_wrap(p) for p in extra]
    rest = [assemble(caret(LEAF, LEAF), {0: w}) for w in wrapped]
    gens = (h1, h2) + tuple(e for _, e in rest)
    check = _Checker()
    check("raw pairs reduced", all(is_reduced(r) for r in [r1, r2] + [r for r, _ in rest]))
    check("all have n carets", all(g.size == n for g in gens))
    check("block form of h1", block_form(h1, {"0": x0(), "10": p1}))
    check("block form of h2", block_form(h2, {"0": x1(), "11": p2}))
    check("wrapped payloads in [F,F]", all(in_commutator(w) for w in wrapped))
    check("block form of h3..hk", all(block_form(g, {"0": w}) for g, w in zip(gens[2:], wrapped)))
    check("left halves satisfy F relators", f_relators_hold(restrict(h1, "0"), restrict(h2, "0")))
    meta = {"lower_bound": theoretical_bounds("fpersis", k=k)}
    return GeneratorTuple(gens, "fpersis", {"k": k, "n": n}, "F", meta, check.passed)


def product_with_z_tuple(hgens, ab: Payload) -> GeneratorTuple:
    """H on the left half, (A, B) on the right half."""
    hs = _elements(hgens)
    pair = _nontrivial(ab, "(A, B)")
    root = caret(LEAF, LEAF)
    gens = tuple(assemble(root, {0: h})[1] for h in hs) + (assemble(root, {1: pair})[1],)
    check = _Checker()
    check("left copies recover H", all(block_form(g, {"0": h}) for g, h in zip(gens, hs)))
    check("right copy recovers (A, B)", block_form(gens[-1], {"1": pair}))
    check("Z generator commutes with H", all(commute(gens[-1], g) for g in gens[:-1]))
    meta = {"lower_bound": theoretical_bounds("product_z", k=len(hs))}
    return GeneratorTuple(gens, "product_z", {"k": len(hs), "n": gens[-1].size},
                          "H x Z", meta, check.passed)


# two left carets with an interior caret on the inner right leaf:
# leaves 0..3 are [0,1/4], [1/4,3/8], [3/8,1/2], [1/2,1]
_WREATH_BASE = caret(caret(LEAF, caret(LEAF, LEAF)), LEAF)


def wreath_tuple(hgens, ab: Payload) -> GeneratorTuple:
    """H on [1/4, 3/8] plus x0 on [0, 1/2] coupled with (A, B) on [1/2, 1]."""
    hs = _elements(hgens)
    if not hs:
        raise ValueError("need at least one generator of H")
    pair = _nontrivial(ab, "(A, B)")
    if max(h.size for h in hs) > pair.caret_count:
        raise ValueError("generators of H need at most n - 3 carets, as many as (A, B)")
    ls = [assemble(_WREATH_BASE, {1: h})[1] for h in hs]
    last = assemble(caret(LEAF, LEAF), {0: x0(), 1: pair})[1]
    gens = tuple(ls) + (last,)
    n = pair.caret_count + 3
    check = _Checker()
    check("H copies on [1/4, 3/8]", all(block_form(g, {"010": h}) for g, h in zip(ls, hs)))
    check("last generator couples x0 with (A, B)", block_form(last, {"0": x0(), "1": pair}))
    check("last generator has n carets", last.size == n)
    check("max size n", max(g.size for g in gens) <= n)
    _check_wreath_shifts(check, ls, last)
    meta = {"lower_bound": theoretical_bounds("wreath", k=len(hs))}
    return GeneratorTuple(gens, "wreath", {"k": len(hs), "n": n}, "H wr Z", meta, check.passed)


def product_tuple(hgens, kgens) -> GeneratorTuple:
    hs, ks = _elements(hgens), _elements(kgens)
    root = caret(LEAF, LEAF)
    left = tuple(assemble(root, {0: h})[1] for h in hs)
    right = tuple(assemble(root, {1: g})[1] for g in ks)
    check = _Checker()
    check("cross commutators", all(commute(a, b) for a in left for b in right))
    check("left round trip", all(restrict(a, "0") == h and block_form(a, {"0": h}) for a, h in zip(left, hs)))
    check("right round trip", all(restrict(b, "1") == g and block_form(b, {"1": g}) for b, g in zip(right, ks)))
    return GeneratorTuple(left + right, "product", {"k": len(hs), "l": len(ks)}, "H x K", {}, check.passed)


# ---------------------------------------------------------------- random payloads

def random_payload(size: int, rng: RngStream) -> Element:
    if size < 2:
        raise ValueError("non-identity payloads need at least 2 carets")
    return random_element(size, rng)


def random_nonidentity(max_size: int, rng: RngStream) -> Element:
    return random_element(2 + rng.randbelow(max_size - 1), rng)


def random_zn(count: int, size: int, rng: RngStream) -> GeneratorTuple:
    return zn_generators([random_payload(size, rng) for _ in range(count)])


def random_lemma_z(k: int, n: int, rng: RngStream) -> GeneratorTuple:
    return lemma_z_tuple(k, n, [random_payload(n - k + 1, rng) for _ in range(k)])


def random_commutator_wrap(size: int, rng: RngStream) -> Element:
    return commutator_wrap(random_payload(size, rng))


def random_theorem_specs(hgens, k: int, n: int, rng: RngStream) -> GeneratorTuple:
    s = sum(h.size for h in _elements(hgens))
    return theorem_specs_tuple(hgens, k, n, random_payload(n - s - k, rng))


def random_spec2(h1: Element, h2: Element, n: int, rng: RngStream) -> GeneratorTuple:
    return prop_spec2_tuple(h1, h2, n, random_payload(n - h1.size - 2, rng),
                            random_payload(n - h2.size - 2, rng))


def random_fpersis(k: int, n: int, rng: RngStream) -> GeneratorTuple:
    return fpersis_tuple(k, n, random_payload(n - 4, rng), random_payload(n - 5, rng),
                         [random_payload(n - 3, rng) for _ in range(k - 2)])


def random_product_with_z(hgens, n: int, rng: RngStream) -> GeneratorTuple:
    return product_with_z_tuple(hgens, random_payload(n - 1, rng))


def random_wreath(hgens, n: int, rng: RngStream) -> GeneratorTuple:
    return wreath_tuple(hgens, random_payload(n - 3, rng))


def random_address(rng: RngStream, max_len: int = 4) -> str:
    m = 1 + rng.randbelow(max_len)
    return format(rng.randbelow(1 << m), f"0{m}b")


CONSTRUCTION_NAMES = ("zn", "burillo", "fxf", "clone", "wreath_z", "zwrz", "commutator",
                      "theorem_specs", "lemma_z", "spec2", "fpersis", "product_z", "wreath", "product")


def build(name: str, k: int = 2, n: int = 8, rng: Optional[RngStream] = None,
          address: str = "1") -> GeneratorTuple:
    """Build a named construction with random payloads where it needs them."""
    rng = rng or RngStream(0)
    if name == "zn":
        return random_zn(k, max(2, n - k + 1), rng)
    if name == "burillo":
        return burillo_zn(k)
    if name == "fxf":
        return standard_fxf()
    if name == "clone":
        return clone_subgroup(address)
    if name == "wreath_z":
        return wreath_with_z([random_nonidentity(max(2, n), rng) for _ in range(k)])
    if name == "zwrz":
        return zwrz()
    if name == "commutator":
        return commutator_tuple(random_payload(max(2, n - 2), rng))
    if name == "theorem_specs":
        return random_theorem_specs([x0()], k, n, rng)
    if name == "lemma_z":
        return random_lemma_z(k, n, rng)
    if name == "spec2":
        return random_spec2(x0(), x1(), n, rng)
    if name == "fpersis":
        return random_fpersis(k, n, rng)
    if name == "product_z":
        return random_product_with_z([x0(), x1()][:k], n, rng)
    if name == "wreath":
        return random_wreath([x0(), x1()][:k], n, rng)
    if name == "product":
        return product_tuple([x0(), x1()], [random_nonidentity(max(2, n), rng) for _ in range(k)])
    raise ValueError(f"unknown construction {name!r}; choose from {', '.join(CONSTRUCTION_NAMES)}")
