"""Elements of Thompson's group F as reduced tree pairs.

An element is stored as the leaf-depth sequences of its domain and range
trees.  Leaf j of the domain tree is mapped linearly onto leaf j of the
range tree.  multiply(a, b) means "apply a, then b".
"""

import json
from fractions import Fraction
from math import gcd
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

from .trees import Tree, TreePair, code_to_depths, depths_to_code, tree_from_depths


class Dyadic:
    """Exact dyadic rational num / 2**exp, normalized so num is odd or zero."""

    __slots__ = ("num", "exp")

    def __init__(self, num: int, exp: int = 0):
        if exp < 0:
            num <<= -exp
            exp = 0
        if num == 0:
            exp = 0
        else:
            while exp and not num & 1:
                num >>= 1
                exp -= 1
        self.num = num
        self.exp = exp

    @classmethod
    def coerce(cls, value) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, int):
            return cls(value)
        f = Fraction(value)
        den = f.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not a dyadic rational")
        return cls(f.numerator, den.bit_length() - 1)

    def _aligned(self, other: "Dyadic") -> Tuple[int, int, int]:
        e = max(self.exp, other.exp)
        return self.num << (e - self.exp), other.num << (e - other.exp), e

    def __add__(self, other):
        other = Dyadic.coerce(other)
        a, b, e = self._aligned(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        other = Dyadic.coerce(other)
        a, b, e = self._aligned(other)
        return Dyadic(a - b, e)

    def __rsub__(self, other):
        return Dyadic.coerce(other) - self

    def __neg__(self):
        return Dyadic(-self.num, self.exp)

    def __mul__(self, other):
        other = Dyadic.coerce(other)
        return Dyadic(self.num * other.num, self.exp + other.exp)

    __rmul__ = __mul__

    def scale2(self, k: int) -> "Dyadic":
        """Multiply by 2**k."""
        return Dyadic(self.num, self.exp - k)

    def _cmp(self, other) -> int:
        other = Dyadic.coerce(other)
        a, b, _ = self._aligned(other)
        return (a > b) - (a < b)

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.num, self.exp))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        return self.num / (1 << self.exp)

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def to_json(self) -> dict:
        return {"num": self.num, "exp": self.exp}

    @classmethod
    def from_json(cls, obj: dict) -> "Dyadic":
        return cls(int(obj["num"]), int(obj["exp"]))

    def __repr__(self):
        if self.exp == 0:
            return f"Dyadic({self.num})"
        return f"Dyadic({self.num}/2^{self.exp})"


ZERO = Dyadic(0)
ONE = Dyadic(1)


def _log2_exact(value: Fraction) -> Optional[int]:
    n, d = value.numerator, value.denominator
    if n <= 0:
        return None
    if n == 1 and not d & (d - 1):
        return -(d.bit_length() - 1)
    if d == 1 and not n & (n - 1):
        return n.bit_length() - 1
    return None


class PLMap:
    """Piecewise-linear homeomorphism of [0,1] given by its breakpoints."""

    __slots__ = ("points",)

    def __init__(self, points: Iterable[Tuple[Dyadic, Dyadic]], canonical: bool = True):
        pts = [(Dyadic.coerce(x), Dyadic.coerce(y)) for x, y in points]
        self._validate(pts)
        self.points: Tuple[Tuple[Dyadic, Dyadic], ...] = tuple(
            _merge_collinear(pts) if canonical else pts)

    @staticmethod
    def _validate(pts):
        if len(pts) < 2 or pts[0] != (ZERO, ZERO) or pts[-1] != (ONE, ONE):
            raise ValueError("a PL map must run from (0,0) to (1,1)")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not (x1 > x0 and y1 > y0):
                raise ValueError("breakpoints must increase in both coordinates")
            if _log2_exact((y1 - y0).to_fraction() / (x1 - x0).to_fraction()) is None:
                raise ValueError(f"slope between {x0} and {x1} is not a power of two")

    def slopes(self) -> List[int]:
        out = []
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            out.append(_log2_exact((y1 - y0).to_fraction() / (x1 - x0).to_fraction()))
        return out

    def __call__(self, x) -> Dyadic:
        x = Dyadic.coerce(x)
        pts = self.points
        lo, hi = 0, len(pts) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if pts[mid][0] <= x:
                lo = mid
            else:
                hi = mid
        (x0, y0), (x1, y1) = pts[lo], pts[hi]
        s = _log2_exact((y1 - y0).to_fraction() / (x1 - x0).to_fraction())
        return y0 + (x - x0).scale2(s)

    def inverse(self) -> "PLMap":
        return PLMap([(y, x) for x, y in self.points])

    def then(self, other: "PLMap") -> "PLMap":
        """The map x -> other(self(x))."""
        inv = self.inverse()
        xs = {x for x, _ in self.points} | {inv(x) for x, _ in other.points}
        return PLMap([(x, other(self(x))) for x in sorted(xs)])

    def __eq__(self, other):
        return isinstance(other, PLMap) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        inner = ", ".join(f"({float(x)}, {float(y)})" for x, y in self.points)
        return f"PLMap([{inner}])"

    def to_json(self) -> str:
        return json.dumps([[x.to_json(), y.to_json()] for x, y in self.points])

    @classmethod
    def from_json(cls, text: str) -> "PLMap":
        return cls([(Dyadic.from_json(x), Dyadic.from_json(y)) for x, y in json.loads(text)])


def _merge_collinear(pts):
    out = [pts[0]]
    for i in range(1, len(pts) - 1):
        (xa, ya), (xb, yb), (xc, yc) = out[-1], pts[i], pts[i + 1]
        if (yb - ya) * (xc - xb) == (yc - yb) * (xb - xa):
            continue
        out.append(pts[i])
    out.append(pts[-1])
    return out


class AbelianImage(NamedTuple):
    a: int
    b: int


def _reduce_leaves(leaves: Sequence[Tuple[int, int]]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Cancel carets shared by both trees of a leaf-depth pair sequence.

    Two adjacent leaves collapse when they have equal depths in both trees
    and the left one is a left child in both; merges can cascade leftward.
    Positions are integers in units of 2**-top.
    """
    top = max(max(p, q) for p, q in leaves)
    stack: List[List[int]] = []
    xd = xr = 0
    for p, q in leaves:
        item = [p, q, xd, xr]
        xd += 1 << (top - p)
        xr += 1 << (top - q)
        while stack:
            lp, lq, lxd, lxr = stack[-1]
            p, q = item[0], item[1]
            if (lp != p or lq != q or p == 1
                    or (lxd >> (top - p)) & 1 or (lxr >> (top - q)) & 1):
                break
            stack.pop()
            item = [p - 1, q - 1, lxd, lxr]
        stack.append(item)
    return tuple(s[0] for s in stack), tuple(s[1] for s in stack)


class Element:
    """A reduced tree pair, compared structurally."""

    __slots__ = ("dom", "rng", "_hash", "_code")

    def __init__(self, dom: Tuple[int, ...], rng: Tuple[int, ...]):
        self.dom = dom
        self.rng = rng
        self._hash = hash((dom, rng))
        self._code: Optional[str] = None

    @classmethod
    def from_reduced_codes(cls, dom_code: str, rng_code: str) -> "Element":
        """Trusted constructor for codes already known to form a reduced pair."""
        e = cls(code_to_depths(dom_code), code_to_depths(rng_code))
        e._code = dom_code + "|" + rng_code
        return e

    @classmethod
    def from_pair(cls, p: TreePair) -> "Element":
        return cls.from_leaves(list(zip(p.domain.leaf_depths, p.range.leaf_depths)))

    @classmethod
    def from_leaves(cls, leaves: Sequence[Tuple[int, int]]) -> "Element":
        return cls(*_reduce_leaves(leaves))

    @classmethod
    def from_codes(cls, dom_code: str, rng_code: str) -> "Element":
        return cls.from_pair(TreePair(Tree(dom_code), Tree(rng_code)))

    @classmethod
    def decode(cls, text: str) -> "Element":
        return cls.from_pair(TreePair.decode(text))

    @property
    def pair(self) -> TreePair:
        return TreePair(tree_from_depths(self.dom), tree_from_depths(self.rng))

    @property
    def size(self) -> int:
        return len(self.dom) - 1

    def encode(self) -> str:
        if self._code is None:
            self._code = depths_to_code(self.dom) + "|" + depths_to_code(self.rng)
        return self._code

    def is_identity(self) -> bool:
        return self.dom == self.rng

    def __eq__(self, other):
        return isinstance(other, Element) and self.dom == other.dom and self.rng == other.rng

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return (self.size, self.encode())

    def __repr__(self):
        return f"Element({self.encode()!r})"

    def __mul__(self, other: "Element") -> "Element":
        return multiply(self, other)


IDENTITY = Element((1, 1), (1, 1))


def identity() -> Element:
    return IDENTITY


def x0() -> Element:
    return Element((2, 2, 1), (1, 2, 2))


def x1() -> Element:
    return Element((1, 3, 3, 2), (1, 2, 3, 3))


def multiply(a: Element, b: Element) -> Element:
    """Apply a, then b.

    Walk a's range leaves and b's domain leaves together over [0,1],
    splitting whichever current interval is larger, and pair a's domain
    depth with b's range depth on every common piece.
    """
    ad, ar, bd, br = a.dom, a.rng, b.dom, b.rng
    out = []
    i = j = 0
    sa: List[Tuple[int, int]] = []
    sb: List[Tuple[int, int]] = []
    while True:
        if sa:
            p, q = sa.pop()
        elif i < len(ad):
            p, q = ad[i], ar[i]
            i += 1
        else:
            break
        if sb:
            s, t = sb.pop()
        else:
            s, t = bd[j], br[j]
            j += 1
        while q != s:
            if q < s:
                p += 1
                q += 1
                sa.append((p, q))
            else:
                s += 1
                t += 1
                sb.append((s, t))
        out.append((p, t))
    return Element(*_reduce_leaves(out))


def invert(a: Element) -> Element:
    return Element(a.rng, a.dom)


def power(a: Element, k: int) -> Element:
    if k < 0:
        a, k = invert(a), -k
    result = IDENTITY
    base = a
    while k:
        if k & 1:
            result = multiply(result, base)
        k >>= 1
        if k:
            base = multiply(base, base)
    return result


def product(elements: Iterable[Element]) -> Element:
    result = IDENTITY
    for e in elements:
        result = multiply(result, e)
    return result


def commutator(a: Element, b: Element) -> Element:
    """a b a^-1 b^-1 as a left-to-right product."""
    return product((a, b, invert(a), invert(b)))


def conjugate(a: Element, by: Element) -> Element:
    """by^-1 a by."""
    return product((invert(by), a, by))


def _leaf_points(depths: Sequence[int]) -> List[Dyadic]:
    top = max(depths)
    xs, pos = [], 0
    for d in depths:
        xs.append(Dyadic(pos, top))
        pos += 1 << (top - d)
    xs.append(ONE)
    return xs


def to_plmap(a: Element) -> PLMap:
    return PLMap(zip(_leaf_points(a.dom), _leaf_points(a.rng)))


def from_plmap(m: PLMap) -> Element:
    """Subdivide standard dyadic intervals until each maps linearly onto one."""
    leaves: List[Tuple[int, int]] = []
    pts = m.points
    slopes = m.slopes()
    # (domain depth, left endpoint) in order; explicit stack keeps it iterative
    todo = [(0, ZERO)]
    seg = 0
    while todo:
        depth, left = todo.pop()
        width = Dyadic(1, depth)
        right = left + width
        while pts[seg + 1][0] <= left:
            seg += 1
        linear = pts[seg + 1][0] >= right
        if linear:
            s = slopes[seg]
            y = m(left)
            rdepth = depth - s
            if rdepth >= 0 and y.exp <= rdepth:
                leaves.append((depth, rdepth))
                continue
        half = Dyadic(1, depth + 1)
        todo.append((depth + 1, left + half))
        todo.append((depth + 1, left))
    if len(leaves) == 1:
        leaves = [(1, 1), (1, 1)]
    return Element(*_reduce_leaves(leaves))


def endpoint_slopes(a: Element) -> AbelianImage:
    return AbelianImage(a.dom[0] - a.rng[0], a.dom[-1] - a.rng[-1])


def exponent_sums(a: Element) -> AbelianImage:
    s0, s1 = endpoint_slopes(a)
    return AbelianImage(s0, -s0 - s1)


def in_commutator(a: Element) -> bool:
    """Leaf-level test: first leaves and last leaves sit at equal depths."""
    return a.dom[0] == a.rng[0] and a.dom[-1] == a.rng[-1]


def in_commutator_by_slopes(a: Element) -> bool:
    s = to_plmap(a).slopes()
    return s[0] == 0 and s[-1] == 0


def in_commutator_by_kernel(a: Element) -> bool:
    return exponent_sums(a) == (0, 0)


def _first_moved_leaf(a: Element) -> Optional[int]:
    for i, (p, q) in enumerate(zip(a.dom, a.rng)):
        if p != q:
            return i
    return None


def support_bounds(a: Element) -> Union[Tuple[Dyadic, Dyadic], str]:
    """(inf, sup) of the support, or "empty" for the identity."""
    first = _first_moved_leaf(a)
    if first is None:
        return "empty"
    last = max(i for i, (p, q) in enumerate(zip(a.dom, a.rng)) if p != q)
    pts = _leaf_points(a.dom)
    return pts[first], pts[last + 1]


def first_slope_exponent(a: Element) -> int:
    first = _first_moved_leaf(a)
    if first is None:
        raise ValueError("the identity has no first moved piece")
    return a.dom[first] - a.rng[first]


def x(i: int) -> Element:
    """Infinite-generating-set letter x_i, with x_{i+1} = x0^-1 x_i x0."""
    if i < 0:
        raise ValueError("generator index must be nonnegative")
    if i == 0:
        return x0()
    g = x1()
    for _ in range(i - 1):
        g = conjugate(g, x0())
    return g


def _shift_left(a: Element, shift: Dyadic) -> Element:
    """The map t -> a(t + shift) - shift, extended by the identity."""
    m = to_plmap(a)
    if m(shift) != shift:
        raise ValueError("support starts before the shift point")
    pts = [(ZERO, ZERO)] + [(px - shift, py - shift) for px, py in m.points if px > shift]
    if pts[-1][0] < ONE:
        pts.append((ONE, ONE))
    return from_plmap(PLMap(pts))


def translate_support(gens: Sequence[Element]) -> List[Element]:
    """Move the common support of a generating set so it starts at 0.

    Sets that already move 0 are returned as they are.  Otherwise every
    generator is conjugated by t -> t - a, a being the leftmost support point.
    """
    if not gens or all(g.is_identity() for g in gens):
        raise ValueError("need at least one non-identity generator")
    if any(endpoint_slopes(g).a != 0 for g in gens):
        return list(gens)
    a = min(support_bounds(g)[0] for g in gens if not g.is_identity())
    return [g if g.is_identity() else _shift_left(g, a) for g in gens]


Word = List[Tuple[int, int]]


def word_inverse(w: Word) -> Word:
    return [(i, -e) for i, e in reversed(w)]


def evaluate_word(w: Word, gens: Sequence[Element]) -> Element:
    return product(power(gens[i], e) for i, e in w)


def normalize_exponents(gens: Sequence[Element], return_words: bool = False):
    """Euclid on the x0 exponent sums until one generator carries all of it.

    Generators with negative E_0 are inverted, then h_i <- h_i h_j^-d with
    h_j of least positive E_0 (lowest index on ties).  The survivor with
    E_0 != 0 is moved to the front.
    """
    cur = [(g, [(i, 1)]) for i, g in enumerate(gens)]
    if all(exponent_sums(g).a == 0 for g in gens):
        raise ValueError("no generator has a nonzero x0 exponent sum; translate first")
    cur = [(invert(g), word_inverse(w)) if exponent_sums(g).a < 0 else (g, w) for g, w in cur]
    while True:
        e0 = [exponent_sums(g).a for g, _ in cur]
        pos = [i for i, e in enumerate(e0) if e > 0]
        if len(pos) <= 1:
            break
        j = min(pos, key=lambda i: (e0[i], i))
        hj, wj = cur[j]
        for i in pos:
            if i == j:
                continue
            d = e0[i] // e0[j]
            g, w = cur[i]
            cur[i] = (multiply(g, power(hj, -d)), w + word_inverse(wj) * d)
    lead = next(i for i, (g, _) in enumerate(cur) if exponent_sums(g).a != 0)
    cur = [cur[lead]] + cur[:lead] + cur[lead + 1:]
    elems = [g for g, _ in cur]
    if return_words:
        return elems, [_simplify(w) for _, w in cur]
    return elems


def _simplify(w: Word) -> Word:
    out: Word = []
    for i, e in w:
        if out and out[-1][0] == i:
            e += out.pop()[1]
        if e:
            out.append((i, e))
    return out


def commute(a: Element, b: Element) -> bool:
    return multiply(a, b) == multiply(b, a)
