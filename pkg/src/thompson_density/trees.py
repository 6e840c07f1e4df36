"""Rooted binary trees of carets and tree-pair diagrams.

A tree is stored as its preorder code: "1" for a caret, "0" for a leaf.
A tree with n carets is a string of n ones and n + 1 zeros, so the code
doubles as the canonical text encoding.  Leaves are numbered 0, 1, ...
from left to right.
"""

from itertools import product as _cartesian
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

TREE_CAP = 10
PAIR_CAP = 8


class TreeParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class Tree:
    """Immutable binary tree backed by its preorder code."""

    __slots__ = ("code", "_depths", "_exposed")

    def __init__(self, code: str):
        # trusted constructor; use decode() for untrusted text
        self.code = code
        self._depths: Optional[Tuple[int, ...]] = None
        self._exposed: Optional[int] = None

    def __eq__(self, other):
        return isinstance(other, Tree) and other.code == self.code

    def __hash__(self):
        return hash(self.code)

    def __lt__(self, other: "Tree"):
        return (len(self.code), self.code) < (len(other.code), other.code)

    def __repr__(self):
        return f"Tree({self.code!r})"

    @property
    def caret_count(self) -> int:
        return len(self.code) // 2

    @property
    def leaf_count(self) -> int:
        return self.caret_count + 1

    @property
    def is_leaf(self) -> bool:
        return self.code == "0"

    def children(self) -> Tuple["Tree", "Tree"]:
        if self.is_leaf:
            raise ValueError("a leaf has no children")
        need, i = 1, 1
        while need:
            need += 1 if self.code[i] == "1" else -1
            i += 1
        return Tree(self.code[1:i]), Tree(self.code[i:])

    @property
    def left(self) -> "Tree":
        return self.children()[0]

    @property
    def right(self) -> "Tree":
        return self.children()[1]

    @property
    def leaf_depths(self) -> Tuple[int, ...]:
        if self._depths is None:
            self._depths = code_to_depths(self.code)
        return self._depths

    @property
    def exposed_mask(self) -> int:
        """Bit i is set when leaves i and i+1 hang from one caret."""
        if self._exposed is None:
            mask = 0
            code = self.code
            p = code.find("100")
            while p >= 0:
                zeros = p - code.count("1", 0, p)
                mask |= 1 << zeros
                p = code.find("100", p + 1)
            self._exposed = mask
        return self._exposed

    def exposed_leaves(self) -> List[int]:
        m, out, i = self.exposed_mask, [], 0
        while m:
            if m & 1:
                out.append(i)
            m >>= 1
            i += 1
        return out


LEAF = Tree("0")


def leaf() -> Tree:
    return LEAF


def caret(left: Tree, right: Tree) -> Tree:
    return Tree("1" + left.code + right.code)


def encode(t: Tree) -> str:
    return t.code


def decode(text: str) -> Tree:
    need = 1
    for i, ch in enumerate(text):
        if need == 0:
            raise TreeParseError("trailing characters", i)
        if ch == "1":
            need += 1
        elif ch == "0":
            need -= 1
        else:
            raise TreeParseError(f"unexpected character {ch!r}", i)
    if need != 0:
        raise TreeParseError("truncated encoding", len(text))
    return Tree(text)


def code_to_depths(code: str) -> Tuple[int, ...]:
    out = []
    pending = []
    d = 0
    for ch in code:
        if ch == "1":
            d += 1
            pending.append(d)
        else:
            out.append(d)
            if pending:
                d = pending.pop()
    return tuple(out)


def depths_to_code(depths: Sequence[int]) -> str:
    """Rebuild the preorder code from a leaf-depth sequence."""
    parts = []
    stack = [0]
    i = 0
    n = len(depths)
    while stack:
        d = stack.pop()
        if i >= n:
            raise ValueError("depth sequence too short")
        if depths[i] == d:
            parts.append("0")
            i += 1
        elif depths[i] > d:
            parts.append("1")
            stack.append(d + 1)
            stack.append(d + 1)
        else:
            raise ValueError("not a valid leaf-depth sequence")
    if i != n:
        raise ValueError("depth sequence too long")
    return "".join(parts)


def tree_from_depths(depths: Sequence[int]) -> Tree:
    t = Tree(depths_to_code(depths))
    t._depths = tuple(depths)
    return t


def graft(t: Tree, index: int, sub: Tree) -> Tree:
    """Attach `sub` at leaf `index` of `t`."""
    code = t.code
    seen = -1
    for p, ch in enumerate(code):
        if ch == "0":
            seen += 1
            if seen == index:
                return Tree(code[:p] + sub.code + code[p + 1:])
    raise IndexError(f"tree has no leaf {index}")


def graft_many(t: Tree, subs: Dict[int, Tree]) -> Tree:
    parts = []
    seen = -1
    for ch in t.code:
        if ch == "0":
            seen += 1
            parts.append(subs[seen].code if seen in subs else "0")
        else:
            parts.append(ch)
    return Tree("".join(parts))


def right_vine(carets: int) -> Tree:
    return Tree("10" * carets + "0")


def left_vine(carets: int) -> Tree:
    return Tree("1" * carets + "0" * (carets + 1))


def remove_exposed_caret(t: Tree, index: int) -> Tree:
    """Collapse the exposed caret whose leaves are index, index+1."""
    code = t.code
    p = code.find("100")
    while p >= 0:
        if p - code.count("1", 0, p) == index:
            return Tree(code[:p] + "0" + code[p + 3:])
        p = code.find("100", p + 1)
    raise ValueError(f"no exposed caret on leaves {index}, {index + 1}")


class TreePair:
    __slots__ = ("domain", "range")

    def __init__(self, domain: Tree, range: Tree):
        if domain.caret_count != range.caret_count:
            raise ValueError("trees in a pair need equal caret counts")
        if domain.caret_count < 1:
            raise ValueError("tree pairs need at least one caret")
        self.domain = domain
        self.range = range

    def __eq__(self, other):
        return (isinstance(other, TreePair) and self.domain == other.domain
                and self.range == other.range)

    def __hash__(self):
        return hash((self.domain.code, self.range.code))

    def __repr__(self):
        return f"TreePair({self.encode()!r})"

    @property
    def caret_count(self) -> int:
        return self.domain.caret_count

    def encode(self) -> str:
        return f"{self.domain.code}|{self.range.code}"

    @classmethod
    def decode(cls, text: str) -> "TreePair":
        if text.count("|") != 1:
            raise TreeParseError("expected exactly one '|'", text.find("|"))
        d, r = text.split("|")
        try:
            dom = decode(d)
        except TreeParseError as exc:
            raise TreeParseError("bad domain tree", exc.position) from None
        try:
            rng = decode(r)
        except TreeParseError as exc:
            raise TreeParseError("bad range tree", len(d) + 1 + exc.position) from None
        return cls(dom, rng)


IDENTITY_PAIR = TreePair(Tree("100"), Tree("100"))


def common_exposed(p: TreePair) -> int:
    return p.domain.exposed_mask & p.range.exposed_mask


def is_reduced(p: TreePair) -> bool:
    if p.caret_count == 1:
        return True
    return common_exposed(p) == 0


def reduce_once(p: TreePair, index: int) -> TreePair:
    return TreePair(remove_exposed_caret(p.domain, index),
                    remove_exposed_caret(p.range, index))


def reduce(p: TreePair) -> TreePair:
    """Remove the lowest-numbered common exposed caret until none is left."""
    while p.caret_count > 1:
        common = common_exposed(p)
        if not common:
            break
        low = (common & -common).bit_length() - 1
        p = reduce_once(p, low)
    return p


def decorate(p: TreePair, forest: Sequence[Tree]) -> TreePair:
    if len(forest) != p.caret_count + 1:
        raise ValueError(
            f"forest has {len(forest)} trees, pair has {p.caret_count + 1} leaves")
    subs = {i: t for i, t in enumerate(forest) if not t.is_leaf}
    return TreePair(graft_many(p.domain, subs), graft_many(p.range, subs))


_TREE_CODES: Dict[int, List[str]] = {0: ["0"]}


def _tree_codes(n: int) -> List[str]:
    if n not in _TREE_CODES:
        out = []
        for i in range(n):
            for a in _tree_codes(i):
                for b in _tree_codes(n - 1 - i):
                    out.append("1" + a + b)
        _TREE_CODES[n] = out
    return _TREE_CODES[n]


def enumerate_trees(n: int, cap: int = TREE_CAP) -> List[Tree]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > cap:
        raise ValueError(f"n = {n} exceeds the brute-force cap {cap}")
    return [Tree(c) for c in _tree_codes(n)]


def enumerate_forests(k: int, m: int, cap: int = TREE_CAP) -> List[Tuple[Tree, ...]]:
    """All ordered k-tuples of trees with m carets in total."""
    if k < 1:
        raise ValueError("a forest needs at least one tree")
    out: List[Tuple[Tree, ...]] = []

    def rec(prefix, left, slots):
        if slots == 1:
            for t in enumerate_trees(left, cap):
                out.append(prefix + (t,))
            return
        for here in range(left + 1):
            for t in enumerate_trees(here, cap):
                rec(prefix + (t,), left - here, slots - 1)

    rec((), m, k)
    return out


def iter_pairs(n: int, cap: int = PAIR_CAP) -> Iterator[TreePair]:
    if n > cap:
        raise ValueError(f"n = {n} exceeds the brute-force cap {cap}")
    trees = enumerate_trees(n, max(cap, TREE_CAP))
    for a, b in _cartesian(trees, trees):
        yield TreePair(a, b)


def enumerate_reduced_pairs(n: int, cap: int = PAIR_CAP) -> List[TreePair]:
    if n < 1:
        raise ValueError("n must be at least 1")
    return [p for p in iter_pairs(n, cap) if is_reduced(p)]
