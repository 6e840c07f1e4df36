"""Uniform random trees, reduced pairs and unordered tuples from the spheres."""

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable, Deque, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .element import Element
from .enumeration import r_values
from .spheres import cumulative_r, max_split_weights, multiset_count, sum_ways
from .trees import Tree, TreePair

PAIR_SAMPLER_CAP = 64
_BATCH = 256
_TO_ASCII = bytes.maketrans(b"\x00\x01", b"01")


class RngStream:
    """Deterministic split-stream generator.

    A stream is identified by a 64-bit seed and a path of substream indices;
    the bits come from PCG64 seeded through numpy's SeedSequence, which is
    platform independent.  Draws are buffered in fixed-size batches, so the
    output depends only on (seed, path, call sequence).
    """

    def __init__(self, seed: int, stream: Tuple[int, ...] = ()):
        if not 0 <= seed < 2 ** 64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if isinstance(stream, int):
            stream = (stream,)
        self.seed = seed
        self.stream = tuple(stream)
        self.gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(seed, spawn_key=self.stream)))
        self._trees: Dict[int, Deque[str]] = {}
        self._pairs: Dict[int, Deque[Tuple[str, str]]] = {}
        self._words: Deque[int] = deque()
        self.attempts: Dict[int, int] = {}
        self.accepted: Dict[int, int] = {}

    def substream(self, index: int) -> "RngStream":
        return RngStream(self.seed, self.stream + (index,))

    def _word(self) -> int:
        if not self._words:
            self._words = deque(self.gen.integers(0, 2 ** 64, size=1024, dtype=np.uint64).tolist())
        return self._words.popleft()

    def randbits(self, k: int) -> int:
        x, have = 0, 0
        while have < k:
            x = (x << 64) | self._word()
            have += 64
        return x >> (have - k)

    def randbelow(self, bound: int) -> int:
        """Uniform integer in [0, bound) for arbitrarily large bound."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        bits = bound.bit_length()
        while True:
            v = self.randbits(bits)
            if v < bound:
                return v

    def weighted_index(self, weights: Sequence[int]) -> int:
        u = self.randbelow(sum(weights))
        for i, w in enumerate(weights):
            if u < w:
                return i
            u -= w
        raise AssertionError("unreachable")

    def sample_distinct(self, population: int, count: int) -> List[int]:
        """count distinct integers from range(population), in draw order."""
        chosen: List[int] = []
        seen = set()
        while len(chosen) < count:
            v = self.randbelow(population)
            if v not in seen:
                seen.add(v)
                chosen.append(v)
        return chosen

    def tree_code(self, n: int) -> str:
        buf = self._trees.get(n)
        if not buf:
            buf = deque(codes_to_strings(random_codes(self.gen, n, _BATCH)))
            self._trees[n] = buf
        return buf.popleft()

    def reduced_pair_codes(self, n: int) -> Tuple[str, str]:
        buf = self._pairs.get(n)
        while not buf:
            dom = random_codes(self.gen, n, _BATCH)
            rng = random_codes(self.gen, n, _BATCH)
            ok = reduced_mask(dom, rng, n)
            self.attempts[n] = self.attempts.get(n, 0) + _BATCH
            self.accepted[n] = self.accepted.get(n, 0) + int(ok.sum())
            buf = deque(zip(codes_to_strings(dom[ok]), codes_to_strings(rng[ok])))
            self._pairs[n] = buf
        return buf.popleft()


def random_codes(gen: np.random.Generator, n: int, size: int) -> np.ndarray:
    """size uniform preorder codes of n-caret trees (rows of 0/1 bytes).

    A uniform arrangement of n carets and n+1 leaves has exactly one cyclic
    rotation that is a valid preorder code: the one starting right after
    the first minimum of the +1/-1 prefix sums.
    """
    length = 2 * n + 1
    if n == 0:
        return np.zeros((size, 1), dtype=np.uint8)
    base = np.zeros((size, length), dtype=np.uint8)
    base[:, :n] = 1
    bits = gen.permuted(base, axis=1)
    walk = np.cumsum(bits.astype(np.int16) * 2 - 1, axis=1)
    start = (np.argmin(walk, axis=1) + 1) % length
    idx = (start[:, None] + np.arange(length)) % length
    return bits[np.arange(size)[:, None], idx]


def exposed_masks(codes: np.ndarray) -> np.ndarray:
    """Bit i set when leaves i, i+1 form an exposed caret (n <= 64)."""
    c = codes.astype(np.int16)
    hit = (c[:, :-2] == 1) & (c[:, 1:-1] == 0) & (c[:, 2:] == 0)
    ones_before = np.cumsum(c, axis=1) - c
    leaf_index = (np.arange(c.shape[1])[None, :] - ones_before)[:, :-2]
    shifted = np.left_shift(np.uint64(1), leaf_index.astype(np.uint64))
    return np.bitwise_or.reduce(np.where(hit, shifted, np.uint64(0)), axis=1)


def reduced_mask(dom: np.ndarray, rng: np.ndarray, n: int) -> np.ndarray:
    if n == 1:
        return np.ones(dom.shape[0], dtype=bool)
    return (exposed_masks(dom) & exposed_masks(rng)) == 0


def codes_to_strings(codes: np.ndarray) -> List[str]:
    if codes.shape[0] == 0:
        return []
    raw = np.ascontiguousarray(codes).tobytes().translate(_TO_ASCII).decode("ascii")
    width = codes.shape[1]
    return [raw[i:i + width] for i in range(0, len(raw), width)]


def random_tree(n: int, rng: RngStream) -> Tree:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return Tree(rng.tree_code(n))


def _check_pair_n(n: int):
    if n < 1:
        raise ValueError("reduced pairs need at least one caret")
    if n > PAIR_SAMPLER_CAP:
        raise ValueError(f"n = {n} exceeds the rejection-sampling cap {PAIR_SAMPLER_CAP}")


def random_reduced_pair(n: int, rng: RngStream) -> TreePair:
    _check_pair_n(n)
    d, r = rng.reduced_pair_codes(n)
    return TreePair(Tree(d), Tree(r))


def random_element(n: int, rng: RngStream) -> Element:
    """Uniform element with exactly n carets in its reduced pair."""
    _check_pair_n(n)
    d, r = rng.reduced_pair_codes(n)
    return Element.from_reduced_codes(d, r)


@dataclass(frozen=True)
class StratumSpec:
    k: int
    n: int
    kind: str

    def __post_init__(self):
        if self.kind not in ("sum", "max"):
            raise ValueError(f"unknown stratification {self.kind!r}")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.kind == "sum" and self.n < self.k:
            raise ValueError("the sum sphere needs n >= k")
        if self.kind == "max" and self.n < 1:
            raise ValueError("the max sphere needs n >= 1")

    def contains_sizes(self, sizes: Sequence[int]) -> bool:
        if len(sizes) != self.k or min(sizes) < 1:
            return False
        return (sum(sizes) if self.kind == "sum" else max(sizes)) == self.n


@dataclass(frozen=True)
class TupleSample:
    elements: Tuple[Element, ...]
    stratum: StratumSpec

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(e.size for e in self.elements)

    def encode(self) -> str:
        return " ".join(e.encode() for e in self.elements)


def make_tuple(elements: Sequence[Element], stratum: StratumSpec) -> TupleSample:
    ordered = tuple(sorted(elements, key=Element.sort_key))
    if not stratum.contains_sizes([e.size for e in ordered]):
        raise ValueError("tuple sizes do not satisfy the stratum constraint")
    return TupleSample(ordered, stratum)


@lru_cache(maxsize=4096)
def _distinct_weights(pool: int, j: int) -> Tuple[int, ...]:
    return tuple(comb(pool, d) * comb(j - 1, d - 1) for d in range(1, min(j, pool) + 1))


def uniform_multiset(pool: int, j: int, draw: Callable[[], Element], rng: RngStream) -> List[Element]:
    """Uniform multiset of size j from a pool of `pool` items.

    draw() must return a uniform item of the pool.  The number d of distinct
    items has weight C(pool, d) C(j-1, d-1); the d items are drawn until
    distinct, and multiplicities form a uniform composition of j into d
    parts laid over the items in canonical order.
    """
    if j == 0:
        return []
    d = 1 + rng.weighted_index(_distinct_weights(pool, j))
    items: List[Element] = []
    seen = set()
    while len(items) < d:
        e = draw()
        if e not in seen:
            seen.add(e)
            items.append(e)
    items.sort(key=Element.sort_key)
    cuts = sorted(v + 1 for v in rng.sample_distinct(j - 1, d - 1)) if d > 1 else []
    bounds = [0] + cuts + [j]
    out: List[Element] = []
    for item, lo, hi in zip(items, bounds, bounds[1:]):
        out.extend([item] * (hi - lo))
    return out


def _draw_below(n: int, rng: RngStream) -> Callable[[], Element]:
    """Uniform draw over all reduced pairs with 1..n carets."""
    r = r_values(n)
    weights = list(r[1:n + 1])

    def draw() -> Element:
        s = 1 + rng.weighted_index(weights)
        return random_element(s, rng)
    return draw


def random_sum_tuple(spec: StratumSpec, rng: RngStream) -> TupleSample:
    if spec.kind != "sum":
        raise ValueError("expected a sum stratum")
    k, n = spec.k, spec.n
    r = r_values(n)
    out: List[Element] = []
    j, m = k, n
    for s in range(n - k + 1, 0, -1):
        if j == 0:
            break
        options = list(range(0, min(j, m // s) + 1))
        weights = [multiset_count(r[s], t) * sum_ways(s - 1, j - t, m - s * t) for t in options]
        t = options[rng.weighted_index(weights)]
        if t:
            out.extend(uniform_multiset(r[s], t, lambda s=s: random_element(s, rng), rng))
        j -= t
        m -= s * t
    return make_tuple(out, spec)


def random_max_tuple(spec: StratumSpec, rng: RngStream) -> TupleSample:
    if spec.kind != "max":
        raise ValueError("expected a max stratum")
    k, n = spec.k, spec.n
    top = r_values(n)[n]
    j = 1 + rng.weighted_index(max_split_weights(k, n))
    out = uniform_multiset(top, j, lambda: random_element(n, rng), rng)
    if k > j:
        out += uniform_multiset(cumulative_r(n - 1), k - j, _draw_below(n - 1, rng), rng)
    return make_tuple(out, spec)


def random_tuple(spec: StratumSpec, rng: RngStream) -> TupleSample:
    return random_sum_tuple(spec, rng) if spec.kind == "sum" else random_max_tuple(spec, rng)


def acceptance_rate(rng: RngStream, n: int) -> Optional[float]:
    tried = rng.attempts.get(n, 0)
    return rng.accepted.get(n, 0) / tried if tried else None
