"""Sphere sizes, the cyclic/abelian classifier and density estimation."""

import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, combinations_with_replacement
from math import comb, factorial, gcd
from statistics import NormalDist
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import mpmath

from .element import (Element, commute, endpoint_slopes, first_slope_exponent, invert,
                      power, support_bounds)
from .enumeration import mu, r_values
from .sampling import RngStream, StratumSpec, TupleSample, make_tuple, random_tuple
from .spheres import cumulative_r, max_sphere_size, sphere_size, sum_sphere_size
from .trees import enumerate_reduced_pairs

EXACT_CUTOVER = 200_000
CHUNK = 10_000


class ClassLabel(str, Enum):
    TRIVIAL = "TRIVIAL"
    CYCLIC_Z = "CYCLIC_Z"
    Z2 = "Z2"
    ABELIAN_COMMUTING = "ABELIAN_COMMUTING"
    NONABELIAN_UNCLASSIFIED = "NONABELIAN_UNCLASSIFIED"


# ---------------------------------------------------------------- spheres

@dataclass(frozen=True)
class SphereTable:
    kind: str
    k: int
    values: Dict[int, int]


def sphere_table(kind: str, k: int, n_max: int) -> SphereTable:
    start = k if kind == "sum" else 1
    return SphereTable(kind, k, {n: sphere_size(kind, k, n) for n in range(start, n_max + 1)})


@dataclass
class BoundReport:
    kind: str
    checked: int = 0
    violations: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class BoundViolation(AssertionError):
    pass


def check_sum_bounds(k_max: int, N: int) -> BoundReport:
    """r_{n-k+1} <= |Sph^sum_k(n)| <= r_{n+k-1} for k <= k_max, k <= n <= N."""
    r = r_values(N + k_max)
    rep = BoundReport("sum")
    for k in range(1, k_max + 1):
        for n in range(k, N + 1):
            size = sum_sphere_size(k, n)
            rep.checked += 1
            if not r[n - k + 1] <= size <= r[n + k - 1]:
                rep.violations.append((k, n))
    if rep.violations:
        raise BoundViolation(f"sum sphere bounds fail at {rep.violations[:5]}")
    return rep


def check_max_bounds(k_max: int, N: int) -> BoundReport:
    """r_n^k / k! <= |Sph^max_k(n)| <= k r_n^k for k <= k_max, n <= N."""
    r = r_values(N)
    rep = BoundReport("max")
    for k in range(1, k_max + 1):
        for n in range(1, N + 1):
            size = max_sphere_size(k, n)
            rep.checked += 1
            if not (r[n] ** k <= factorial(k) * size and size <= k * r[n] ** k):
                rep.violations.append((k, n))
    if rep.violations:
        raise BoundViolation(f"max sphere bounds fail at {rep.violations[:5]}")
    return rep


_POOLS: Dict[int, List[Element]] = {}


def elements_of_size(s: int) -> List[Element]:
    if s not in _POOLS:
        _POOLS[s] = sorted((Element.from_pair(p) for p in enumerate_reduced_pairs(s)),
                           key=Element.sort_key)
    return _POOLS[s]


def _size_profiles(kind: str, k: int, n: int) -> Iterator[Tuple[int, ...]]:
    """Nondecreasing size sequences of length k in the sphere."""
    top = n - k + 1 if kind == "sum" else n
    for sizes in combinations_with_replacement(range(1, top + 1), k):
        if (sum(sizes) if kind == "sum" else max(sizes)) == n:
            yield sizes


def iter_sphere(kind: str, k: int, n: int) -> Iterator[Tuple[Element, ...]]:
    """Every unordered tuple of the sphere, one size profile at a time."""
    for sizes in _size_profiles(kind, k, n):
        groups = []
        for s in sorted(set(sizes)):
            groups.append(list(combinations_with_replacement(elements_of_size(s), sizes.count(s))))
        yield from _product_concat(groups)


def _product_concat(groups):
    if not groups:
        yield ()
        return
    for head in groups[0]:
        for tail in _product_concat(groups[1:]):
            yield head + tail


def brute_force_sphere_count(kind: str, k: int, n: int) -> int:
    """Count by filtering all multisets over the full element pool."""
    top = n - k + 1 if kind == "sum" else n
    pool = [e for s in range(1, top + 1) for e in elements_of_size(s)]
    total = 0
    for tup in combinations_with_replacement(pool, k):
        sizes = [e.size for e in tup]
        if (sum(sizes) if kind == "sum" else max(sizes)) == n:
            total += 1
    return total


BRUTE_FORCE_LIMIT = 1_000_000


def sphere_count_oracle(kind: str, k: int, n: int, limit: int = BRUTE_FORCE_LIMIT) -> Tuple[int, str]:
    """Sphere size without the DP: brute force when the multiset space is small.

    Larger spheres fall back to profile_sphere_count, which still works
    from enumerated pools rather than from r_n.
    """
    top = n - k + 1 if kind == "sum" else n
    pool = sum(len(elements_of_size(s)) for s in range(1, top + 1))
    if comb(pool + k - 1, k) <= limit:
        return brute_force_sphere_count(kind, k, n), "brute force"
    return profile_sphere_count(kind, k, n), "size profiles"


def profile_sphere_count(kind: str, k: int, n: int) -> int:
    """Count by listing size profiles, with pool sizes taken from enumeration."""
    total = 0
    for sizes in _size_profiles(kind, k, n):
        term = 1
        for s in set(sizes):
            pool = len(elements_of_size(s))
            term *= comb(pool + sizes.count(s) - 1, sizes.count(s))
        total += term
    return total


# ---------------------------------------------------------------- classifier

def _same_support(f: Element, g: Element) -> bool:
    return support_bounds(f) == support_bounds(g)


def cyclic_pair(f: Element, g: Element) -> bool:
    """True iff the non-identity elements f, g generate an infinite cyclic group.

    If f = h^a and g = h^b then both have h's support, their slope exponents
    at the left end of the support are a r_h and b r_h, and
    f^(r_g/d) = g^(r_f/d).  Conversely that equation is a relation
    f^p = g^q with (p, q) != 0; in a torsion-free group with unique roots
    that forces f, g into one cyclic group.
    """
    if f == g or f == invert(g):
        return True
    # f^p = g^q already forces f and g to commute: F is bi-orderable, and
    # in a bi-orderable group an element commuting with y^q commutes with y.
    if not _same_support(f, g):
        return False
    sf, sg = endpoint_slopes(f), endpoint_slopes(g)
    if sf.a * sg.b != sf.b * sg.a:
        return False
    rf, rg = first_slope_exponent(f), first_slope_exponent(g)
    d = gcd(rf, rg)
    return power(f, rg // d) == power(g, rf // d)


def is_cyclic_tuple(fs: Sequence[Element]) -> bool:
    nonid = list({f for f in fs if not f.is_identity()})
    if not nonid:
        return False
    for f, g in combinations(nonid, 2):
        if not cyclic_pair(f, g):
            return False
    return True


def _all_commute(fs: Sequence[Element]) -> bool:
    return all(commute(f, g) for f, g in combinations(fs, 2))


def classify_elements(fs: Sequence[Element]) -> ClassLabel:
    nonid = list({f for f in fs if not f.is_identity()})
    if not nonid:
        return ClassLabel.TRIVIAL
    if is_cyclic_tuple(nonid):
        return ClassLabel.CYCLIC_Z
    if _all_commute(nonid):
        return ClassLabel.Z2 if len(fs) == 2 else ClassLabel.ABELIAN_COMMUTING
    return ClassLabel.NONABELIAN_UNCLASSIFIED


def classify(t) -> ClassLabel:
    fs = t.elements if isinstance(t, TupleSample) else t
    return classify_elements(fs)


def has_label(fs: Sequence[Element], label: ClassLabel) -> bool:
    """classify(fs) == label, skipping work the label does not need."""
    label = ClassLabel(label)
    nonid = list({f for f in fs if not f.is_identity()})
    if label is ClassLabel.TRIVIAL:
        return not nonid
    if not nonid:
        return False
    cyclic = is_cyclic_tuple(nonid)
    if label is ClassLabel.CYCLIC_Z:
        return cyclic
    if cyclic:
        return False
    if label is ClassLabel.Z2 and len(fs) != 2:
        return False
    if label is ClassLabel.ABELIAN_COMMUTING and len(fs) == 2:
        return False
    abelian = _all_commute(nonid)
    if label is ClassLabel.NONABELIAN_UNCLASSIFIED:
        return not abelian
    return abelian


# ---------------------------------------------------------------- estimation

@dataclass
class DensityEstimate:
    stratum: StratumSpec
    label: ClassLabel
    estimate: float
    ci: Tuple[float, float]
    samples: int
    seed: Optional[int]
    exact: bool
    method: str
    exact_fraction: float = 0.0
    hits: int = 0

    def to_dict(self) -> dict:
        return {
            "stratum": {"k": self.stratum.k, "n": self.stratum.n, "kind": self.stratum.kind},
            "label": self.label.value,
            "estimate": self.estimate,
            "ci": list(self.ci),
            "samples": self.samples,
            "hits": self.hits,
            "seed": self.seed,
            "exact": self.exact,
            "method": self.method,
            "exact_fraction": self.exact_fraction,
        }


def wilson_interval(hits: int, trials: int, confidence: float = 0.95) -> Tuple[float, float]:
    if trials == 0:
        return (0.0, 1.0)
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    p = hits / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * ((p * (1 - p) / trials + z * z / (4 * trials * trials)) ** 0.5) / denom
    return (max(0.0, centre - half), min(1.0, centre + half))


def in_degenerate_stratum(fs: Sequence[Element]) -> bool:
    """All non-identity entries lie in {f, f^-1} for one f (or there are none)."""
    nonid = [f for f in fs if not f.is_identity()]
    if not nonid:
        return True
    f = nonid[0]
    finv = invert(f)
    return all(g == f or g == finv for g in nonid)


def degenerate_counts(spec: StratumSpec) -> Tuple[int, int]:
    """(trivial tuples, cyclic tuples) inside the degenerate stratum.

    A class {f, f^-1} with |f| = s >= 2 contributes one tuple per way of
    splitting the j non-identity slots between f and f^-1; there are
    r_s / 2 such classes because inversion pairs off the size-s elements.
    """
    k, n = spec.k, spec.n
    if spec.kind == "max":
        if n == 1:
            return 1, 0
        r_n = r_values(n)[n]
        return 0, r_n // 2 * (comb(k + 2, 2) - 1)
    trivial = 1 if n == k else 0
    cyclic = 0
    r = r_values(n)
    for j in range(1, k + 1):
        excess = n - k + j
        if excess % j == 0 and excess // j >= 2:
            s = excess // j
            cyclic += r[s] // 2 * (j + 1)
    return trivial, cyclic


def _run_chunk(seed: int, stream: Tuple[int, ...], spec: StratumSpec, label: str,
               count: int, stratified: bool) -> Tuple[int, int]:
    rng = RngStream(seed, stream)
    hits = drawn = 0
    lab = ClassLabel(label)
    while drawn < count:
        t = random_tuple(spec, rng)
        if stratified and in_degenerate_stratum(t.elements):
            continue
        drawn += 1
        if has_label(t.elements, lab):
            hits += 1
    return hits, drawn


def exact_density(spec: StratumSpec, label: ClassLabel) -> Tuple[int, int]:
    hits = total = 0
    for tup in iter_sphere(spec.kind, spec.k, spec.n):
        total += 1
        if has_label(tup, label):
            hits += 1
    return hits, total


def estimate_density(spec: StratumSpec, label, samples: int, rng: RngStream,
                     method: str = "stratified", threads: int = 1,
                     exact_cutover: int = EXACT_CUTOVER, progress: bool = False) -> DensityEstimate:
    """Density of `label` on the sphere of `spec`.

    Small spheres are enumerated.  Otherwise Monte Carlo runs in fixed
    chunks of CHUNK draws, chunk i on substream i, so the result does not
    depend on `threads`.  The stratified method counts the degenerate
    tuples (entries from {1, f, f^-1}) exactly and samples only the rest.
    """
    label = ClassLabel(label)
    if method not in ("stratified", "plain"):
        raise ValueError(f"unknown method {method!r}")
    total = sphere_size(spec.kind, spec.k, spec.n)
    if total <= exact_cutover:
        hits, count = exact_density(spec, label)
        p = hits / count
        return DensityEstimate(spec, label, p, (p, p), count, rng.seed, True, "exact",
                               1.0, hits)
    stratified = method == "stratified"
    known_label = 0
    known = 0
    if stratified:
        trivial, cyclic = degenerate_counts(spec)
        known = trivial + cyclic
        known_label = {ClassLabel.TRIVIAL: trivial, ClassLabel.CYCLIC_Z: cyclic}.get(label, 0)
    weight = mpmath.mpf(total - known) / total
    if known == total:
        p = known_label / total  # int division rounds correctly
        return DensityEstimate(spec, label, p, (p, p), 0, rng.seed, True, method, 1.0, 0)
    chunks = []
    left = samples
    i = 0
    while left > 0:
        chunks.append((rng.seed, rng.stream + (i,), spec, label.value, min(CHUNK, left), stratified))
        left -= CHUNK
        i += 1
    hits = drawn = 0
    if threads > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = pool.map(_run_chunk, *zip(*chunks))
            for j, (h, d) in enumerate(results):
                hits, drawn = hits + h, drawn + d
                if progress:
                    print(f"[estimate] chunk {j + 1}/{len(chunks)}", file=sys.stderr)
    else:
        for j, args in enumerate(chunks):
            h, d = _run_chunk(*args)
            hits, drawn = hits + h, drawn + d
            if progress:
                print(f"[estimate] chunk {j + 1}/{len(chunks)}", file=sys.stderr)
    lo, hi = wilson_interval(hits, drawn)
    base = mpmath.mpf(known_label) / total
    est = base + weight * mpmath.mpf(hits) / drawn
    return DensityEstimate(spec, label, float(est),
                           (float(base + weight * lo), float(base + weight * hi)),
                           drawn, rng.seed, False, method, float(1 - weight), hits)


# ---------------------------------------------------------------- exhaustive cyclic count

def _power_key(f: Element, K: int) -> Element:
    return power(f, K // first_slope_exponent(f))


def _direction(v: Tuple[int, int]) -> Tuple[int, int]:
    a, b = v
    g = gcd(a, b)
    if g == 0:
        return (0, 0)
    a, b = a // g, b // g
    return (a, b) if (a, b) > (0, 0) else (-a, -b)


def cyclic_pair_count(n: int) -> int:
    """Unordered pairs {f, g} with max size n generating an infinite cyclic group.

    Pairs {1, f} and {f, f} are counted directly.  For distinct non-identity
    f, g the key P(f) = f^(K / r_f), K = lcm(1..n), r_f the first slope
    exponent, agrees exactly when the pair is cyclic: powers of one h share
    P = h^(K / r_h), and P(f) = P(g) is a relation f^p = g^q.  P is
    computed only inside buckets of equal support and slope direction that
    hold a size-n element.
    """
    if n < 2:
        return 0
    top = elements_of_size(n)
    count = 2 * len(top)
    K = 1
    for i in range(1, n + 1):
        K = K * i // gcd(K, i)
    buckets: Dict[Tuple, List[Element]] = {}
    for s in range(2, n + 1):
        for f in elements_of_size(s):
            key = (support_bounds(f), _direction(endpoint_slopes(f)))
            buckets.setdefault(key, []).append(f)
    for members in buckets.values():
        if len(members) < 2 or not any(f.size == n for f in members):
            continue
        groups: Dict[Element, List[Element]] = {}
        for f in members:
            groups.setdefault(_power_key(f, K), []).append(f)
        for group in groups.values():
            big = sum(1 for f in group if f.size == n)
            # pairs with at least one size-n member
            count += comb(len(group), 2) - comb(len(group) - big, 2)
    return count


def cyclic_pair_count_brute(n: int) -> int:
    pool = [e for s in range(1, n + 1) for e in elements_of_size(s)]
    total = 0
    for f, g in combinations_with_replacement(pool, 2):
        if max(f.size, g.size) == n and is_cyclic_tuple((f, g)):
            total += 1
    return total


def cyclic_overcount_bound(n: int) -> int:
    return (2 * n + 1) * (n + 1) * r_values(n)[n]


# ---------------------------------------------------------------- theoretical bounds

@dataclass(frozen=True)
class LambdaBound:
    """lambda_k * coefficient, where lambda_k in (0, 1] is not known."""

    k: int
    coefficient: object

    def __str__(self):
        return f"lambda_{self.k} * {mpmath.nstr(self.coefficient, 15)}"


def theoretical_bounds(name: str, **params):
    m = mu()
    if name == "sum_visible":
        s, k = params["s"], params["k"]
        return m ** (-(s - 1 + 2 * k))
    if name == "lemma_z":
        k = params["k"]
        return m ** (-k * k + k) / k
    if name == "spec2":
        return m ** (-params["n1"] - params["n2"] - 4) / 2
    if name == "fpersis":
        k = params["k"]
        return m ** (-4) * m ** (-5) * m ** (-3 * (k - 2)) / k
    if name == "product_z":
        k = params["k"]
        return LambdaBound(k, m ** (-k - 1) / (k + 1))
    if name == "wreath":
        k = params["k"]
        return LambdaBound(k, m ** (-3 * k - 3) / (k + 1))
    raise ValueError(f"unknown bound {name!r}")


BOUND_NAMES = ("sum_visible", "lemma_z", "spec2", "fpersis", "product_z", "wreath")


def count_construction_mass(name: str, k: int, n: int, **params) -> int:
    r = r_values(n)
    if name == "lemma_z":
        if n - k + 1 < 1:
            return 0
        return r[n - k + 1] ** k
    if name == "fpersis":
        if k < 2 or n < 6:
            return 0
        return r[n - 4] * r[n - 5] * r[n - 3] ** (k - 2)
    if name == "sum_visible":
        s = params["s"]
        return r[n - (s + k)] if n > s + k else 0
    if name == "spec2":
        n1, n2 = params["n1"], params["n2"]
        return r[n - n1 - 2] * r[n - n2 - 2] if n > max(n1, n2) + 2 else 0
    raise ValueError(f"unknown construction {name!r}")


def construction_ratio(name: str, k: int, n: int, **params):
    """count_construction_mass / sphere_size, as a high-precision real."""
    kind = "sum" if name == "sum_visible" else "max"
    size = sphere_size(kind, k, n)
    return mpmath.mpf(count_construction_mass(name, k, n, **params)) / size


def mass_over_upper_bound(name: str, k: int, n: int, **params):
    """The quotient used inside the lower-bound arguments: mass / (k r_n^k)."""
    r_n = r_values(n)[n]
    return mpmath.mpf(count_construction_mass(name, k, n, **params)) / (k * mpmath.mpf(r_n) ** k)
