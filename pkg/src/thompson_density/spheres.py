"""Exact counts of unordered k-tuples of reduced pairs on the two spheres.

Sizes are caret counts.  An unordered tuple is a multiset, so a group of
j entries of size s drawn from the r_s reduced pairs of that size is
counted by C(r_s + j - 1, j).
"""

from functools import lru_cache
from math import comb
from typing import Tuple

from .enumeration import r_values


def multiset_count(pool: int, j: int) -> int:
    """Multisets of size j from `pool` distinct items."""
    if j == 0:
        return 1
    if pool <= 0:
        return 0
    return comb(pool + j - 1, j)


def cumulative_r(n: int) -> int:
    """R_n = r_1 + ... + r_n."""
    return sum(r_values(n)[1:n + 1]) if n >= 1 else 0


@lru_cache(maxsize=None)
def sum_ways(s: int, j: int, m: int) -> int:
    """Multisets of j reduced pairs with sizes in 1..s summing to m."""
    if j == 0:
        return 1 if m == 0 else 0
    if s == 0 or m < j or m > j * s:
        return 0
    r_s = r_values(s)[s]
    total = 0
    for t in range(0, min(j, m // s) + 1):
        total += multiset_count(r_s, t) * sum_ways(s - 1, j - t, m - s * t)
    return total


def sum_sphere_size(k: int, n: int) -> int:
    if k < 1:
        raise ValueError("k must be at least 1")
    if n < k:
        return 0
    return sum_ways(n - k + 1, k, n)


def max_split_weights(k: int, n: int) -> Tuple[int, ...]:
    """Weight of having exactly j entries of size n, j = 1..k."""
    top = r_values(n)[n]
    below = cumulative_r(n - 1)
    return tuple(multiset_count(top, j) * multiset_count(below, k - j) for j in range(1, k + 1))


def max_sphere_size(k: int, n: int) -> int:
    if k < 1 or n < 1:
        raise ValueError("k and n must be at least 1")
    return sum(max_split_weights(k, n))


def max_sphere_size_closed(k: int, n: int) -> int:
    """'All sizes <= n' minus 'all sizes <= n - 1'."""
    return multiset_count(cumulative_r(n), k) - multiset_count(cumulative_r(n - 1), k)


def sphere_size(kind: str, k: int, n: int) -> int:
    if kind == "sum":
        return sum_sphere_size(k, n)
    if kind == "max":
        return max_sphere_size(k, n)
    raise ValueError(f"unknown stratification {kind!r}")
