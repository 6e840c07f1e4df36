"""Exact tables for c_n, c_n^2, forest counts f(k, m) and r_n.

r_n is the number of reduced tree pairs with n carets in each tree.  It
is computed four ways: the decoration convolution, the alternating
binomial formula, a five-term linear recurrence and Woodruff's double sum.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, List, Sequence, Tuple

import mpmath

PRECISION = 60


@dataclass(frozen=True)
class BigSeq:
    name: str
    values: Tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.values[n]

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class RecurrenceSpec:
    """sum_j coeffs[j](n) * r_{n+j} = 0, with coeffs as integer polynomials in n."""

    order: int
    coefficients: Tuple[Tuple[int, ...], ...]  # per shift, ascending powers of n
    initial: Tuple[int, ...]
    first_n: int

    def coefficient(self, shift: int, n: int) -> int:
        return sum(c * n ** i for i, c in enumerate(self.coefficients[shift]))


def _poly(*factors: Tuple[int, ...]) -> Tuple[int, ...]:
    out = [1]
    for f in factors:
        res = [0] * (len(out) + len(f) - 1)
        for i, a in enumerate(out):
            for j, b in enumerate(f):
                res[i + j] += a * b
        out = res
    return tuple(out)


# 0 = (n+5)(n+6)^2 r_{n+5} - (n+5)(n+4)(21n+101) r_{n+4}
#   + 2(4n+15)(n+4)(13n+33) r_{n+3} - 4(n+3)(53n^2+208n+195) r_{n+2}
#   + 32(6n+5)(n+2)(n+1) r_{n+1} - 64 n^2 (n+1) r_n
RN_RECURRENCE_COEFFS = (
    _poly((0, 0, -64), (1, 1)),
    _poly((32,), (5, 6), (2, 1), (1, 1)),
    _poly((-4,), (3, 1), (195, 208, 53)),
    _poly((2,), (15, 4), (4, 1), (33, 13)),
    _poly((-1,), (5, 1), (4, 1), (101, 21)),
    _poly((5, 1), (6, 1), (6, 1)),
)

# The differential operator annihilating R(z) is not executed; the
# recurrence above is the form used everywhere.  Note that the recurrence
# only holds from n = 2 on, so r_1..r_6 seed it.
RECURRENCE_FIRST_N = 2


class RecurrenceError(ArithmeticError):
    pass


def catalan(N: int) -> BigSeq:
    if N < 0:
        raise ValueError("N must be nonnegative")
    return BigSeq("c", tuple(_catalan_list(N)))


_CAT: List[int] = [1]


def _catalan_list(N: int) -> List[int]:
    while len(_CAT) <= N:
        n = len(_CAT) - 1
        _CAT.append(_CAT[-1] * 2 * (2 * n + 1) // (n + 2))
    return _CAT[:N + 1]


def catalan_squares(N: int) -> BigSeq:
    return BigSeq("c^2", tuple(c * c for c in _catalan_list(N)))


def forest_count(k: int, n: int) -> int:
    """f(k, n) = k/(2n+k) * C(2n+k, n): k-tree forests with n carets."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if n < 0:
        return 0
    return k * comb(2 * n + k, n) // (2 * n + k)


def rn_by_convolution(N: int) -> BigSeq:
    if N < 1:
        raise ValueError("N must be at least 1")
    c = _catalan_list(N)
    r = [0, 1]
    for n in range(2, N + 1):
        total = c[n] * c[n]
        for i in range(1, n):
            total -= r[i] * forest_count(i + 1, n - i)
        r.append(total)
    return BigSeq("r", tuple(r[:N + 1]))


def rn_by_formula(n: int) -> int:
    if n < 1:
        raise ValueError("n must be at least 1")
    c = _catalan_list(n)
    return sum((-1) ** (n - k) * comb(k + 1, n - k) * c[k] * c[k] for k in range(1, n + 1))


def rn_recurrence_spec() -> RecurrenceSpec:
    return RecurrenceSpec(
        order=5,
        coefficients=RN_RECURRENCE_COEFFS,
        initial=tuple(rn_by_convolution(6).values),
        first_n=RECURRENCE_FIRST_N,
    )


def recurrence_residual(values: Sequence[int], n: int) -> int:
    spec = RN_RECURRENCE_COEFFS
    return sum(sum(c * n ** i for i, c in enumerate(spec[j])) * values[n + j] for j in range(6))


def rn_by_recurrence(N: int) -> BigSeq:
    """Extend r_1..r_6 by solving the recurrence for r_{n+5}, n >= 2.

    Every division by (n+5)(n+6)^2 must be exact; anything else means the
    recurrence was transcribed wrongly and raises RecurrenceError.
    """
    if N < 6:
        raise ValueError("N must be at least 6")
    spec = rn_recurrence_spec()
    r = list(spec.initial)
    for n in range(spec.first_n, N - 4):
        if n + 5 < len(r):
            continue
        rest = sum(spec.coefficient(j, n) * r[n + j] for j in range(5))
        lead = spec.coefficient(5, n)
        q, rem = divmod(-rest, lead)
        if rem:
            raise RecurrenceError(f"non-integral step at n = {n}")
        r.append(q)
    return BigSeq("r", tuple(r[:N + 1]))


def rn_by_woodruff(n: int) -> int:
    if n < 2:
        raise ValueError("the double sum is stated for n >= 2")
    c = _catalan_list(n)
    total = 0
    for k in range(1, (n + 1) // 2 + 1):
        inner = sum((-1) ** i * comb(k, i) * c[n - i] for i in range(k + 1))
        total += 2 ** (n - 2 * k + 1) * comb(n - 1, n - 2 * k + 1) * c[k - 1] * inner
    return total


@lru_cache(maxsize=None)
def _r_table(N: int) -> Tuple[int, ...]:
    if N < 6:
        return rn_by_convolution(max(N, 1)).values[:N + 1]
    return rn_by_recurrence(N).values


def r_values(N: int) -> Tuple[int, ...]:
    """Memoized r_0..r_N (r_0 = 0)."""
    size = 64
    while size < N:
        size *= 2
    return _r_table(size)[:N + 1]


def mu(dps: int = PRECISION):
    with mpmath.workdps(dps):
        return mpmath.mpf(8) + 4 * mpmath.sqrt(3)


def constant_a(dps: int = PRECISION):
    with mpmath.workdps(dps):
        return (6 - 3 * mpmath.sqrt(3)) / mpmath.pi


def correction_target(dps: int = PRECISION):
    with mpmath.workdps(dps):
        return mpmath.mpf(33) / 2 - 11 * mpmath.sqrt(3)


@dataclass
class AsymptoticReport:
    mu: object
    ratio_deviation: Dict[int, object] = field(default_factory=dict)
    constant_estimate: Dict[int, object] = field(default_factory=dict)
    a_target: object = None
    fitted_a: object = None
    fitted_correction: object = None
    correction_target: object = None
    correction_checked: bool = False


def scaled_rn(n: int, r: Sequence[int], dps: int = PRECISION):
    """n^3 r_n / mu^n, with r_n converted exactly before one rounding."""
    with mpmath.workdps(dps):
        return mpmath.mpf(n) ** 3 * mpmath.mpf(r[n]) / mu(dps) ** n


def fit_correction(r: Sequence[int], ns: Sequence[int], terms: int = 7, dps: int = PRECISION):
    """Least squares of n^3 r_n / mu^n on 1, 1/n, ..., 1/n^(terms-1).

    Returns (A, c) where the fit reads A (1 + c/n + ...).
    """
    with mpmath.workdps(dps):
        rows = [[mpmath.mpf(1) / mpmath.mpf(n) ** j for j in range(terms)] for n in ns]
        rhs = [scaled_rn(n, r, dps) for n in ns]
        M = mpmath.matrix(rows)
        b = mpmath.matrix(rhs)
        sol = mpmath.qr_solve(M, b)[0] if len(ns) > terms else mpmath.lu_solve(M, b)
        return sol[0], sol[1] / sol[0]


def asymptotic_report(N: int, dps: int = PRECISION) -> AsymptoticReport:
    if N < 100:
        raise ValueError("N must be at least 100")
    r = r_values(N + 1)
    m = mu(dps)
    rep = AsymptoticReport(mu=m, a_target=constant_a(dps), correction_target=correction_target(dps))
    with mpmath.workdps(dps):
        checkpoints = sorted({n for n in (100, 200, 500, 1000, 1500, 2000, N) if n <= N})
        for n in checkpoints:
            rep.ratio_deviation[n] = abs(mpmath.mpf(r[n + 1]) / mpmath.mpf(r[n]) / m - 1)
            rep.constant_estimate[n] = scaled_rn(n, r, dps)
        step = max(1, N // 10)
        ns = [n for n in range(N // 5, N + 1, step)][-7:]
        if len(ns) >= 7:
            rep.fitted_a, rep.fitted_correction = fit_correction(r, ns, 7, dps)
            rep.correction_checked = bool(
                abs(rep.fitted_correction / rep.correction_target - 1) < mpmath.mpf("0.1"))
    return rep


def partial_sum_check(N: int) -> bool:
    if N < 2:
        raise ValueError("N must be at least 2")
    r = r_values(N)
    running = r[1]
    for n in range(2, N + 1):
        if running > r[n]:
            return False
        running += r[n]
    return True


def quotient_limit_check(k: int, N: int, dps: int = PRECISION) -> Dict[str, object]:
    if abs(k) > 10:
        raise ValueError("|k| must be at most 10")
    r = r_values(N + max(0, -k))
    with mpmath.workdps(dps):
        ratio = mpmath.mpf(r[N - k]) / mpmath.mpf(r[N])
        target = mu(dps) ** (-k)
        return {"k": k, "N": N, "ratio": ratio, "target": target,
                "relative_error": abs(ratio / target - 1)}


def substitution_coefficients(N: int) -> List[int]:
    """Coefficients of (1 - z) P(z(1 - z)) up to z^N, P = sum_{n>=1} c_n^2 z^n."""
    c2 = catalan_squares(N).values
    out = [0] * (N + 1)
    # z^k (1-z)^k expanded, times c_k^2
    for k in range(1, N + 1):
        for j in range(k + 1):
            if k + j > N:
                break
            out[k + j] += c2[k] * comb(k, j) * (-1) ** j
    res = [out[0]] + [out[n] - out[n - 1] for n in range(1, N + 1)]
    return res


def rn_table_rows(N: int, dps: int = 20) -> List[Tuple]:
    """Rows (n, c_n, c_n^2, r_n, r_n/r_{n-1}, n^3 r_n / mu^n) for n = 1..N."""
    r = r_values(N)
    c = _catalan_list(N)
    rows = []
    with mpmath.workdps(dps):
        m = mu(dps + 10)
        for n in range(1, N + 1):
            ratio = mpmath.mpf(r[n]) / r[n - 1] if n > 1 else None
            scaled = mpmath.mpf(n) ** 3 * r[n] / m ** n
            rows.append((n, c[n], c[n] * c[n], r[n], ratio, scaled))
    return rows
