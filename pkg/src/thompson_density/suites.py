"""Property suites shared by `thompson-density verify` and the tests.

Each suite returns a list of SuiteResult; nothing here raises on a failed
property, the caller decides what a failure means.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List

import mpmath

from . import constructions as C
from .density import (ClassLabel, check_max_bounds, check_sum_bounds, classify_elements,
                      sphere_count_oracle, cyclic_overcount_bound, cyclic_pair_count)
from .element import (Element, commutator, conjugate, endpoint_slopes, exponent_sums, from_plmap,
                      in_commutator, in_commutator_by_kernel, in_commutator_by_slopes, invert,
                      multiply, power, to_plmap, x, x0, x1)
from .enumeration import (asymptotic_report, catalan, forest_count, partial_sum_check,
                          rn_by_convolution, rn_by_formula, rn_by_recurrence, rn_by_woodruff)
from .sampling import RngStream, random_element
from .spheres import sphere_size
from .trees import enumerate_forests, enumerate_reduced_pairs, enumerate_trees


@dataclass
class SuiteResult:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'OK' if self.ok else 'FAIL'}: {self.name}" + (f" ({self.detail})" if self.detail else "")


def rn_methods(max_n: int = 500) -> List[SuiteResult]:
    conv = rn_by_convolution(max_n)
    rec = rn_by_recurrence(max(max_n, 6))
    bad = [n for n in range(1, max_n + 1)
           if not (conv[n] == rec[n] == rn_by_formula(n)
                   and (n < 2 or rn_by_woodruff(n) == conv[n]))]
    detail = "" if not bad else f"first disagreement at n = {bad[0]}"
    return [SuiteResult("4 methods agree", not bad, detail)]


def oracles(max_n: int = 6) -> List[SuiteResult]:
    conv = rn_by_convolution(max(max_n, 1))
    out = []
    bad = [n for n in range(1, max_n + 1) if len(enumerate_reduced_pairs(n)) != conv[n]]
    out.append(SuiteResult("r_n equals enumerated reduced pairs", not bad, f"n <= {max_n}"))
    c = catalan(8)
    out.append(SuiteResult("c_n equals enumerated trees",
                           all(len(enumerate_trees(n)) == c[n] for n in range(9))))
    ok = all(len(enumerate_forests(k, m)) == forest_count(k, m) for k in range(1, 5) for m in range(5))
    out.append(SuiteResult("f(k, m) equals enumerated forests", ok))
    return out


def asymptotics(max_n: int = 2000) -> List[SuiteResult]:
    rep = asymptotic_report(max_n)
    out = []
    if 1000 in rep.ratio_deviation:
        dev = rep.ratio_deviation[1000]
        out.append(SuiteResult("ratio test at n = 1000", dev < mpmath.mpf("5e-3"), mpmath.nstr(dev, 5)))
    top = max(rep.constant_estimate)
    rel = abs(rep.constant_estimate[top] / rep.a_target - 1)
    out.append(SuiteResult(f"n^3 r_n / mu^n near A at n = {top}", rel < mpmath.mpf("0.01"), mpmath.nstr(rel, 5)))
    if rep.fitted_correction is not None:
        out.append(SuiteResult("fitted 1/n correction", rep.correction_checked,
                               mpmath.nstr(rep.fitted_correction, 8)))
    out.append(SuiteResult("partial sums below next term", partial_sum_check(min(max_n, 1000))))
    return out


def algebra(max_size: int = 5, seed: int = 0, trials: int = 2000) -> List[SuiteResult]:
    a, b = x0(), x1()
    out = []
    ab = multiply(a, invert(b))
    rel1 = commutator(ab, conjugate(b, a)).is_identity()
    rel2 = commutator(ab, conjugate(b, power(a, 2))).is_identity()
    out.append(SuiteResult("presentation relators", rel1 and rel2))
    out.append(SuiteResult("endpoint slopes of x0, x1",
                           endpoint_slopes(a) == (1, -1) and endpoint_slopes(b) == (0, -1)))
    out.append(SuiteResult("x_(i+1) = x1^-1 x_i x1 for i >= 2",
                           all(conjugate(x(i), x1()) == x(i + 1) for i in range(2, 5))))
    rng = RngStream(seed, (7,))
    ok_hom = ok_pl = True
    for _ in range(trials):
        f = random_element(1 + rng.randbelow(max_size + 3), rng)
        g = random_element(1 + rng.randbelow(max_size + 3), rng)
        fg = multiply(f, g)
        ef, eg, efg = exponent_sums(f), exponent_sums(g), exponent_sums(fg)
        ok_hom &= efg == (ef.a + eg.a, ef.b + eg.b)
        ok_pl &= to_plmap(fg) == to_plmap(f).then(to_plmap(g)) and from_plmap(to_plmap(fg)) == fg
    out.append(SuiteResult("abelian image is a homomorphism", ok_hom, f"{trials} products"))
    out.append(SuiteResult("multiplication matches PL composition", ok_pl, f"{trials} products"))
    agree = True
    for n in range(1, max_size + 1):
        for p in enumerate_reduced_pairs(n):
            e = Element.from_pair(p)
            agree &= in_commutator(e) == in_commutator_by_slopes(e) == in_commutator_by_kernel(e)
    out.append(SuiteResult("three [F,F] tests agree", agree, f"sizes <= {max_size}"))
    return out


def spheres(k_max: int = 5, max_n: int = 60, brute_n: int = 6) -> List[SuiteResult]:
    out = []
    for name, fn in (("sum", check_sum_bounds), ("max", check_max_bounds)):
        try:
            rep = fn(k_max, max_n)
            out.append(SuiteResult(f"{name} sphere bounds", True, f"{rep.checked} cases"))
        except AssertionError as exc:
            out.append(SuiteResult(f"{name} sphere bounds", False, str(exc)))
    bad = [(kind, k, n) for kind in ("sum", "max") for k in range(1, 4) for n in range(k if kind == "sum" else 1, brute_n + 1)
           if sphere_count_oracle(kind, k, n)[0] != sphere_size(kind, k, n)]
    out.append(SuiteResult("DP equals independent count", not bad, f"k <= 3, n <= {brute_n}" if not bad else str(bad[:3])))
    return out


def classifier(samples: int = 500, seed: int = 0, count_n: int = 5) -> List[SuiteResult]:
    rng = RngStream(seed, (11,))
    errors = 0
    for _ in range(samples):
        h = random_element(2 + rng.randbelow(5), rng)
        p, q = 1 + rng.randbelow(3), 1 + rng.randbelow(3)
        if classify_elements((power(h, p), power(h, -q))) is not ClassLabel.CYCLIC_Z:
            errors += 1
        z = C.random_zn(2, 2 + rng.randbelow(4), rng)
        if classify_elements(z.elements) is not ClassLabel.Z2:
            errors += 1
    if classify_elements((x0(), x1())) is not ClassLabel.NONABELIAN_UNCLASSIFIED:
        errors += 1
    out = [SuiteResult("labelled tuples classified", errors == 0, f"{errors} errors")]
    within = all(cyclic_pair_count(n) <= cyclic_overcount_bound(n) for n in range(2, count_n + 1))
    out.append(SuiteResult("cyclic pair count within over-count bound", within, f"n <= {count_n}"))
    return out


def constructions(trials: int = 50, seed: int = 0) -> List[SuiteResult]:
    rng = RngStream(seed, (13,))
    out = []
    params = {"spec2": (2, 9), "fpersis": (3, 8), "lemma_z": (3, 7)}
    for name in C.CONSTRUCTION_NAMES:
        k, n = params.get(name, (2, 8))
        try:
            for _ in range(trials):
                C.build(name, k=k, n=n, rng=rng, address=C.random_address(rng))
            out.append(SuiteResult(f"construction {name}", True, f"{trials} builds"))
        except C.VerificationError as exc:
            out.append(SuiteResult(f"construction {name}", False, str(exc)))
    return out


SUITES: Dict[str, Callable[..., List[SuiteResult]]] = {
    "rn": rn_methods,
    "oracles": oracles,
    "asymptotics": asymptotics,
    "algebra": algebra,
    "spheres": spheres,
    "classifier": classifier,
    "constructions": constructions,
}
