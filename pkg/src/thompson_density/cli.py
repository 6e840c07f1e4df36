"""thompson-density: tables, verification, sampling, constructions and estimates."""

import argparse
import csv
import json
import os
import sys
from typing import List, Optional

import mpmath

from . import __version__
from . import constructions as C
from .density import (BOUND_NAMES, ClassLabel, LambdaBound, classify_elements, construction_ratio,
                      estimate_density, mass_over_upper_bound, theoretical_bounds)
from .element import Element
from .enumeration import rn_table_rows
from .sampling import RngStream, StratumSpec, random_element, random_tree, random_tuple
from .spheres import sphere_size
from .suites import SUITES
from .trees import TreeParseError

SEED_ENV = "THOMPSON_DENSITY_SEED"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _count(text: str) -> int:
    """Integers written plainly or as 1e6."""
    try:
        value = float(text) if any(ch in text for ch in "eE.") else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a count: {text!r}") from None
    if value != int(value) or value < 0:
        raise argparse.ArgumentTypeError(f"not a nonnegative integer: {text!r}")
    return int(value)


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from None


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _print_json(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_table(args) -> int:
    rows = rn_table_rows(args.max_n)
    header = ["n", "c_n", "c_n^2", "r_n", "ratio", "n^3r_n/mu^n"]
    if args.format == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(header)
        for n, c, c2, r, ratio, scaled in rows:
            w.writerow([n, c, c2, r, "" if ratio is None else mpmath.nstr(ratio, 15),
                        mpmath.nstr(scaled, 15)])
    else:
        _print_json([dict(zip(header, [n, c, c2, r, None if ratio is None else float(ratio), float(scaled)]))
                     for n, c, c2, r, ratio, scaled in rows])
    return EXIT_OK


def cmd_verify(args) -> int:
    chosen = [name for name in SUITES if args.all or getattr(args, name)]
    if not chosen:
        raise UsageError("pick at least one suite or --all")
    failed = False
    for name in chosen:
        kwargs = {}
        if args.max_n is not None and name in ("rn", "asymptotics"):
            kwargs["max_n"] = args.max_n
        if name in ("algebra", "classifier", "constructions"):
            kwargs["seed"] = args.seed
        for res in SUITES[name](**kwargs):
            print(res.line())
            failed |= not res.ok
    return EXIT_FAIL if failed else EXIT_OK


def cmd_sphere(args) -> int:
    size = sphere_size(args.kind, args.k, args.n)
    if args.exact:
        print(size)
    else:
        _print_json({"kind": args.kind, "k": args.k, "n": args.n, "size": str(size),
                     "log10": float(mpmath.log10(size)) if size else None})
    return EXIT_OK


def cmd_sample(args) -> int:
    rng = RngStream(args.seed)
    for _ in range(args.samples):
        if args.what == "tree":
            print(random_tree(args.n, rng).code)
        elif args.what == "pair":
            print(random_element(args.n, rng).encode())
        else:
            print(random_tuple(StratumSpec(args.k, args.n, args.stratum), rng).encode())
    return EXIT_OK


def cmd_construct(args) -> int:
    gt = C.build(args.name, k=args.k, n=args.n, rng=RngStream(args.seed), address=args.address)
    _print_json(gt.report())
    return EXIT_OK


def cmd_classify(args) -> int:
    lines = args.tuples or [line for line in sys.stdin.read().splitlines() if line.strip()]
    for line in lines:
        fs = [Element.decode(tok) for tok in line.replace(",", " ").split()]
        print(classify_elements(fs).value)
    return EXIT_OK


def cmd_estimate(args) -> int:
    ns = args.trend or [args.n]
    if ns[0] is None:
        raise UsageError("estimate needs --n or --trend")
    rng = RngStream(args.seed)
    results = []
    for n in ns:
        spec = StratumSpec(args.k, n, args.stratum)
        est = estimate_density(spec, args.label, args.samples, rng, method=args.method,
                               threads=args.threads, progress=True)
        results.append(est)
    if args.trend:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["n", "estimate", "ci_low", "ci_high", "samples", "exact"])
        for est in results:
            w.writerow([est.stratum.n, repr(est.estimate), repr(est.ci[0]), repr(est.ci[1]),
                        est.samples, est.exact])
    else:
        _print_json(results[0].to_dict())
    return EXIT_OK


def cmd_bounds(args) -> int:
    params = {}
    if args.name == "sum_visible":
        params["s"] = args.s
    if args.name == "spec2":
        params.update(n1=args.n1, n2=args.n2)
    bound = theoretical_bounds(args.name, k=args.k, **params)
    text = str(bound) if isinstance(bound, LambdaBound) else mpmath.nstr(bound, 15)
    out = {"name": args.name, "k": args.k, "bound": text}
    if args.n is not None and args.name in ("lemma_z", "fpersis", "sum_visible", "spec2"):
        out["n"] = args.n
        out["mass_over_sphere"] = mpmath.nstr(construction_ratio(args.name, args.k, args.n, **params), 15)
        if args.name != "sum_visible":
            out["mass_over_upper_bound"] = mpmath.nstr(
                mass_over_upper_bound(args.name, args.k, args.n, **params), 15)
    _print_json(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thompson-density", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--seed", type=int, default=None, help=f"RNG seed (default: ${SEED_ENV} or 0)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    # the same flags after the subcommand; SUPPRESS keeps the top-level value otherwise
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", parents=[common], help="c_n, c_n^2, r_n and asymptotic columns")
    t.add_argument("--rn", action="store_true", help="the r_n table (the only table)")
    t.add_argument("--max-n", type=int, default=20)
    t.add_argument("--format", choices=["csv", "json"], default="csv")
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", parents=[common], help="run property suites")
    for name in SUITES:
        v.add_argument(f"--{name}", action="store_true")
    v.add_argument("--all", action="store_true")
    v.add_argument("--max-n", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sphere", parents=[common], help="exact sphere size")
    s.add_argument("--kind", choices=["sum", "max"], required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--exact", action="store_true", help="print the bare integer")
    s.set_defaults(func=cmd_sphere)

    sm = sub.add_parser("sample", parents=[common], help="uniform trees, pairs or sphere tuples")
    sm.add_argument("--what", choices=["tuple", "tree", "pair"], default="tuple")
    sm.add_argument("--stratum", choices=["sum", "max"], default="max")
    sm.add_argument("--k", type=int, default=2)
    sm.add_argument("--n", type=int, required=True)
    sm.add_argument("--samples", type=_count, default=10)
    sm.set_defaults(func=cmd_sample)

    c = sub.add_parser("construct", parents=[common], help="build and verify a named construction")
    c.add_argument("name", choices=C.CONSTRUCTION_NAMES)
    c.add_argument("--k", type=int, default=2)
    c.add_argument("--n", type=int, default=8)
    c.add_argument("--address", default="1")
    c.set_defaults(func=cmd_construct)

    cl = sub.add_parser("classify", parents=[common], help="label tuples of tree-pair encodings")
    cl.add_argument("tuples", nargs="*", help="space-separated encodings per tuple; stdin if absent")
    cl.set_defaults(func=cmd_classify)

    e = sub.add_parser("estimate", parents=[common], help="density of a label on a sphere")
    e.add_argument("--stratum", choices=["sum", "max"], default="max")
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--n", type=int)
    e.add_argument("--trend", type=_int_list, help="comma-separated n values; CSV output")
    e.add_argument("--label", choices=[lab.value for lab in ClassLabel], default="CYCLIC_Z")
    e.add_argument("--samples", type=_count, default=100_000)
    e.add_argument("--method", choices=["stratified", "plain"], default="stratified")
    e.set_defaults(func=cmd_estimate)

    b = sub.add_parser("bounds", parents=[common], help="lower-bound expressions and construction masses")
    b.add_argument("--name", choices=BOUND_NAMES, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--n", type=int)
    b.add_argument("--s", type=int, default=1)
    b.add_argument("--n1", type=int, default=2)
    b.add_argument("--n2", type=int, default=3)
    b.set_defaults(func=cmd_bounds)
    return p


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        flags = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
        print(f"thompson-density {__version__} seed={args.seed} flags={flags}", file=sys.stderr)
        return args.func(args)
    except (UsageError, ValueError, TreeParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except C.VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
