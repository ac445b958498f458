"""Command-line entry point.

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
Rationals cross the boundary as "p/q" strings only.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import autgroup, invariants, presentation, stability
from .exactpoly import format_rational, parse_rational, substitute_chow
from .invariants import SCHEMA
from .verify import SUITES

MAX_M = stability.MAX_M
# quotient sizes grow like 2^m; n = 6 already takes far longer than a desk run
DISTINGUISH_MAX_N = 5


class UsageError(Exception):
    pass


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def resolve_theta(text: str, m: int | None, epsilon=None) -> stability.Stability:
    """Preset name, path to a Stability JSON file, or inline comma-separated weights."""
    if text in stability.PRESETS:
        if m is None:
            raise UsageError(f"preset {text!r} needs --m")
        return stability.preset(text, m, epsilon)
    path = Path(text)
    if path.is_file():
        theta = stability.Stability.load(path)
    elif "," in text:
        theta = stability.Stability(tuple(parse_rational(w) for w in text.split(",")))
    else:
        raise UsageError(f"unknown preset or missing file: {text!r}")
    if m is not None and theta.m != m:
        raise UsageError(f"--m {m} does not match {theta.m} weights")
    return theta


def _check_m(m: int | None):
    if m is not None and not 3 <= m <= MAX_M:
        raise UsageError(f"--m must lie in 3..{MAX_M}")


def _rational_arg(text: str):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# -- commands -------------------------------------------------------------------


def cmd_stability(args) -> int:
    _check_m(args.m)
    theta = resolve_theta(args.theta, args.m, args.epsilon)
    fam = stability.forbidden(theta)
    report = {
        "schema": SCHEMA,
        "theta": theta.to_json(),
        "nontrivial": stability.is_nontrivial(theta),
        "coprime": stability.is_coprime(theta),
        "forbidden": [list(I) for I in fam.subsets("all")],
        "minimal_forbidden": [list(I) for I in fam.subsets("minimal")],
    }
    if args.deformation_of:
        base = resolve_theta(args.deformation_of, theta.m, args.epsilon)
        report["deformation_of"] = {"theta": base.to_json(), "is_deformation": stability.is_deformation(base, theta)}
    if args.output == "json":
        sys.stdout.write(_dump_json(report))
    elif args.output == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["subset", "minimal"])
        minimal = {tuple(I) for I in report["minimal_forbidden"]}
        for I in report["forbidden"]:
            w.writerow([" ".join(map(str, I)), int(tuple(I) in minimal)])
    else:
        print("weights:", ", ".join(report["theta"]["weights"]))
        print("nontrivial:", report["nontrivial"])
        print("coprime:", report["coprime"])
        print(f"forbidden subsets: {len(report['forbidden'])} ({len(report['minimal_forbidden'])} minimal)")
        for I in report["minimal_forbidden"]:
            print("  min", "{" + ",".join(map(str, I)) + "}")
        if "deformation_of" in report:
            print("deformation of given base:", report["deformation_of"]["is_deformation"])
    return 0


def cmd_relations(args) -> int:
    _check_m(args.m)
    pair = presentation.RelationPair.of(args.subset, args.m)
    rho, half_rho = presentation.relation_oracle(pair.I, args.m)
    ok = substitute_chow(pair.R) == rho and substitute_chow(pair.S) == half_rho
    report = {"schema": SCHEMA, "m": args.m, **pair.to_json(), "oracle_agrees": ok}
    if args.output == "json":
        sys.stdout.write(_dump_json(report))
    else:
        print(f"I = {{{','.join(map(str, pair.I))}}}")
        print(f"R_I = {pair.R}")
        print(f"S_I = {pair.S}")
        print("oracle agrees:", ok)
    return 0 if ok else 1


def cmd_betti(args) -> int:
    _check_m(args.m)
    theta = resolve_theta(args.theta, args.m, args.epsilon)
    if args.max_degree < 0:
        raise UsageError("--max-degree must be nonnegative")
    Q = presentation.build_quotient(theta, args.max_degree)
    dims = Q.dimensions()
    if args.output == "json":
        report = {
            "schema": SCHEMA,
            "theta": theta.to_json(),
            "max_degree": args.max_degree,
            "generators": [p.to_json() for p in Q.relations],
            "dimensions": [{"degree": d, "dimension": v} for d, v in enumerate(dims)],
            "poincare": presentation.poincare_polynomial(Q),
        }
        sys.stdout.write(_dump_json(report))
    elif args.output == "csv":
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["degree", "dimension"])
        for d, v in enumerate(dims):
            w.writerow([d, v])
    else:
        print(f"m={theta.m} weights=({', '.join(theta.to_json()['weights'])})")
        print(f"{len(Q.relations)} minimal forbidden subsets")
        for d, v in enumerate(dims):
            print(f"  degree {d}: {v}")
    return 0


def cmd_verify(args) -> int:
    fn = SUITES[args.target]
    kwargs = {}
    if args.m is not None:
        if args.target not in ("lemma-rs", "recursions", "hilbert"):
            raise UsageError(f"--m is not accepted by verify {args.target}")
        _check_m(args.m)
        kwargs["ms"] = [args.m]
    if args.seed is not None and args.target in ("minimality", "b-ring", "aut"):
        kwargs["seed"] = args.seed
    result = fn(**kwargs)
    if args.output == "json":
        sys.stdout.write(_dump_json({"schema": SCHEMA, **result.to_json()}))
    else:
        if args.target == "lemma-rs":
            for m, timings in result.detail["timings"].items():
                for I, t in timings.items():
                    print(f"m={m} I={{{I}}} {t * 1000:.2f} ms")
            if result.ok:
                print("all oracle identities hold")
        for f in result.failures[:20]:
            print("failure:", f)
        print(result.line())
    return 0 if result.ok else 1


def _parse_witness(text: str):
    try:
        return [parse_rational(c) for c in text.split(",")]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_nilpotent(args) -> int:
    a = _parse_witness(args.witness)
    m = len(a)
    _check_m(m)
    theta = resolve_theta(args.theta, m, args.epsilon)
    Q = presentation.build_quotient(theta, 2)
    sq = invariants.square_in_quotient(Q, a)
    report = {
        "schema": SCHEMA,
        "theta": theta.to_json(),
        "witness": [format_rational(c) for c in a],
        "square": sq.to_json(),
        "square_is_zero": not sq,
    }
    if args.output == "json":
        sys.stdout.write(_dump_json(report))
    else:
        print(f"a^2 = {sq}")
        print("square is zero:", not sq)
    return 0


def cmd_distinguish(args) -> int:
    if not 2 <= args.n <= DISTINGUISH_MAX_N:
        raise UsageError(f"--n must lie in 2..{DISTINGUISH_MAX_N}")
    report = invariants.distinguish(args.n, args.seed, args.epsilon, args.samples)
    if args.output == "json":
        sys.stdout.write(_dump_json(report))
        return 0
    print(f"n={report['n']} m={report['m']} seed={report['seed']}")
    pc = report["poincare"]
    print(f"Poincare A+: {pc['plus']}  A-: {pc['minus']}  equal: {pc['equal']}")
    sz = report["square_zero"]
    if sz is not None:
        w = ",".join(map(str, sz["witness"]))
        print(f"witness ({w}): square zero in A-: {sz['witness_square_zero_in_minus']}, "
              f"in A+: {sz['witness_square_zero_in_plus']}")
        cert = sz["certificate_plus"]
        closed = sum(c["status"] == "closed" for c in cert["cases"])
        print(f"A+ certificate: {closed}/{len(cert['cases'])} cases closed; {cert['verdict']}")
    br = report["b_ring"]
    if br is not None:
        print(f"B-ring degree {br['degree']} ({br['method']}): "
              f"e1-hyperplane vanishes in B-: {br['minus_e1_hyperplane_vanishes']}; "
              f"coordinate hyperplanes vanishing in B+: {br['plus_coordinate_hyperplanes_vanishing'] or 'none'}")
    print("verdict:", report["verdict"])
    return 0


def cmd_aut(args) -> int:
    A = autgroup.load_matrix(args.matrix)
    if len(A) <= 2:
        raise UsageError("classification requires m > 2")
    g = autgroup.decompose(A)
    report = {
        "schema": SCHEMA,
        "m": len(A),
        "automorphism": g is not None,
        "verdict": "automorphism" if g is not None else "not an automorphism",
        "factorization": g.to_json() if g is not None else None,
    }
    if args.output == "json":
        sys.stdout.write(_dump_json(report))
    else:
        print(report["verdict"])
        if g is not None:
            print(f"d = {g.d}, sigma = {list(g.sigma)}, signs = {list(g.signs)}")
    return 0


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chowcfg", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def out(sp, choices=("json", "csv", "text"), default="text"):
        sp.add_argument("--output", choices=choices, default=default)

    s = sub.add_parser("stability", help="forbidden subsets and genericity of a stability")
    s.add_argument("--m", type=int)
    s.add_argument("--theta", required=True, help="preset, JSON file, or inline p/q weights")
    s.add_argument("--epsilon", type=_rational_arg)
    s.add_argument("--deformation-of", help="check deformation of this base stability")
    out(s)
    s.set_defaults(func=cmd_stability)

    s = sub.add_parser("relations", help="R_I, S_I and their torus-side cross-check")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--subset", type=int, nargs="*", default=[])
    out(s, ("json", "text"))
    s.set_defaults(func=cmd_relations)

    s = sub.add_parser("betti", help="graded dimensions of the quotient ring")
    s.add_argument("--m", type=int)
    s.add_argument("--theta", required=True)
    s.add_argument("--epsilon", type=_rational_arg)
    s.add_argument("--max-degree", type=int, required=True)
    out(s)
    s.set_defaults(func=cmd_betti)

    s = sub.add_parser("verify", help="run one verification suite")
    s.add_argument("target", choices=sorted(SUITES))
    s.add_argument("--m", type=int)
    s.add_argument("--seed", type=int)
    out(s, ("json", "text"))
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("nilpotent", help="square of a linear form in a quotient")
    s.add_argument("--theta", required=True)
    s.add_argument("--epsilon", type=_rational_arg)
    s.add_argument("--witness", required=True, help="a1,...,am as p/q literals")
    out(s, ("json", "text"))
    s.set_defaults(func=cmd_nilpotent)

    s = sub.add_parser("distinguish", help="compare the theta+ and theta- rings for m = 2n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--epsilon", type=_rational_arg)
    s.add_argument("--samples", type=int, default=100)
    out(s, ("json", "text"))
    s.set_defaults(func=cmd_distinguish)

    s = sub.add_parser("aut", help="automorphisms of the ambient ring")
    aut_sub = s.add_subparsers(dest="aut_command", required=True)
    c = aut_sub.add_parser("check", help="test a matrix X_j -> sum_i a_ij X_i")
    c.add_argument("--matrix", required=True, help="JSON file with an m x m matrix of p/q strings")
    out(c, ("json", "text"))
    c.set_defaults(func=cmd_aut)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError, KeyError) as exc:
        print(f"chowcfg: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
