"""Verification suites, one per acceptance criterion.

Each suite returns a :class:`CheckResult`; the CLI ``verify`` command and the
acceptance tests both call these.
"""

from __future__ import annotations

import os
import random
import subprocess
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product

from .autgroup import SignedScaledPermutation, check_conditions, decompose, preserves_ideal
from .chowalgebra import ChowElement, ambient_hilbert, hilbert_series_coefficients, mask_of
from .exactpoly import substitute_chow
from .invariants import (
    WITNESS_N3,
    closed_form_power,
    distinguish,
    hyperplane_power_test,
    no_square_zero_certificate_plus_n3,
    power_in_B,
    random_generic_form,
    random_point_on_hyperplane,
    square_in_quotient,
    unit_vector,
)
from .linalg import determinant
from .presentation import (
    build_quotient,
    is_palindromic,
    poincare_polynomial,
    relation_oracle,
    relation_R,
    relation_S,
)
from .stability import (
    Stability,
    canonical,
    forbidden,
    is_coprime,
    is_deformation,
    is_nontrivial,
    theta_pm,
)

WORKERS_ENV = "CHOWCFG_WORKERS"

# frozen after the first oracle run (rank computation over Q)
GOLDEN_POINCARE = {
    ("canonical", 5): [1, 5, 1],
    ("theta-plus", 4): [1, 1],
    ("theta-minus", 4): [1, 1],
    ("theta-plus", 6): [1, 6, 6, 1],
    ("theta-minus", 6): [1, 6, 6, 1],
}

AUT_DILATIONS = (Fraction(1), Fraction(2), Fraction(-1, 3), Fraction(5, 7))


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name} ({self.seconds:.2f}s)"

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail, "failures": self.failures[:20]}


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _lemma_rs_for_m(m: int) -> tuple[int, list, dict]:
    failures = []
    timings = {}
    for size in range(m + 1):
        for I in combinations(range(1, m + 1), size):
            t0 = time.perf_counter()
            rho, half_rho = relation_oracle(I, m)
            if substitute_chow(relation_R(I, m)) != rho:
                failures.append({"m": m, "I": list(I), "which": "R"})
            if substitute_chow(relation_S(I, m)) != half_rho:
                failures.append({"m": m, "I": list(I), "which": "S"})
            timings[",".join(map(str, I))] = time.perf_counter() - t0
    return m, failures, timings


@_timed
def check_lemma_rs(ms=range(3, 8)) -> CheckResult:
    """R_I and S_I agree with the divided-difference symmetrizations of f^I."""
    ms = list(ms)
    workers = _workers()
    if workers > 1 and len(ms) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = sorted(pool.map(_lemma_rs_for_m, ms))
    else:
        results = [_lemma_rs_for_m(m) for m in ms]
    failures = [f for _, fs, _ in results for f in fs]
    checked = sum(2 ** m for m in ms)
    timings = {m: t for m, _, t in results}
    return CheckResult(
        "lemma-rs", not failures, {"m": ms, "subsets_checked": checked, "timings": timings}, failures
    )


@_timed
def check_recursions(ms=range(3, 8)) -> CheckResult:
    failures = []
    count = 0
    for m in ms:
        Y = ChowElement.Y(m)
        for size in range(1, m + 1):
            for I in combinations(range(1, m + 1), size):
                R, S = relation_R(I, m), relation_S(I, m)
                for i in I:
                    rest = [j for j in I if j != i]
                    Xi = ChowElement.X(m, i)
                    Rr, Sr = relation_R(rest, m), relation_S(rest, m)
                    count += 1
                    if R != Xi * Rr + Sr or S != Xi * Sr + Y * Rr:
                        failures.append({"m": m, "I": list(I), "i": i})
    return CheckResult("recursions", not failures, {"m": list(ms), "instances": count}, failures)


def _closed_form_family(m: int, sign: int) -> set[int]:
    n = m // 2
    fam = {mask_of(I) for size in range(n + 1, m + 1) for I in combinations(range(1, m + 1), size)}
    for I in combinations(range(1, m + 1), n):
        if sign > 0 and 1 in I or sign < 0 and 1 not in I:
            fam.add(mask_of(I))
    return fam


@_timed
def check_stability(ns=range(2, 6)) -> CheckResult:
    failures = []
    for n in ns:
        m = 2 * n
        th0 = canonical(m)
        if set(forbidden(th0).all) != _closed_form_family(m, 0):
            failures.append({"n": n, "which": "theta0 family"})
        for sign in (1, -1):
            th = theta_pm(n, sign)
            name = "theta+" if sign > 0 else "theta-"
            if set(forbidden(th).all) != _closed_form_family(m, sign):
                failures.append({"n": n, "which": f"{name} family"})
            if not is_deformation(th0, th):
                failures.append({"n": n, "which": f"{name} not a deformation"})
            if not is_coprime(th):
                failures.append({"n": n, "which": f"{name} not coprime"})
            if not is_nontrivial(th):
                failures.append({"n": n, "which": f"{name} trivial"})
    for m in range(3, 11):
        if is_coprime(canonical(m)) != (m % 2 == 1):
            failures.append({"m": m, "which": "theta0 coprimality parity"})
    return CheckResult("stability", not failures, {"n": list(ns), "m_parity": [3, 10]}, failures)


@_timed
def check_hilbert(ms=range(3, 9), D: int = 12) -> CheckResult:
    failures = []
    for m in ms:
        got, want = ambient_hilbert(m, D), hilbert_series_coefficients(m, D)
        if got != want:
            failures.append({"m": m, "got": got, "want": want})
    return CheckResult("hilbert", not failures, {"m": list(ms), "D": D}, failures)


@_timed
def check_quotient() -> CheckResult:
    failures = []
    table = {}
    cases = [("canonical", 5, canonical(5))]
    for n in (2, 3):
        cases.append(("theta-plus", 2 * n, theta_pm(n, 1)))
        cases.append(("theta-minus", 2 * n, theta_pm(n, -1)))
    for name, m, th in cases:
        Q = build_quotient(th, m)
        dims = Q.dimensions()
        pp = poincare_polynomial(Q)
        table[f"{name}/m={m}"] = pp
        if pp[:1] != [1] or not is_palindromic(pp) or any(dims[m - 2:]):
            failures.append({"case": f"{name}/m={m}", "dims": dims})
        if pp != GOLDEN_POINCARE[(name, m)]:
            failures.append({"case": f"{name}/m={m}", "golden": GOLDEN_POINCARE[(name, m)], "got": pp})
    for m in (4, 6):
        if table[f"theta-plus/m={m}"] != table[f"theta-minus/m={m}"]:
            failures.append({"case": f"plus/minus differ at m={m}"})
    return CheckResult("quotient", not failures, {"poincare": table}, failures)


def random_nontrivial_stability(m: int, rng: random.Random, coprime: bool = True) -> Stability:
    while True:
        w = [rng.randint(1, 12) for _ in range(m)]
        th = Stability(tuple(Fraction(2 * x, sum(w)) for x in w))
        if is_nontrivial(th) and (not coprime or is_coprime(th)):
            return th


def minimality_stabilities(seed: int = 0) -> list[tuple[str, Stability]]:
    rng = random.Random(seed)
    out = [(f"canonical/m={m}", canonical(m)) for m in range(3, 7)]
    for n in (2, 3):
        out.append((f"theta+/n={n}", theta_pm(n, 1)))
        out.append((f"theta-/n={n}", theta_pm(n, -1)))
    for m in (4, 5, 6):
        for r in range(2):
            out.append((f"random/m={m}#{r}", random_nontrivial_stability(m, rng)))
    return out


@_timed
def check_minimality(seed: int = 0) -> CheckResult:
    failures = []
    names = []
    for name, th in minimality_stabilities(seed):
        m = th.m
        Qmin = build_quotient(th, m, which="minimal")
        Qall = build_quotient(th, m, which="all")
        names.append(name)
        for d in range(m + 1):
            if Qmin.component(d).ideal != Qall.component(d).ideal:
                failures.append({"case": name, "degree": d, "weights": [str(w) for w in th.weights]})
    return CheckResult("minimality", not failures, {"cases": names, "seed": seed}, failures)


@_timed
def check_nonisom() -> CheckResult:
    failures = []
    minus = build_quotient(theta_pm(3, -1), 2)
    sq = square_in_quotient(minus, WITNESS_N3)
    if sq:
        failures.append({"which": "witness square nonzero in A-", "square": str(sq)})
    cert = no_square_zero_certificate_plus_n3()
    open_cases = [c for c in cert["cases"] if c["status"] != "closed"]
    if len(cert["cases"]) != 33 or open_cases:
        failures.append({"which": "certificate", "cases": len(cert["cases"]), "open": open_cases})
    verdict = distinguish(3)["verdict"]
    if verdict != "rings distinguished":
        failures.append({"which": "distinguish(3)", "verdict": verdict})
    return CheckResult(
        "non-isom", not failures, {"certificate_cases": len(cert["cases"]), "verdict": verdict}, failures
    )


@_timed
def check_b_ring(ns=(3, 4), samples: int = 100, seed: int = 0) -> CheckResult:
    failures = []
    table = {}
    rng = random.Random(seed)
    for n in ns:
        m = 2 * n
        plus, minus = theta_pm(n, 1), theta_pm(n, -1)
        e1 = unit_vector(m, 1)
        tm = hyperplane_power_test(minus, e1, n - 1)
        tp = hyperplane_power_test(plus, e1, n - 1)
        table[f"n={n}"] = {"minus": tm, "plus": tp}
        if tm is not True or tp is not False:
            failures.append({"n": n, "table": table[f"n={n}"]})
        for _ in range(samples):
            a = random_point_on_hyperplane(e1, rng)
            if power_in_B(minus, a, n - 1):
                failures.append({"n": n, "which": "B- membership", "a": [str(x) for x in a]})
        for _ in range(samples):
            a = random_generic_form(m, rng)
            p = power_in_B(plus, a, n - 1)
            if not p:
                failures.append({"n": n, "which": "B+ genericity", "a": [str(x) for x in a]})
            if p != closed_form_power(1, a):
                failures.append({"n": n, "which": "B+ closed form", "a": [str(x) for x in a]})
    return CheckResult("b-ring", not failures, {"table": table, "samples": samples, "seed": seed}, failures)


def random_dense_matrix(m: int, rng: random.Random) -> list[list[Fraction]]:
    while True:
        A = [[Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(m)] for _ in range(m)]
        if all(all(row) for row in A) and determinant(A) != 0:
            return A


@_timed
def check_aut(ms=(3, 4), random_count: int = 200, seed: int = 0) -> CheckResult:
    failures = []
    accepted = 0
    rejected = 0
    rng = random.Random(seed)
    for m in ms:
        for d in AUT_DILATIONS:
            for sigma in permutations(range(1, m + 1)):
                for signs in product((1, -1), repeat=m):
                    g = SignedScaledPermutation(d, sigma, signs)
                    A = g.matrix()
                    ok, direct = check_conditions(A), preserves_ideal(A)
                    if not ok or not direct:
                        failures.append({"m": m, "g": g.to_json(), "conditions": ok, "direct": direct})
                        continue
                    h = decompose(A)
                    if h is None or h.matrix() != A or h.d <= 0:
                        failures.append({"m": m, "g": g.to_json(), "which": "round trip"})
                        continue
                    accepted += 1
        for _ in range(random_count):
            A = random_dense_matrix(m, rng)
            ok, direct = check_conditions(A), preserves_ideal(A)
            if ok or direct or decompose(A) is not None:
                failures.append({"m": m, "matrix": [[str(c) for c in r] for r in A]})
            else:
                rejected += 1
    detail = {"accepted": accepted, "rejected": rejected, "seed": seed, "dilations": [str(d) for d in AUT_DILATIONS]}
    return CheckResult("aut", not failures, detail, failures)


@_timed
def check_determinism(runs: int = 2) -> CheckResult:
    cmd = [sys.executable, "-m", "chowcfg", "distinguish", "--n", "3", "--seed", "7", "--output", "json"]
    outputs = [subprocess.run(cmd, capture_output=True, check=False) for _ in range(runs)]
    failures = []
    if any(o.returncode != 0 for o in outputs):
        failures.append({"which": "nonzero exit", "stderr": outputs[0].stderr.decode()[-500:]})
    if len({o.stdout for o in outputs}) != 1:
        failures.append({"which": "outputs differ"})
    return CheckResult("determinism", not failures, {"runs": runs, "bytes": len(outputs[0].stdout)}, failures)


SUITES = {
    "lemma-rs": check_lemma_rs,
    "recursions": check_recursions,
    "stability": check_stability,
    "hilbert": check_hilbert,
    "quotient": check_quotient,
    "minimality": check_minimality,
    "non-isom": check_nonisom,
    "b-ring": check_b_ring,
    "aut": check_aut,
    "determinism": check_determinism,
}
