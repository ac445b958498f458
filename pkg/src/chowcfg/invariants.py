"""Ring invariants separating the Chow rings of the theta^+ and theta^- quotients.

Two invariants are used:

* square-zero linear forms: a = sum a_i X_i with a^2 = 0 in A^theta
  (decisive for n = 3);
* powers in B^theta = A^theta/(Y): the locus Z = {a : a^(n-1) = 0} in B_1,
  probed by restricting a to hyperplanes {lambda . a = 0}.
"""

from __future__ import annotations

import logging
import random
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import factorial
from typing import Sequence

from .chowalgebra import ChowElement, mask_of, members
from .exactpoly import Poly
from .linalg import nullspace
from .presentation import QuotientRing, build_quotient, poincare_polynomial
from .stability import Stability, forbidden, theta_pm

log = logging.getLogger(__name__)

SCHEMA = "chowcfg/1"
SYMBOLIC_MAX_N = 4
WITNESS_N3 = (0, 1, 1, 1, 1, 0)


class GuardError(ValueError):
    """Requested computation exceeds the symbolic cost guard."""


def linear_form(coeffs: Sequence) -> list[Fraction]:
    return [Fraction(c) for c in coeffs]


@lru_cache(maxsize=None)
def _quotient(theta: Stability, max_degree: int, kill_y: bool) -> QuotientRing:
    return build_quotient(theta, max_degree, kill_y=kill_y)


def b_quotient(theta: Stability, max_degree: int) -> QuotientRing:
    """B^theta = A^theta/(Y), cached per (theta, degree)."""
    return _quotient(theta, max_degree, True)


def square_in_quotient(Q: QuotientRing, a: Sequence) -> ChowElement:
    x = ChowElement.linear(linear_form(a))
    if x.m != Q.m:
        raise ValueError(f"linear form has {x.m} coefficients, ring has m={Q.m}")
    return Q.normal_form(x * x)


# -- the n = 3 certificate ---------------------------------------------------


def _symbolic_square_coordinates(Q: QuotientRing, basis: list[ChowElement]) -> list[Poly]:
    """Coordinates of (sum a_i X_i)^2 in ``basis`` as quadratic forms in a_1..a_m."""
    m = Q.m
    coords = Q.coordinate_map(basis)
    a = [Poly.var(m, i) for i in range(m)]
    out = [Poly.zero(m) for _ in basis]
    for i in range(m):
        for j in range(i, m):
            mono = ChowElement.X(m, i + 1) * ChowElement.X(m, j + 1)
            weight = a[i] * a[j] * (1 if i == j else 2)
            for b, c in enumerate(coords(mono)):
                if c:
                    out[b] = out[b] + weight * c
    return out


def _restrict(p: Poly, zero_vars: set[int]) -> Poly:
    return Poly(p.nvars, {e: c for e, c in p.terms.items() if not any(e[v] for v in zero_vars)})


def _divide_by_var(p: Poly, v: int) -> Poly | None:
    if any(e[v] == 0 for e in p.terms):
        return None
    return Poly(p.nvars, {e[:v] + (e[v] - 1,) + e[v + 1:]: c for e, c in p.terms.items()})


def _linear_row(p: Poly, variables: list[int]) -> list[Fraction] | None:
    row = [Fraction(0)] * len(variables)
    pos = {v: r for r, v in enumerate(variables)}
    for e, c in p.terms.items():
        if sum(e) != 1:
            return None
        v = e.index(1)
        if v not in pos:
            return None
        row[pos[v]] += c
    return row


def no_square_zero_certificate_plus_n3(epsilon=None) -> dict:
    """Machine-checked case analysis: A^+ (n = 3) has no nonzero a with a^2 = 0, deg a = 1.

    The square of a = sum a_i X_i is expressed in the basis Y, X_1 X_2..X_1 X_6
    of the degree-2 component.  For each support I of (a_2..a_6) the X_1 X_i
    coordinates (i in I) are divided by a_i, leaving linear conditions; their
    solution line is substituted into the Y coordinate, which must then force
    a = 0.
    """
    m = 6
    theta = theta_pm(3, 1, epsilon)
    Q = _quotient(theta, 2, False)
    basis = [ChowElement.Y(m)] + [ChowElement.X(m, 1) * ChowElement.X(m, i) for i in range(2, m + 1)]
    cases = []
    try:
        conds = _symbolic_square_coordinates(Q, basis)
    except ValueError as exc:
        cases.append({"kind": "basis", "support": None, "status": "open", "reason": str(exc)})
        return {"schema": SCHEMA, "cases": cases, "verdict": "certificate incomplete"}
    names = [f"a{i}" for i in range(1, m + 1)]
    cases.append({
        "kind": "basis",
        "support": None,
        "status": "closed",
        "reason": "Y, X1*X2..X1*X6 form a basis of the degree-2 component; a^2 has coordinates "
        + "; ".join(f"[{str(b)}]: {c.to_str(names)}" for b, c in zip(basis, conds)),
    })
    ycond, xconds = conds[0], conds[1:]
    others = range(2, m + 1)
    for size in range(0, 6):
        for I in combinations(others, size):
            zero_vars = {j - 1 for j in others if j not in I}
            yr = _restrict(ycond, zero_vars)
            case = {"kind": "support", "support": list(I), "status": "open", "reason": ""}
            if not I:
                a1sq = yr.terms.get((2,) + (0,) * (m - 1), Fraction(0))
                if a1sq and len(yr.terms) == 1:
                    case["status"] = "closed"
                    case["reason"] = f"Y coordinate is {yr.to_str(names)}; forces a1 = 0, so a = 0"
                else:
                    case["reason"] = f"Y coordinate {yr.to_str(names)} does not force a1 = 0"
                cases.append(case)
                continue
            unknowns = [0] + [i - 1 for i in I]
            rows = []
            ok = True
            for i in I:
                pi = _restrict(xconds[i - 2], zero_vars)
                li = _divide_by_var(pi, i - 1)
                row = _linear_row(li, unknowns) if li is not None else None
                if row is None:
                    ok = False
                    case["reason"] = f"X1*X{i} coordinate {pi.to_str(names)} is not a{i} times a linear form"
                    break
                rows.append(row)
            if not ok:
                cases.append(case)
                continue
            null = nullspace(rows, len(unknowns))
            if not null:
                case["status"] = "closed"
                case["reason"] = "linear conditions force a = 0 on the support"
            elif len(null) == 1:
                v = null[0]
                if any(v[r] == 0 for r in range(1, len(unknowns))):
                    case["status"] = "closed"
                    case["reason"] = "linear conditions force some a_i = 0 with i in the support"
                else:
                    # rescale so the support coordinates read c
                    v = [c / v[1] for c in v]
                    point = [Fraction(0)] * m
                    for r, u in enumerate(unknowns):
                        point[u] = v[r]
                    # yr is a quadratic form, so yr(c * v) = yr(v) * c^2
                    q = yr.evaluate(point)
                    line = ", ".join(f"a{u + 1} = {point[u]}*c" for u in unknowns)
                    desc = f"k={len(I)}: conditions give {line}"
                    if q != 0:
                        case["status"] = "closed"
                        case["reason"] = f"{desc}; Y coordinate becomes {q}*c^2, so c = 0: contradiction"
                    else:
                        case["reason"] = f"{desc}; Y coordinate vanishes identically"
            else:
                case["reason"] = f"solution space of dimension {len(null)}"
            cases.append(case)
    closed = all(c["status"] == "closed" for c in cases)
    verdict = (
        "no nonzero 2-nilpotent homogeneous element of degree 1 in A+"
        if closed
        else "certificate incomplete"
    )
    return {"schema": SCHEMA, "cases": cases, "verdict": verdict}


# -- B = A/(Y) ------------------------------------------------------------------


def pm_sign(theta: Stability) -> int | None:
    """+1 / -1 if theta has the forbidden family of theta^+ / theta^- (m = 2n), else None."""
    m = theta.m
    if m % 2 or m < 4:
        return None
    n = m // 2
    fam = forbidden(theta).all
    base = {mask for mask in range(1, 1 << m) if bin(mask).count("1") > n}
    mid = [mask for mask in range(1, 1 << m) if bin(mask).count("1") == n]
    plus = base | {mk for mk in mid if mk & 1}
    minus = base | {mk for mk in mid if not mk & 1}
    if fam == plus:
        return 1
    if fam == minus:
        return -1
    return None


def b_reduce(theta: Stability, a: ChowElement) -> ChowElement:
    """Canonical form of ``a`` (no Y terms) in B^theta.

    For theta^+ / theta^- the degree n-1 part is reduced with the closed-form
    rules onto the monomials X_J with 1 in J; everything else goes through
    the linear-algebra normal form of B^theta.
    """
    if any(k for _, k in a.terms):
        raise ValueError("B-elements carry no Y terms")
    m = theta.m
    sign = pm_sign(theta)
    out = ChowElement.zero(m)
    for d, part in sorted(a.homogeneous_parts().items()):
        if sign is not None and d == m // 2 - 1:
            out = out + _closed_form_reduce(part, sign)
        else:
            if sign is None:
                log.info("no closed-form B rules for this stability; using linear algebra")
            out = out + b_quotient(theta, d).normal_form(part)
    return out


def _closed_form_reduce(part: ChowElement, sign: int) -> ChowElement:
    m = part.m
    out: dict = {}
    for (mask, _), c in part.terms.items():
        if mask & 1:
            out[(mask, 0)] = out.get((mask, 0), 0) + c
        elif sign > 0:
            # X_J = -X_1 sum_{j in J} X_{J - {j}}
            for j in members(mask):
                key = ((mask & ~(1 << (j - 1))) | 1, 0)
                out[key] = out.get(key, 0) - c
    return ChowElement(m, out)


def _b_mul(x: ChowElement, y: ChowElement) -> ChowElement:
    return (x * y).kill_y()


def power_in_B(theta: Stability, a: Sequence, k: int) -> ChowElement:
    if k < 0:
        raise ValueError("k must be nonnegative")
    x = ChowElement.linear(linear_form(a))
    if x.m != theta.m:
        raise ValueError("linear form length differs from m")
    result = ChowElement.one(theta.m)
    for _ in range(k):
        result = _b_mul(result, x)
    return b_reduce(theta, result)


def symbolic_power_in_B(coeffs: list[Poly], k: int) -> dict[int, Poly]:
    """(sum_i coeffs[i] X_i)^k in B = Q[X]/(X_i^2) by repeated multiplication.

    Returns a map squarefree-mask -> coefficient polynomial.
    """
    nv = coeffs[0].nvars
    result = {0: Poly.const(nv, 1)}
    for _ in range(k):
        nxt: dict[int, Poly] = {}
        for mask, c in result.items():
            for i, ai in enumerate(coeffs):
                bit = 1 << i
                if mask & bit or not ai:
                    continue
                key = mask | bit
                nxt[key] = nxt.get(key, Poly.zero(nv)) + c * ai
        result = {mk: c for mk, c in nxt.items() if c}
    return result


def _n_of(theta: Stability) -> int:
    return theta.m // 2


def hyperplane_power_test(theta: Stability, lam: Sequence, k: int) -> bool:
    """Whether a^k vanishes in B^theta for every a with lam . a = 0 (exact, symbolic)."""
    lam = linear_form(lam)
    m = theta.m
    if len(lam) != m:
        raise ValueError("lambda length differs from m")
    if not any(lam):
        raise ValueError("lambda must be nonzero")
    n = _n_of(theta)
    if n > SYMBOLIC_MAX_N:
        raise GuardError(f"symbolic expansion guarded at n <= {SYMBOLIC_MAX_N}; use hyperplane_power_sample")
    if k > max(n - 1, 0):
        raise GuardError(f"k must be <= n - 1 = {n - 1}")
    p = next(i for i, v in enumerate(lam) if v)
    coeffs = [Poly.var(m, i) for i in range(m)]
    coeffs[p] = Poly.zero(m)
    for i in range(m):
        if i != p and lam[i]:
            coeffs[p] = coeffs[p] - Poly.var(m, i) * (lam[i] / lam[p])
    power = symbolic_power_in_B(coeffs, k)
    Q = b_quotient(theta, k)
    total: dict[int, Poly] = {}
    for mask, c in power.items():
        red = Q.reduce_vector(ChowElement(m, {(mask, 0): 1}), k)
        for j, v in red.items():
            total[j] = total.get(j, Poly.zero(m)) + c * v
    return not any(total.values())


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-20, 20), rng.randint(1, 9))


def random_point_on_hyperplane(lam: Sequence, rng: random.Random) -> list[Fraction]:
    lam = linear_form(lam)
    a = [_random_rational(rng) for _ in lam]
    p = next(i for i, v in enumerate(lam) if v)
    a[p] = -sum((lam[i] * a[i] for i in range(len(lam)) if i != p), Fraction(0)) / lam[p]
    return a


def hyperplane_power_sample(theta: Stability, lam: Sequence, k: int, samples: int = 100, seed: int = 0) -> bool:
    """Sampling variant: False as soon as some sampled a on the hyperplane has a^k != 0."""
    rng = random.Random(seed)
    for _ in range(samples):
        if power_in_B(theta, random_point_on_hyperplane(lam, rng), k):
            return False
    return True


def unit_vector(m: int, i: int) -> list[Fraction]:
    return [Fraction(int(j == i)) for j in range(1, m + 1)]


def sign_patterns(m: int):
    """All lambda in {0, 1, -1}^m except 0."""
    for lam in product((0, 1, -1), repeat=m):
        if any(lam):
            yield [Fraction(v) for v in lam]


def closed_form_power(sign: int, a: Sequence) -> ChowElement:
    """Expected a^(n-1) in B^+ (sign=1) or B^- (sign=-1) on the basis X_1 X_K."""
    a = linear_form(a)
    m = len(a)
    n = m // 2
    out = {}
    for K in combinations(range(2, m + 1), n - 2):
        aK = Fraction(1)
        for j in K:
            aK *= a[j - 1]
        if sign < 0:
            c = a[0] * aK
        else:
            c = aK * (a[0] - sum((a[j - 1] for j in range(2, m + 1) if j not in K), Fraction(0)))
        out[(mask_of((1,) + K), 0)] = factorial(n - 1) * c
    return ChowElement(m, out)


# -- the distinguisher ------------------------------------------------------------


def random_generic_form(m: int, rng: random.Random) -> list[Fraction]:
    """Random rational vector with pairwise distinct nonzero entries."""
    while True:
        a = [_random_rational(rng) for _ in range(m)]
        if all(a) and len(set(a)) == m:
            return a


def sampling_evidence(n: int, samples: int, seed: int, epsilon=None) -> dict:
    rng = random.Random(seed)
    m = 2 * n
    plus, minus = theta_pm(n, 1, epsilon), theta_pm(n, -1, epsilon)
    minus_zero = 0
    plus_nonzero = 0
    for _ in range(samples):
        a = random_point_on_hyperplane(unit_vector(m, 1), rng)
        if not power_in_B(minus, a, n - 1):
            minus_zero += 1
    for _ in range(samples):
        a = random_generic_form(m, rng)
        if power_in_B(plus, a, n - 1):
            plus_nonzero += 1
    return {
        "samples": samples,
        "minus_a1_zero_power_vanishes": minus_zero,
        "plus_generic_power_nonzero": plus_nonzero,
    }


def distinguish(n: int, seed: int = 0, epsilon=None, samples: int = 100) -> dict:
    """Compare the rings A^+ and A^- for m = 2n and report the evidence."""
    if n < 2:
        raise ValueError("need n >= 2")
    m = 2 * n
    plus, minus = theta_pm(n, 1, epsilon), theta_pm(n, -1, epsilon)
    top = m - 2
    pp = poincare_polynomial(_quotient(plus, top, False))
    pm = poincare_polynomial(_quotient(minus, top, False))
    report: dict = {
        "schema": SCHEMA,
        "n": n,
        "m": m,
        "seed": seed,
        "theta_plus": plus.to_json(),
        "theta_minus": minus.to_json(),
        "poincare": {"plus": pp, "minus": pm, "equal": pp == pm},
        "square_zero": None,
        "b_ring": None,
    }
    decisive = False
    if n == 3:
        sq_minus = square_in_quotient(_quotient(minus, 2, False), WITNESS_N3)
        sq_plus = square_in_quotient(_quotient(plus, 2, False), WITNESS_N3)
        cert = no_square_zero_certificate_plus_n3(epsilon)
        cert_ok = all(c["status"] == "closed" for c in cert["cases"])
        report["square_zero"] = {
            "witness": list(WITNESS_N3),
            "square_in_minus": sq_minus.to_json(),
            "witness_square_zero_in_minus": not sq_minus,
            "witness_square_zero_in_plus": not sq_plus,
            "certificate_plus": cert,
            "certificate_closed": cert_ok,
        }
        decisive = (not sq_minus) and cert_ok
    if n >= 3:
        k = n - 1
        if n <= SYMBOLIC_MAX_N:
            method = "symbolic"
            minus_e1 = hyperplane_power_test(minus, unit_vector(m, 1), k)
            plus_coord = [hyperplane_power_test(plus, unit_vector(m, i), k) for i in range(1, m + 1)]
        else:
            method = "sampling"
            minus_e1 = hyperplane_power_sample(minus, unit_vector(m, 1), k, samples, seed)
            plus_coord = [
                hyperplane_power_sample(plus, unit_vector(m, i), k, samples, seed + i)
                for i in range(1, m + 1)
            ]
        report["b_ring"] = {
            "degree": k,
            "method": method,
            "minus_e1_hyperplane_vanishes": minus_e1,
            "plus_coordinate_hyperplanes_vanishing": [i for i, v in enumerate(plus_coord, 1) if v],
            "sampling": sampling_evidence(n, samples, seed, epsilon),
        }
        # an isomorphism descends to a signed scaled permutation when n >= 4,
        # which maps coordinate hyperplanes of Z^- onto those of Z^+
        if n >= 4:
            decisive = minus_e1 and not any(plus_coord)
    report["verdict"] = "rings distinguished" if decisive else "inconclusive at this n"
    return report
