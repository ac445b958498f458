from fractions import Fraction
from itertools import combinations
from math import comb, factorial

import pytest

from chowcfg.chowalgebra import ChowElement, mask_of
from chowcfg.exactpoly import Poly
from chowcfg.invariants import (
    GuardError,
    WITNESS_N3,
    b_quotient,
    b_reduce,
    closed_form_power,
    distinguish,
    hyperplane_power_sample,
    hyperplane_power_test,
    no_square_zero_certificate_plus_n3,
    power_in_B,
    sign_patterns,
    square_in_quotient,
    symbolic_power_in_B,
    unit_vector,
)
from chowcfg.presentation import build_quotient
from chowcfg.stability import theta_pm

X = ChowElement.X
M = 6


@pytest.fixture(scope="module")
def rings():
    plus, minus = theta_pm(3, 1), theta_pm(3, -1)
    return {
        "plus": plus,
        "minus": minus,
        "A+": build_quotient(plus, 3),
        "A-": build_quotient(minus, 3),
    }


def test_b_reduce_examples(rings):
    a = X(M, 2) * X(M, 3)
    assert not b_reduce(rings["minus"], a)
    assert b_reduce(rings["plus"], a) == -(X(M, 1) * X(M, 2)) - X(M, 1) * X(M, 3)
    for key in ("plus", "minus"):
        assert b_reduce(rings[key], X(M, 1) * X(M, 2)) == X(M, 1) * X(M, 2)
    with pytest.raises(ValueError):
        b_reduce(rings["plus"], ChowElement.Y(M))


def test_power_in_B_examples(rings):
    a = [0, 3, -1, Fraction(1, 2), 7, 2]
    assert not power_in_B(rings["minus"], a, 2)
    got = power_in_B(rings["plus"], [0, 1, 1, 0, 0, 0], 2)
    assert got == -2 * X(M, 1) * X(M, 2) - 2 * X(M, 1) * X(M, 3)
    for key in ("plus", "minus"):
        assert power_in_B(rings[key], a, 0) == ChowElement.one(M)


@pytest.mark.parametrize("n", [3, 4])
def test_closed_form_agrees_with_linear_algebra(n):
    m = 2 * n
    d = n - 1
    for sign in (1, -1):
        theta = theta_pm(n, sign)
        Q = b_quotient(theta, d)
        assert Q.component(d).dim == comb(m - 1, n - 2)
        for J in combinations(range(1, m + 1), d):
            mono = ChowElement.monomial(m, J)
            red = b_reduce(theta, mono)
            assert all(mask & 1 for mask, _ in red.terms)
            assert Q.is_zero(mono - red)


def test_expansion_identity():
    # in Q[X]/(X_i^2), (sum a_i X_i)^k = k! sum_{|J|=k} a_J X_J
    m, k = 5, 3
    coeffs = [Poly.var(m, i) for i in range(m)]
    power = symbolic_power_in_B(coeffs, k)
    assert set(power) == {mask_of(J) for J in combinations(range(1, m + 1), k)}
    for J in combinations(range(1, m + 1), k):
        mono = Poly.const(m, factorial(k))
        for j in J:
            mono = mono * Poly.var(m, j - 1)
        assert power[mask_of(J)] == mono


@pytest.mark.parametrize("n", [3, 4])
def test_closed_form_power_matches_reduction(n):
    import random

    rng = random.Random(n)
    m = 2 * n
    for sign in (1, -1):
        theta = theta_pm(n, sign)
        for _ in range(10):
            a = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(m)]
            assert power_in_B(theta, a, n - 1) == closed_form_power(sign, a)


def test_square_in_quotient(rings):
    assert not square_in_quotient(rings["A-"], WITNESS_N3)
    assert square_in_quotient(rings["A+"], WITNESS_N3)
    assert not square_in_quotient(rings["A+"], [0] * M)


def test_every_four_subset_of_tail_squares_to_zero_in_minus(rings):
    for K in combinations(range(2, 7), 4):
        a = [1 if i in K else 0 for i in range(1, 7)]
        assert not square_in_quotient(rings["A-"], a)


def test_certificate_closes():
    cert = no_square_zero_certificate_plus_n3()
    assert cert["schema"] == "chowcfg/1"
    assert len(cert["cases"]) == 33
    assert all(c["status"] == "closed" for c in cert["cases"])
    supports = [tuple(c["support"]) for c in cert["cases"] if c["kind"] == "support"]
    assert len(supports) == 32 and () in supports


def test_hyperplane_examples(rings):
    e1 = unit_vector(M, 1)
    assert hyperplane_power_test(rings["minus"], e1, 2)
    assert not hyperplane_power_test(rings["plus"], e1, 2)


def test_plus_has_no_sign_pattern_hyperplane(rings):
    hits = [lam for lam in sign_patterns(M) if hyperplane_power_test(rings["plus"], lam, 2)]
    assert hits == []


def test_minus_e1_only_coordinate_hyperplane_n4():
    m = 8
    minus, plus = theta_pm(4, -1), theta_pm(4, 1)
    assert [i for i in range(1, m + 1) if hyperplane_power_test(minus, unit_vector(m, i), 3)] == [1]
    assert not any(hyperplane_power_test(plus, unit_vector(m, i), 3) for i in range(1, m + 1))


def test_sampling_agrees_with_symbolic(rings):
    e1 = unit_vector(M, 1)
    assert hyperplane_power_sample(rings["minus"], e1, 2, samples=30, seed=5)
    assert not hyperplane_power_sample(rings["plus"], e1, 2, samples=30, seed=5)


def test_guards():
    with pytest.raises(GuardError):
        hyperplane_power_test(theta_pm(5, -1), unit_vector(10, 1), 4)
    with pytest.raises(GuardError):
        hyperplane_power_test(theta_pm(3, -1), unit_vector(6, 1), 3)
    with pytest.raises(ValueError):
        hyperplane_power_test(theta_pm(3, -1), [0] * 6, 2)


def test_distinguish_n2_inconclusive():
    rep = distinguish(2)
    assert rep["verdict"] == "inconclusive at this n"
    assert rep["poincare"]["equal"]


def test_distinguish_n3():
    rep = distinguish(3, seed=7, samples=20)
    assert rep["verdict"] == "rings distinguished"
    assert rep["poincare"]["plus"] == rep["poincare"]["minus"] == [1, 6, 6, 1]
    sq = rep["square_zero"]
    assert sq["witness_square_zero_in_minus"] and not sq["witness_square_zero_in_plus"]
    assert sq["certificate_closed"]


def test_distinguish_n4():
    rep = distinguish(4, seed=1, samples=10)
    assert rep["verdict"] == "rings distinguished"
    b = rep["b_ring"]
    assert b["method"] == "symbolic"
    assert b["minus_e1_hyperplane_vanishes"] and b["plus_coordinate_hyperplanes_vanishing"] == []
