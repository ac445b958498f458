from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chowcfg.exactpoly import (
    ExactDivisionError,
    Poly,
    TorusRing,
    divided_difference,
    elementary_symmetric,
    parse_rational,
    poly_arith,
    substitute_chow,
    subset_index,
    swap_y,
)

T = TorusRing(3)
x1, x2, x3, y1, y2 = T.x(1), T.x(2), T.x(3), T.y1, T.y2


def test_poly_arith_examples():
    assert poly_arith(y2 - x1, y1 - x1, "mul") == y1 * y2 - x1 * y1 - x1 * y2 + x1 * x1
    zero = Poly.zero(T.nvars)
    assert poly_arith(x1 + y2, zero, "add") == x1 + y2
    assert poly_arith((y1 + y2) ** 2, 4 * y1 * y2, "sub") == (y1 - y2) ** 2


def test_arity_mismatch():
    with pytest.raises(ValueError):
        poly_arith(Poly.var(2, 0), Poly.var(3, 0), "add")
    with pytest.raises(ValueError):
        Poly.var(2, 0) + Poly.var(3, 0)


def test_no_zero_coefficients_stored():
    p = (x1 + y1) - y1
    assert p == x1
    assert all(p.terms.values())
    assert not (x1 - x1).terms


def test_swap_y_examples():
    assert swap_y(y1 * y1 * y2) == y1 * y2 * y2
    assert swap_y(x1 * y1 - x2 * y2) == x1 * y2 - x2 * y1
    sym = y1 * y2 + x3 * (y1 + y2)
    assert swap_y(sym) == sym


def test_divided_difference_examples():
    assert divided_difference(y2 - x1) == Poly.const(T.nvars, 1)
    got = divided_difference((y2 - x1) * (y2 - y1))
    assert got == y1 + y2 - 2 * x1
    # y1 + y2 - 2 x1 is 2 X_1 after substitution
    X1 = Poly.var(4, 0)
    assert got == substitute_chow(2 * X1, 3)
    assert not divided_difference(y1 * y2 + x2)


def test_divided_difference_catches_inexact_division(monkeypatch):
    import chowcfg.exactpoly as ep

    # a "swap" that does not produce an antisymmetric numerator
    monkeypatch.setattr(ep, "swap_y", lambda f: f * 0 + Poly.var(f.nvars, 0))
    with pytest.raises(ExactDivisionError):
        ep.divided_difference(y2 * y2)


def test_elementary_symmetric_examples():
    a, b, c = Poly.var(3, 0), Poly.var(3, 1), Poly.var(3, 2)
    assert elementary_symmetric(2, [a, b, c]) == a * b + a * c + b * c
    assert elementary_symmetric(0, [a, b, c]) == Poly.const(3, 1)
    assert not elementary_symmetric(4, [a, b, c])
    assert elementary_symmetric(3, [a, b, c]) == a * b * c


def test_substitute_chow_examples():
    m = 3
    X = [Poly.var(m + 1, i) for i in range(m)]
    Y = Poly.var(m + 1, m)
    assert substitute_chow(X[0], m) == (y1 + y2) * Fraction(1, 2) - x1
    assert substitute_chow(Y, m) == (y1 + y2) ** 2 * Fraction(1, 4) - y1 * y2
    for i in range(m):
        assert substitute_chow(X[i] * X[i] - Y, m) == (y1 - T.x(i + 1)) * (y2 - T.x(i + 1))


def test_parse_rational():
    assert parse_rational("3/10") == Fraction(3, 10)
    assert parse_rational("-2") == Fraction(-2)
    for bad in ("0.5", "1e3", "1/0", "a/b", "", "1//2"):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_subset_index():
    assert subset_index([3, 1], 4) == (1, 3)
    with pytest.raises(ValueError):
        subset_index([1, 1], 4)
    with pytest.raises(ValueError):
        subset_index([0], 4)
    with pytest.raises(ValueError):
        subset_index([5], 4)


# -- properties -------------------------------------------------------------

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def torus_polys(draw, m=2, max_terms=5, max_exp=3):
    n = m + 2
    terms = draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, max_exp)] * n), small, max_size=max_terms
        )
    )
    return Poly(n, terms)


@given(torus_polys())
@settings(max_examples=60, deadline=None)
def test_divided_difference_reconstructs_antisymmetric_part(f):
    R = TorusRing(2)
    q = divided_difference(f)
    assert q * (R.y2 - R.y1) == f - swap_y(f)
    assert swap_y(q) == q


@st.composite
def chow_polys(draw, m=2, max_terms=4):
    terms = draw(
        st.dictionaries(st.tuples(*[st.integers(0, 2)] * (m + 1)), small, max_size=max_terms)
    )
    return Poly(m + 1, terms)


@given(chow_polys(), chow_polys())
@settings(max_examples=40, deadline=None)
def test_substitute_chow_is_multiplicative(g, h):
    assert substitute_chow(g * h, 2) == substitute_chow(g, 2) * substitute_chow(h, 2)
    assert substitute_chow(g + h, 2) == substitute_chow(g, 2) + substitute_chow(h, 2)
