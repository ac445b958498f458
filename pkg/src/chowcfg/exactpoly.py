"""Exact rational arithmetic and sparse multivariate polynomials.

Coefficients are :class:`fractions.Fraction` throughout.  A :class:`Poly`
is a map from exponent tuples to nonzero coefficients over a fixed number of
variables; the torus-side ring Q[x_1..x_m, y_1, y_2] is a ``Poly`` with
``m + 2`` variables in the order ``x_1 < ... < x_m < y_1 < y_2``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

Rational = Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text) -> Fraction:
    """Parse an exact rational literal ``"p/q"`` or ``"p"``.

    Floats and decimal strings are rejected on purpose.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"malformed rational literal: {text!r}")
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise ValueError(f"malformed rational literal: {text!r}")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in rational literal: {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


class Poly:
    """Sparse polynomial with exact rational coefficients.

    >>> x, y = Poly.var(2, 0), Poly.var(2, 1)
    >>> (x + y) * (x - y) == x * x - y * y
    True
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, Fraction] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != nvars:
                    raise ValueError(f"exponent {exp} does not have length {nvars}")
                if c:
                    clean[tuple(exp)] = Fraction(c)
        self.terms = clean

    @classmethod
    def _raw(cls, nvars, terms):
        # terms already clean
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        c = Fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, index: int, power: int = 1) -> "Poly":
        exp = [0] * nvars
        exp[index] = power
        return cls._raw(nvars, {tuple(exp): Fraction(1)})

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"arity mismatch: {self.nvars} vs {other.nvars} variables")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly.zero(self.nvars)
            return Poly._raw(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return self * (1 / Fraction(scalar))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Poly({self.nvars}, {self.to_str()})"

    def to_str(self, names: list[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"v{i}" for i in range(self.nvars)]
        parts = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            mono = "*".join(
                n if p == 1 else f"{n}^{p}" for n, p in zip(names, exp) if p
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def subs(self, index: int, value: "Poly") -> "Poly":
        """Substitute ``value`` for variable ``index``."""
        out = Poly.zero(self.nvars)
        powers = {}
        for exp, c in self.terms.items():
            p = exp[index]
            if p not in powers:
                powers[p] = value ** p
            rest = list(exp)
            rest[index] = 0
            out = out + Poly._raw(self.nvars, {tuple(rest): c}) * powers[p]
        return out

    def evaluate(self, point: Iterable) -> Fraction:
        point = [Fraction(v) for v in point]
        total = Fraction(0)
        for exp, c in self.terms.items():
            t = c
            for v, p in zip(point, exp):
                if p:
                    t *= v ** p
            total += t
        return total


def poly_arith(a: Poly, b: Poly, kind: str) -> Poly:
    """Exact ``add``, ``sub`` or ``mul`` of two polynomials of equal arity."""
    if a.nvars != b.nvars:
        raise ValueError(f"arity mismatch: {a.nvars} vs {b.nvars} variables")
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


class TorusRing:
    """Variable bookkeeping for Q[x_1..x_m, y_1, y_2] (1-based x indices)."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("m must be positive")
        self.m = m
        self.nvars = m + 2

    def x(self, i: int) -> Poly:
        if not 1 <= i <= self.m:
            raise ValueError(f"x index {i} out of range 1..{self.m}")
        return Poly.var(self.nvars, i - 1)

    @property
    def y1(self) -> Poly:
        return Poly.var(self.nvars, self.m)

    @property
    def y2(self) -> Poly:
        return Poly.var(self.nvars, self.m + 1)

    @property
    def y(self) -> Poly:
        return self.y1 + self.y2

    @property
    def z(self) -> Poly:
        return self.y1 * self.y2

    def one(self) -> Poly:
        return Poly.const(self.nvars, 1)

    def names(self) -> list[str]:
        return [f"x{i}" for i in range(1, self.m + 1)] + ["y1", "y2"]


def swap_y(f: Poly) -> Poly:
    """Exchange the exponents of the last two variables (y_1 and y_2)."""
    return Poly._raw(f.nvars, {e[:-2] + (e[-1], e[-2]): c for e, c in f.terms.items()})


class ExactDivisionError(ArithmeticError):
    """Exact division left a nonzero remainder."""


def divided_difference(f: Poly) -> Poly:
    """Return (f - swap_y(f)) / (y_2 - y_1), checked to be exact.

    The numerator is divided by synthetic division in y_2 with root y_1;
    a nonzero remainder raises :class:`ExactDivisionError`.
    """
    n = f.nvars
    i1, i2 = n - 2, n - 1
    g = f - swap_y(f)
    if not g:
        return Poly.zero(n)
    # coefficients of g as a polynomial in y_2
    by_power: dict[int, dict] = {}
    for exp, c in g.terms.items():
        rest = exp[:i2] + (0,)
        by_power.setdefault(exp[i2], {})[rest] = c
    top = max(by_power)
    y1 = Poly.var(n, i1)
    quotient = {}
    carry = Poly.zero(n)
    for j in range(top, 0, -1):
        carry = Poly._raw(n, by_power.get(j, {})) + y1 * carry
        quotient[j - 1] = carry
    remainder = Poly._raw(n, by_power.get(0, {})) + y1 * carry
    if remainder:
        raise ExactDivisionError(f"division by y2 - y1 left remainder {remainder!r}")
    out: dict = {}
    for j, q in quotient.items():
        for exp, c in q.terms.items():
            out[exp[:i2] + (j,)] = c
    return Poly._raw(n, out)


def elementary_symmetric(j: int, values: list, one=None):
    """The j-th elementary symmetric polynomial of ``values``.

    ``values`` may be any ring elements supporting ``+`` and ``*``; ``one``
    is the unit to return for ``j == 0`` (defaults to ``values[0] ** 0``).
    """
    if j < 0:
        raise ValueError("j must be nonnegative")
    if one is None:
        if not values:
            raise ValueError("need `one` when values is empty")
        one = values[0] ** 0
    if j == 0:
        return one
    if j > len(values):
        return one * 0
    # e_j via the recursion e_j(v_1..v_k) = e_j(v_1..v_{k-1}) + v_k e_{j-1}(v_1..v_{k-1})
    e = [one] + [one * 0] * j
    for v in values:
        for r in range(j, 0, -1):
            e[r] = e[r] + v * e[r - 1]
    return e[j]


def chow_variable_images(m: int) -> tuple[list[Poly], Poly]:
    """Torus images of X_1..X_m and Y: X_i = y/2 - x_i, Y = y^2/4 - z."""
    T = TorusRing(m)
    half = Fraction(1, 2)
    xs = [T.y * half - T.x(i) for i in range(1, m + 1)]
    Y = T.y * T.y * Fraction(1, 4) - T.z
    return xs, Y


def substitute_chow(g, m: int | None = None) -> Poly:
    """Map a polynomial in X_1..X_m, Y to the torus ring.

    ``g`` is either a :class:`Poly` in ``m + 1`` variables (X_1..X_m, Y) or
    any object with a ``to_poly()`` method returning one.
    """
    if not isinstance(g, Poly):
        g = g.to_poly()
    if m is None:
        m = g.nvars - 1
    if g.nvars != m + 1:
        raise ValueError(f"expected {m + 1} variables, got {g.nvars}")
    xs, Y = chow_variable_images(m)
    images = xs + [Y]
    n = m + 2
    cache: list[dict[int, Poly]] = [{} for _ in images]
    out = Poly.zero(n)
    for exp, c in g.terms.items():
        term = Poly.const(n, c)
        for idx, p in enumerate(exp):
            if p:
                powers = cache[idx]
                if p not in powers:
                    powers[p] = images[idx] ** p
                term = term * powers[p]
        out = out + term
    return out


def subsets(items: Iterable[int], size: int):
    """Sorted ``size``-subsets of ``items`` as tuples."""
    return combinations(sorted(items), size)


def subset_index(members: Iterable[int], m: int) -> tuple[int, ...]:
    """Validate and normalize a subset of {1..m} to a sorted tuple."""
    members = list(members)
    out = tuple(sorted(set(members)))
    if len(out) != len(members):
        raise ValueError(f"duplicate indices in subset {members}")
    if out and (out[0] < 1 or out[-1] > m):
        raise ValueError(f"subset {members} not contained in 1..{m}")
    return out
