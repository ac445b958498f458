"""Canonical-form arithmetic in A = Q[X_1..X_m, Y] / (X_i^2 - Y).

Every element has a unique representative sum c_{J,k} X_J Y^k with J a
subset of {1..m}.  Internally J is a bitmask (bit i-1 stands for X_i), so a
monomial product is ``(J1 ^ J2, k1 + k2 + popcount(J1 & J2))``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable

from .exactpoly import Poly, format_rational, parse_rational


def mask_of(J: Iterable[int]) -> int:
    mask = 0
    for j in J:
        mask |= 1 << (j - 1)
    return mask


def members(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _popcount(x: int) -> int:
    return bin(x).count("1")


class ChowElement:
    """Element of A in squarefree normal form.

    ``terms`` maps ``(mask, k)`` to a nonzero Fraction.  Instances are treated
    as immutable.
    """

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: dict | None = None):
        self.m = m
        self.terms = {key: Fraction(c) for key, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, m, terms):
        e = cls.__new__(cls)
        e.m = m
        e.terms = terms
        return e

    # constructors

    @classmethod
    def zero(cls, m: int) -> "ChowElement":
        return cls._raw(m, {})

    @classmethod
    def one(cls, m: int) -> "ChowElement":
        return cls._raw(m, {(0, 0): Fraction(1)})

    @classmethod
    def const(cls, m: int, c) -> "ChowElement":
        c = Fraction(c)
        return cls._raw(m, {(0, 0): c} if c else {})

    @classmethod
    def X(cls, m: int, i: int) -> "ChowElement":
        if not 1 <= i <= m:
            raise ValueError(f"X index {i} out of range 1..{m}")
        return cls._raw(m, {(1 << (i - 1), 0): Fraction(1)})

    @classmethod
    def Y(cls, m: int) -> "ChowElement":
        return cls._raw(m, {(0, 1): Fraction(1)})

    @classmethod
    def monomial(cls, m: int, J: Iterable[int], k: int = 0, c=1) -> "ChowElement":
        """c * X_J * Y^k; repeated indices in J are folded into Y."""
        out = cls.const(m, c)
        for j in J:
            out = out * cls.X(m, j)
        for _ in range(k):
            out = out * cls.Y(m)
        return out

    @classmethod
    def linear(cls, coeffs: Iterable) -> "ChowElement":
        coeffs = [Fraction(c) for c in coeffs]
        return cls._raw(len(coeffs), {(1 << i, 0): c for i, c in enumerate(coeffs) if c})

    @classmethod
    def from_poly(cls, g: Poly) -> "ChowElement":
        """Normalize a polynomial in X_1..X_m, Y (``m + 1`` variables)."""
        m = g.nvars - 1
        out: dict = {}
        for exp, c in g.terms.items():
            mask = 0
            k = exp[m]
            for i, p in enumerate(exp[:m]):
                k += p // 2
                if p % 2:
                    mask |= 1 << i
            out[(mask, k)] = out.get((mask, k), 0) + c
        return cls._raw(m, {key: c for key, c in out.items() if c})

    # arithmetic

    def _check(self, other: "ChowElement"):
        if other.m != self.m:
            raise ValueError(f"arity mismatch: m={self.m} vs m={other.m}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ChowElement.const(self.m, other)
        if not isinstance(other, ChowElement):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, 0) + c
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return ChowElement._raw(self.m, out)

    __radd__ = __add__

    def __neg__(self):
        return ChowElement._raw(self.m, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ChowElement.const(self.m, other)
        if not isinstance(other, ChowElement):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ChowElement.zero(self.m)
            return ChowElement._raw(self.m, {k: c * other for k, c in self.terms.items()})
        if not isinstance(other, ChowElement):
            return NotImplemented
        return chow_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return chow_pow(self, k)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ChowElement.const(self.m, other)
        if not isinstance(other, ChowElement):
            return NotImplemented
        return self.m == other.m and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"ChowElement(m={self.m}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mask, k in sorted(self.terms, key=lambda t: basis_sort_key(*t)):
            c = self.terms[(mask, k)]
            mono = "*".join([f"X{i}" for i in members(mask)] + (["Y" if k == 1 else f"Y^{k}"] if k else []))
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # structure

    def degrees(self) -> set[int]:
        return {_popcount(mask) + 2 * k for mask, k in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def homogeneous_parts(self) -> dict[int, "ChowElement"]:
        parts: dict[int, dict] = {}
        for (mask, k), c in self.terms.items():
            parts.setdefault(_popcount(mask) + 2 * k, {})[(mask, k)] = c
        return {d: ChowElement._raw(self.m, t) for d, t in parts.items()}

    def coefficient(self, J: Iterable[int], k: int = 0) -> Fraction:
        return self.terms.get((mask_of(J), k), Fraction(0))

    def kill_y(self) -> "ChowElement":
        """Project to A/(Y): drop all terms with a positive Y-power."""
        return ChowElement._raw(self.m, {key: c for key, c in self.terms.items() if key[1] == 0})

    def to_poly(self) -> Poly:
        """The squarefree representative as a polynomial in X_1..X_m, Y."""
        n = self.m + 1
        out = {}
        for (mask, k), c in self.terms.items():
            exp = [0] * n
            for i in members(mask):
                exp[i - 1] = 1
            exp[self.m] = k
            out[tuple(exp)] = c
        return Poly(n, out)

    def to_json(self) -> dict:
        terms = [
            {"J": list(members(mask)), "k": k, "c": format_rational(self.terms[(mask, k)])}
            for mask, k in sorted(self.terms, key=lambda t: basis_sort_key(*t))
        ]
        return {"m": self.m, "terms": terms}

    @classmethod
    def from_json(cls, data: dict) -> "ChowElement":
        m = int(data["m"])
        out = cls.zero(m)
        for t in data["terms"]:
            out = out + cls.monomial(m, t["J"], int(t["k"]), parse_rational(t["c"]))
        return out


def chow_mul(a: ChowElement, b: ChowElement) -> ChowElement:
    """Product in A, rewriting X_i^2 -> Y."""
    a._check(b)
    out: dict = {}
    for (ma, ka), ca in a.terms.items():
        for (mb, kb), cb in b.terms.items():
            key = (ma ^ mb, ka + kb + _popcount(ma & mb))
            out[key] = out.get(key, 0) + ca * cb
    return ChowElement._raw(a.m, {key: c for key, c in out.items() if c})


def chow_pow(a: ChowElement, k: int) -> ChowElement:
    if k < 0:
        raise ValueError("negative exponent")
    result = ChowElement.one(a.m)
    for _ in range(k):
        result = chow_mul(result, a)
    return result


def basis_sort_key(mask: int, k: int):
    return (_popcount(mask) + 2 * k, k, members(mask))


def graded_basis(m: int, d: int) -> list[tuple[tuple[int, ...], int]]:
    """Basis labels (J, k) of A_d with |J| + 2k = d.

    Ordered by Y-power first, then J lexicographically; so
    ``graded_basis(2, 2) == [((1, 2), 0), ((), 1)]``.
    """
    if d < 0:
        raise ValueError("degree must be nonnegative")
    labels = []
    for k in range(d // 2 + 1):
        size = d - 2 * k
        if size > m:
            continue
        labels.extend((J, k) for J in combinations(range(1, m + 1), size))
    return labels


def graded_basis_keys(m: int, d: int) -> list[tuple[int, int]]:
    """Same as :func:`graded_basis` with bitmask keys."""
    return [(mask_of(J), k) for J, k in graded_basis(m, d)]


def ambient_hilbert(m: int, D: int) -> list[int]:
    """dim A_d for d = 0..D by counting basis labels."""
    if D < 0:
        raise ValueError("D must be nonnegative")
    return [len(graded_basis(m, d)) for d in range(D + 1)]


def hilbert_series_coefficients(m: int, D: int) -> list[int]:
    """Coefficients of (1+q)^(m-1) / (1-q) up to q^D (independent closed form)."""
    partial = 0
    out = []
    for d in range(D + 1):
        partial += comb(m - 1, d) if d <= m - 1 else 0
        out.append(partial)
    return out
