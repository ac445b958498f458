"""Graded automorphisms of A = Q[X_1..X_m]/(X_i^2 = X_j^2).

For m > 2 every automorphism is a dilation composed with a signed permutation
X_i -> d * s_i * X_{sigma(i)}.  A candidate is given by a matrix A with
phi(X_j) = sum_i a_ij X_i.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from .chowalgebra import ChowElement, members
from .exactpoly import format_rational, parse_rational
from .linalg import determinant


class SingularMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class SignedScaledPermutation:
    """X_i -> d * signs[i-1] * X_{sigma[i-1]} (sigma stored 1-based, one-line)."""

    d: Fraction
    sigma: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "d", Fraction(self.d))
        object.__setattr__(self, "sigma", tuple(self.sigma))
        object.__setattr__(self, "signs", tuple(self.signs))
        if self.d == 0:
            raise ValueError("dilation must be nonzero")
        if sorted(self.sigma) != list(range(1, len(self.sigma) + 1)):
            raise ValueError(f"{self.sigma} is not a permutation of 1..{len(self.sigma)}")
        if len(self.signs) != len(self.sigma) or any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be a +-1 vector of length m")

    @property
    def m(self) -> int:
        return len(self.sigma)

    @classmethod
    def identity(cls, m: int) -> "SignedScaledPermutation":
        return cls(Fraction(1), tuple(range(1, m + 1)), (1,) * m)

    @classmethod
    def dilation(cls, m: int, d) -> "SignedScaledPermutation":
        return cls(Fraction(d), tuple(range(1, m + 1)), (1,) * m)

    @classmethod
    def permutation(cls, sigma) -> "SignedScaledPermutation":
        return cls(Fraction(1), tuple(sigma), (1,) * len(sigma))

    @classmethod
    def sign_flip(cls, m: int, i: int) -> "SignedScaledPermutation":
        return cls(Fraction(1), tuple(range(1, m + 1)), tuple(-1 if j == i else 1 for j in range(1, m + 1)))

    def matrix(self) -> list[list[Fraction]]:
        m = self.m
        A = [[Fraction(0)] * m for _ in range(m)]
        for j in range(m):
            A[self.sigma[j] - 1][j] = self.d * self.signs[j]
        return A

    def to_json(self) -> dict:
        return {
            "d": format_rational(self.d),
            "sigma": list(self.sigma),
            "signs": list(self.signs),
        }


def apply(g: SignedScaledPermutation, a: ChowElement) -> ChowElement:
    """Image of ``a`` under g; Y = X_i^2 goes to d^2 Y."""
    if a.m != g.m:
        raise ValueError(f"arity mismatch: m={a.m} vs m={g.m}")
    out = {}
    for (mask, k), c in a.terms.items():
        J = members(mask)
        coeff = c * g.d ** (len(J) + 2 * k)
        image = 0
        for j in J:
            coeff *= g.signs[j - 1]
            image |= 1 << (g.sigma[j - 1] - 1)
        out[(image, k)] = out.get((image, k), 0) + coeff
    return ChowElement(a.m, out)


def _as_matrix(A) -> list[list[Fraction]]:
    rows = [[parse_rational(c) if isinstance(c, str) else Fraction(c) for c in row] for row in A]
    m = len(rows)
    if any(len(r) != m for r in rows):
        raise ValueError("matrix must be square")
    return rows


def _check_invertible(A):
    if determinant(A) == 0:
        raise SingularMatrixError("matrix is singular")


def check_conditions(A) -> bool:
    """Column square sums agree (a) and a_{i1 j1} a_{i2 j1} = a_{i1 j2} a_{i2 j2} (b)."""
    A = _as_matrix(A)
    _check_invertible(A)
    m = len(A)
    sq = [sum(A[i][j] ** 2 for i in range(m)) for j in range(m)]
    if any(s != sq[0] for s in sq):
        return False
    for i1, i2 in combinations(range(m), 2):
        prods = [A[i1][j] * A[i2][j] for j in range(m)]
        if any(p != prods[0] for p in prods):
            return False
    return True


def preserves_ideal(A) -> bool:
    """Direct test: phi(X_j1)^2 - phi(X_j2)^2 vanishes in A for all j1 < j2."""
    A = _as_matrix(A)
    _check_invertible(A)
    m = len(A)
    images = [ChowElement.linear([A[i][j] for i in range(m)]) for j in range(m)]
    squares = [x * x for x in images]
    return all(not (squares[j] - squares[0]) for j in range(1, m))


def decompose(A) -> SignedScaledPermutation | None:
    """Factor an automorphism matrix as dilation (d > 0) x signs x permutation.

    Returns None when A does not define an automorphism of A.
    """
    A = _as_matrix(A)
    m = len(A)
    if m <= 2:
        raise ValueError("classification requires m > 2")
    if not check_conditions(A):
        return None
    sigma, signs, scale = [], [], set()
    for j in range(m):
        nz = [i for i in range(m) if A[i][j]]
        if len(nz) != 1:
            raise AssertionError(f"column {j + 1} has {len(nz)} nonzero entries despite (a),(b)")
        v = A[nz[0]][j]
        sigma.append(nz[0] + 1)
        signs.append(1 if v > 0 else -1)
        scale.add(abs(v))
    (d,) = scale
    return SignedScaledPermutation(d, tuple(sigma), tuple(signs))


def load_matrix(path) -> list[list[Fraction]]:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict):
        data = data["matrix"]
    return _as_matrix(data)
