"""Exact sparse row reduction over Q.

Rows are dicts ``column -> Fraction``.  Incoming rows are cleared of
denominators and eliminated with integer cross-multiplication (content is
divided out after every step), and the accepted rows are normalized into a
reduced row-echelon basis at the end.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm


def _to_int_row(row: dict) -> dict[int, int]:
    den = reduce(lcm, (Fraction(c).denominator for c in row.values()), 1)
    out = {j: int(Fraction(c) * den) for j, c in row.items() if c}
    return _primitive(out)


def _primitive(row: dict[int, int]) -> dict[int, int]:
    g = reduce(gcd, row.values(), 0)
    if g > 1:
        row = {j: c // g for j, c in row.items()}
    return row


class RowSpace:
    """Incrementally built row space with unit pivot columns.

    Every stored row has a pivot column on which all other stored rows vanish,
    so reducing a vector against the store is a single pass.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, dict[int, int]] = {}  # pivot column -> integer row

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce_int(self, v: dict[int, int]) -> dict[int, int]:
        for p in [j for j in v if j in self.rows]:
            a = v.get(p)
            if not a:
                continue
            r = self.rows[p]
            b = r[p]
            g = gcd(a, b)
            fa, fb = b // g, a // g
            out = {j: c * fa for j, c in v.items()}
            for j, c in r.items():
                s = out.get(j, 0) - fb * c
                if s:
                    out[j] = s
                else:
                    out.pop(j, None)
            v = _primitive(out) if out else out
        return v

    def add(self, row: dict) -> bool:
        """Insert a row; return True if it increased the rank."""
        if not row:
            return False
        v = self._reduce_int(_to_int_row(row))
        if not v:
            return False
        p = min(v)
        if v[p] < 0:
            v = {j: -c for j, c in v.items()}
        b = v[p]
        for q, r in list(self.rows.items()):
            a = r.get(p)
            if a:
                g = gcd(a, b)
                fa, fb = b // g, a // g
                out = {j: c * fa for j, c in r.items()}
                for j, c in v.items():
                    s = out.get(j, 0) - fb * c
                    if s:
                        out[j] = s
                    else:
                        out.pop(j, None)
                self.rows[q] = _primitive(out)
        self.rows[p] = v
        return True

    def contains(self, row: dict) -> bool:
        return not row or not self._reduce_int(_to_int_row(row))

    def rref(self) -> "ReducedBasis":
        return ReducedBasis.from_rows(self.ncols, self.rows.values())


class ReducedBasis:
    """Reduced row-echelon basis of a subspace of Q^ncols.

    ``rows`` is ordered by pivot; each row has entry 1 at its pivot and the
    pivot is its leftmost nonzero column.  ``free`` lists the non-pivot
    columns, which index the canonical coset representatives.
    """

    def __init__(self, ncols: int, pivots: list[int], rows: list[dict[int, Fraction]]):
        self.ncols = ncols
        self.pivots = pivots
        self.rows = rows
        self._by_pivot = dict(zip(pivots, rows))
        pivset = set(pivots)
        self.free = [j for j in range(ncols) if j not in pivset]

    @classmethod
    def from_rows(cls, ncols: int, rows) -> "ReducedBasis":
        # plain Gauss-Jordan in column order over Fractions; the input is
        # already linearly independent, so this is cheap
        work = [{j: Fraction(c) for j, c in r.items() if c} for r in rows]
        work = [r for r in work if r]
        pivots: list[int] = []
        done: list[dict] = []
        while work:
            p = min(min(r) for r in work)
            idx = next(i for i, r in enumerate(work) if p in r)
            r = work.pop(idx)
            inv = 1 / r[p]
            r = {j: c * inv for j, c in r.items()}
            for coll in (work, done):
                for i, other in enumerate(coll):
                    a = other.get(p)
                    if a:
                        out = dict(other)
                        for j, c in r.items():
                            s = out.get(j, 0) - a * c
                            if s:
                                out[j] = s
                            else:
                                out.pop(j, None)
                        coll[i] = out
            work = [w for w in work if w]
            pivots.append(p)
            done.append(r)
        return cls(ncols, pivots, done)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: dict) -> dict[int, Fraction]:
        """Canonical representative of v modulo the row space (free columns only)."""
        out = {j: Fraction(c) for j, c in v.items() if c}
        for p in [j for j in out if j in self._by_pivot]:
            a = out.get(p)
            if not a:
                continue
            for j, c in self._by_pivot[p].items():
                s = out.get(j, 0) - a * c
                if s:
                    out[j] = s
                else:
                    out.pop(j, None)
        return out

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def __eq__(self, other):
        if not isinstance(other, ReducedBasis):
            return NotImplemented
        return self.ncols == other.ncols and self.pivots == other.pivots and self.rows == other.rows


def rank(rows, ncols: int) -> int:
    space = RowSpace(ncols)
    for r in rows:
        space.add(r)
    return space.rank


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} for a dense list-of-rows matrix A."""
    basis = ReducedBasis.from_rows(
        ncols, [{j: Fraction(c) for j, c in enumerate(r) if c} for r in rows]
    )
    out = []
    for f in basis.free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for p, r in zip(basis.pivots, basis.rows):
            vec[p] = -r.get(f, Fraction(0))
        out.append(vec)
    return out


def determinant(matrix: list[list[Fraction]]) -> Fraction:
    n = len(matrix)
    a = [[Fraction(c) for c in row] for row in matrix]
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if a[r][i]), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            det = -det
        det *= a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] / a[i][i]
            if f:
                for j in range(i, n):
                    a[r][j] -= f * a[i][j]
    return det
