"""Tautological relations and graded quotients of A = Q[X_1..X_m, Y]/(X_i^2 - Y).

For a theta-forbidden subset I with |I| = k the relations are

    R_I = sum_nu e_{k-1-2nu}(X_i : i in I) Y^nu
    S_I = sum_nu e_{k-2nu}(X_i : i in I) Y^nu

and the Chow ring of the semistable locus is A modulo (R_I, S_I) over the
minimal forbidden subsets.  :func:`relation_oracle` recomputes both from the
torus side by divided differences of f^I = prod_{i in I} (y_2 - x_i).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from .chowalgebra import ChowElement, graded_basis_keys, mask_of, members
from .exactpoly import Poly, TorusRing, divided_difference, subset_index
from .linalg import ReducedBasis, RowSpace, determinant
from .stability import Stability, forbidden, is_nontrivial

log = logging.getLogger(__name__)


class CacheDepthError(LookupError):
    """Requested degree is beyond the cached range; extend the quotient first."""


def relation_R(I: Iterable[int], m: int) -> ChowElement:
    I = subset_index(I, m)
    k = len(I)
    terms = {}
    for nu in range((k - 1) // 2 + 1) if k else ():
        for J in combinations(I, k - 1 - 2 * nu):
            terms[(mask_of(J), nu)] = Fraction(1)
    return ChowElement(m, terms)


def relation_S(I: Iterable[int], m: int) -> ChowElement:
    I = subset_index(I, m)
    k = len(I)
    terms = {}
    for nu in range(k // 2 + 1):
        for J in combinations(I, k - 2 * nu):
            terms[(mask_of(J), nu)] = Fraction(1)
    return ChowElement(m, terms)


@dataclass(frozen=True)
class RelationPair:
    I: tuple[int, ...]
    R: ChowElement
    S: ChowElement

    @classmethod
    def of(cls, I: Iterable[int], m: int) -> "RelationPair":
        I = subset_index(I, m)
        return cls(I, relation_R(I, m), relation_S(I, m))

    def to_json(self) -> dict:
        return {"I": list(self.I), "R": self.R.to_json(), "S": self.S.to_json()}


def f_I(I: Iterable[int], m: int) -> Poly:
    T = TorusRing(m)
    out = T.one()
    for i in subset_index(I, m):
        out = out * (T.y2 - T.x(i))
    return out


def relation_oracle(I: Iterable[int], m: int) -> tuple[Poly, Poly]:
    """Torus-side symmetrizations rho(f^I) and rho(f^I (y_2 - y_1)) / 2."""
    T = TorusRing(m)
    f = f_I(I, m)
    return divided_difference(f), divided_difference(f * (T.y2 - T.y1)) * Fraction(1, 2)


@dataclass
class DegreeComponent:
    degree: int
    keys: list[tuple[int, int]]
    ideal: ReducedBasis

    @property
    def ambient_dim(self) -> int:
        return len(self.keys)

    @property
    def dim(self) -> int:
        return len(self.keys) - self.ideal.rank

    @property
    def representatives(self) -> list[tuple[tuple[int, ...], int]]:
        """Basis labels (J, k) whose classes form a basis of the quotient component."""
        return [(members(self.keys[j][0]), self.keys[j][1]) for j in self.ideal.free]


def _times_x(row: dict, bit: int) -> dict:
    out = {}
    for (mask, k), c in row.items():
        key = (mask ^ bit, k + 1) if mask & bit else (mask | bit, k)
        out[key] = out.get(key, 0) + c
    return out


class QuotientRing:
    """Graded quotient of A by the ideal generated by ``generators``.

    Degree components 0..max_degree are computed on construction and never
    recomputed; :meth:`extend` returns a new ring with a deeper cache.
    """

    def __init__(
        self,
        m: int,
        generators: list[ChowElement],
        max_degree: int,
        theta: Stability | None = None,
        relations: list[RelationPair] | None = None,
        kill_y: bool = False,
    ):
        self.m = m
        self.theta = theta
        self.relations = relations or []
        self.kill_y = kill_y
        self.max_degree = max_degree
        gens = list(generators)
        if kill_y:
            gens.append(ChowElement.Y(m))
        self.generators = gens
        by_degree: dict[int, list[ChowElement]] = {}
        for g in gens:
            for d, part in g.homogeneous_parts().items():
                if not g.is_homogeneous():
                    raise ValueError("generators must be homogeneous")
                by_degree.setdefault(d, []).append(part)
        self.components: list[DegreeComponent] = []
        prev_rows: list[dict] = []
        for d in range(max_degree + 1):
            keys = graded_basis_keys(m, d)
            index = {key: j for j, key in enumerate(keys)}
            space = RowSpace(len(keys))
            for g in by_degree.get(d, []):
                space.add({index[key]: c for key, c in g.terms.items()})
            # ideal_d = sum_i X_i * ideal_{d-1} + generators of degree d
            for row in prev_rows:
                for i in range(m):
                    prod = _times_x(row, 1 << i)
                    space.add({index[key]: c for key, c in prod.items() if c})
            ideal = space.rref()
            self.components.append(DegreeComponent(d, keys, ideal))
            prev_rows = [{keys[j]: c for j, c in r.items()} for r in ideal.rows]

    # cache access

    def component(self, d: int) -> DegreeComponent:
        if d < 0:
            raise ValueError("negative degree")
        if d > self.max_degree:
            raise CacheDepthError(
                f"degree {d} exceeds cached max_degree {self.max_degree}; extend the cache"
            )
        return self.components[d]

    def extend(self, max_degree: int) -> "QuotientRing":
        base = [g for g in self.generators if not (self.kill_y and g == ChowElement.Y(self.m))]
        return QuotientRing(self.m, base, max_degree, self.theta, self.relations, self.kill_y)

    def dimensions(self) -> list[int]:
        return [c.dim for c in self.components]

    # reduction

    def reduce_vector(self, a: ChowElement, d: int) -> dict[int, Fraction]:
        comp = self.component(d)
        index = {key: j for j, key in enumerate(comp.keys)}
        return comp.ideal.reduce({index[key]: c for key, c in a.terms.items()})

    def normal_form(self, a: ChowElement) -> ChowElement:
        if a.m != self.m:
            raise ValueError(f"arity mismatch: m={a.m} vs m={self.m}")
        out = ChowElement.zero(self.m)
        for d, part in sorted(a.homogeneous_parts().items()):
            comp = self.component(d)
            red = self.reduce_vector(part, d)
            out = out + ChowElement(self.m, {comp.keys[j]: c for j, c in red.items()})
        return out

    def is_zero(self, a: ChowElement) -> bool:
        return not self.normal_form(a)

    def contains_ideal_of(self, other: "QuotientRing", max_degree: int | None = None) -> bool:
        """Whether other's ideal is contained in ours, degree by degree."""
        top = min(self.max_degree, other.max_degree) if max_degree is None else max_degree
        for d in range(top + 1):
            mine, theirs = self.component(d), other.component(d)
            if any(mine.ideal.reduce(r) for r in theirs.ideal.rows):
                return False
        return True

    def coordinates(self, a: ChowElement, basis: list[ChowElement]) -> list[Fraction]:
        """Coordinates of the class of homogeneous ``a`` in a chosen quotient basis.

        ``basis`` must consist of homogeneous elements of the same degree whose
        classes form a basis of that component; ValueError otherwise.
        """
        return self.coordinate_map(basis)(a)

    def coordinate_map(self, basis: list[ChowElement]):
        degs = {d for b in basis for d in b.degrees()}
        if len(degs) != 1:
            raise ValueError("basis elements must be homogeneous of one common degree")
        d = degs.pop()
        comp = self.component(d)
        if len(basis) != comp.dim:
            raise ValueError(f"need {comp.dim} basis elements in degree {d}, got {len(basis)}")
        free = comp.ideal.free
        pos = {j: r for r, j in enumerate(free)}
        cols = [self.reduce_vector(b, d) for b in basis]
        mat = [[cols[c].get(j, Fraction(0)) for c in range(len(basis))] for j in free]
        if determinant(mat) == 0:
            raise ValueError("elements do not form a basis of the quotient component")
        inv = _inverse(mat)

        def coords(a: ChowElement) -> list[Fraction]:
            if a and a.degrees() != {d}:
                raise ValueError(f"element is not homogeneous of degree {d}")
            red = self.reduce_vector(a, d) if a else {}
            vec = [Fraction(0)] * len(free)
            for j, c in red.items():
                vec[pos[j]] = c
            return [sum((row[i] * vec[i] for i in range(len(vec))), Fraction(0)) for row in inv]

        return coords


def _inverse(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [[Fraction(c) for c in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [c * inv for c in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def relation_pairs(theta: Stability, which: str = "minimal") -> list[RelationPair]:
    fam = forbidden(theta)
    return [RelationPair.of(I, theta.m) for I in fam.subsets(which)]


def build_quotient(
    theta: Stability, max_degree: int, *, which: str = "minimal", kill_y: bool = False
) -> QuotientRing:
    """Quotient of A by (R_I, S_I) over minimal (or all) theta-forbidden I.

    With ``kill_y`` the element Y is added to the ideal, giving A^theta/(Y).
    """
    if not is_nontrivial(theta):
        raise ValueError("stability is trivial: need 0 < theta_i < 1 for all i")
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    pairs = relation_pairs(theta, which)
    gens = []
    for p in pairs:
        gens.extend(g for g in (p.R, p.S) if g)
    log.debug("building quotient m=%d D=%d with %d generators", theta.m, max_degree, len(gens))
    return QuotientRing(theta.m, gens, max_degree, theta, pairs, kill_y)


def normal_form(Q: QuotientRing, a: ChowElement) -> ChowElement:
    return Q.normal_form(a)


def is_zero_in_quotient(Q: QuotientRing, a: ChowElement) -> bool:
    return Q.is_zero(a)


def poincare_polynomial(Q: QuotientRing) -> list[int]:
    """Quotient dimensions by degree.

    Trailing zeros are dropped when the cache reaches a zero component: the
    ring is generated in degree 1, so a zero component stays zero above.
    When the top cached component is nonzero the full cached list is returned.
    """
    dims = Q.dimensions()
    if dims and dims[-1] == 0:
        while dims and dims[-1] == 0:
            dims.pop()
    return dims


def is_palindromic(dims: list[int]) -> bool:
    return dims == dims[::-1]
