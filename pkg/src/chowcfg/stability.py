"""Stability conditions for the m-subspace quiver with dimension vector (1,...,1;2).

A stability is stored as its source weights theta_1..theta_m with the sink
weight normalized to -1, hence sum(theta) == 2.  Subsets of {1..m} are
handled as bitmasks internally; enumeration is 2^m and guarded by
``MAX_M``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .chowalgebra import members
from .exactpoly import format_rational, parse_rational

MAX_M = 24


class StabilityError(ValueError):
    pass


@dataclass(frozen=True)
class Stability:
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        weights = tuple(parse_rational(w) if isinstance(w, str) else Fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if len(weights) < 3:
            raise StabilityError("need m >= 3 sources")
        if sum(weights) != 2:
            raise StabilityError(f"weights must sum to 2, got {sum(weights)}")

    @property
    def m(self) -> int:
        return len(self.weights)

    def value(self, I: Iterable[int]) -> Fraction:
        """theta_I for a subset I of {1..m} (1-based)."""
        return sum((self.weights[i - 1] for i in I), Fraction(0))

    def subset_values(self) -> list[Fraction]:
        """theta_I for every bitmask I in 0..2^m - 1."""
        m = self.m
        if m > MAX_M:
            raise StabilityError(f"subset enumeration guarded at m <= {MAX_M}, got m={m}")
        vals = [Fraction(0)] * (1 << m)
        for mask in range(1, 1 << m):
            low = mask & -mask
            vals[mask] = vals[mask ^ low] + self.weights[low.bit_length() - 1]
        return vals

    def to_json(self) -> dict:
        return {"m": self.m, "weights": [format_rational(w) for w in self.weights]}

    @classmethod
    def from_json(cls, data: dict) -> "Stability":
        theta = cls(tuple(parse_rational(w) for w in data["weights"]))
        if "m" in data and int(data["m"]) != theta.m:
            raise StabilityError(f"m={data['m']} does not match {theta.m} weights")
        return theta

    @classmethod
    def load(cls, path) -> "Stability":
        return cls.from_json(json.loads(Path(path).read_text()))


def _proper_masks(m: int):
    return range(1, (1 << m) - 1)


def is_nontrivial(theta: Stability) -> bool:
    """Stable locus non-empty: every weight strictly between 0 and 1."""
    return all(0 < w < 1 for w in theta.weights)


def is_coprime(theta: Stability) -> bool:
    vals = theta.subset_values()
    return all(vals[mask] != 1 for mask in _proper_masks(theta.m))


def is_deformation(theta: Stability, theta_prime: Stability) -> bool:
    """Whether theta_prime is a deformation of theta.

    For every proper nonempty I: theta_I < 1 implies theta'_I < 1, and
    theta'_I <= 1 implies theta_I <= 1.
    """
    if theta.m != theta_prime.m:
        raise StabilityError("stabilities have different m")
    v, w = theta.subset_values(), theta_prime.subset_values()
    for mask in _proper_masks(theta.m):
        if v[mask] < 1 and not w[mask] < 1:
            return False
        if w[mask] <= 1 and not v[mask] <= 1:
            return False
    return True


@dataclass(frozen=True)
class ForbiddenFamily:
    """Forbidden subsets (theta_I > 1) and their inclusion-minimal members, as bitmasks."""

    m: int
    all: frozenset[int]
    minimal: frozenset[int] = field(default=frozenset())

    def subsets(self, which: str = "all") -> list[tuple[int, ...]]:
        masks = self.all if which == "all" else self.minimal
        return sorted((members(mk) for mk in masks), key=lambda J: (len(J), J))


def forbidden(theta: Stability) -> ForbiddenFamily:
    vals = theta.subset_values()
    m = theta.m
    allf = [mask for mask in range(1, 1 << m) if vals[mask] > 1]
    allset = set(allf)
    minimal = []
    positive = all(w > 0 for w in theta.weights)
    for mask in allf:
        # with positive weights forbidden-ness is monotone, so dropping one
        # element at a time suffices; otherwise scan every proper submask
        if positive:
            ok = all((mask & ~(1 << i)) not in allset for i in range(m) if mask >> i & 1)
        else:
            ok = not any(sub in allset for sub in _proper_submasks(mask))
        if ok:
            minimal.append(mask)
    return ForbiddenFamily(m, frozenset(allf), frozenset(minimal))


def _proper_submasks(mask: int):
    sub = (mask - 1) & mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def canonical(m: int) -> Stability:
    if m < 3:
        raise StabilityError("need m >= 3")
    return Stability(tuple(Fraction(2, m) for _ in range(m)))


def epsilon_bound(n: int) -> Fraction:
    return Fraction(2 * n - 1, n * (n + 1))


def default_epsilon(n: int) -> Fraction:
    return epsilon_bound(n) / 2


def theta_pm(n: int, sign: int | str, epsilon=None) -> Stability:
    """The deformations theta^+ (sign=+1) and theta^- (sign=-1) of canonical(2n)."""
    if n < 2:
        raise StabilityError("need n >= 2")
    if isinstance(sign, str):
        sign = {"+": 1, "plus": 1, "-": -1, "minus": -1}[sign]
    if sign not in (1, -1):
        raise StabilityError("sign must be +1 or -1")
    eps = default_epsilon(n) if epsilon is None else parse_rational(epsilon) if isinstance(epsilon, str) else Fraction(epsilon)
    if not 0 < eps < epsilon_bound(n):
        raise StabilityError(f"epsilon must lie in (0, {epsilon_bound(n)}), got {eps}")
    first = Fraction(1, n) + sign * eps
    rest = Fraction(1, n) - sign * eps / (2 * n - 1)
    return Stability((first,) + (rest,) * (2 * n - 1))


PRESETS = ("canonical", "theta-plus", "theta-minus")


def preset(name: str, m: int, epsilon=None) -> Stability:
    if name == "canonical":
        return canonical(m)
    if name in ("theta-plus", "theta-minus"):
        if m % 2:
            raise StabilityError(f"{name} needs even m, got {m}")
        return theta_pm(m // 2, 1 if name == "theta-plus" else -1, epsilon)
    raise StabilityError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")
