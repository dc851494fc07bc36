"""Integer-composition algebras: extended shuffle, first-entry shift, stuffle.

Compositions with entries >= 0 carry the extended shuffle product, defined
by recursion on the leading entries (leading zeros pop out front, otherwise
both first entries are lowered and re-raised through the shift operator).
Positive compositions additionally carry the stuffle (quasi-shuffle)
product, and two-row symbols extend stuffle to the directional setting used
by regularized MZVs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iter_product

from .core import DomainError, LinComb, bilinear, mixable_shuffle

_ONE = Fraction(1)


@dataclass(frozen=True, slots=True)
class Composition:
    """Finite nonempty sequence of integers >= 0."""

    entries: tuple[int, ...]

    def __post_init__(self):
        if not self.entries:
            raise DomainError("compositions are nonempty")
        if any(e < 0 for e in self.entries):
            raise DomainError(f"composition entries must be >= 0: {self.entries}")

    @property
    def is_positive(self) -> bool:
        return all(e >= 1 for e in self.entries)

    @property
    def is_convergent(self) -> bool:
        """Admissible index of a convergent MZV: positive with first entry >= 2."""
        return self.is_positive and self.entries[0] >= 2

    @property
    def weight(self) -> int:
        return sum(self.entries)

    @property
    def depth(self) -> int:
        return len(self.entries)

    def leading_ones(self) -> int:
        n = 0
        for e in self.entries:
            if e != 1:
                break
            n += 1
        return n

    def sort_key(self):
        return (len(self.entries), self.entries)

    def __str__(self) -> str:
        return "[" + ",".join(str(e) for e in self.entries) + "]"


@dataclass(frozen=True, slots=True)
class BiComposition:
    """Two-row symbol: integer top row, non-negative rational bottom row."""

    s_row: tuple[int, ...]
    r_row: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.s_row:
            raise DomainError("bi-compositions are nonempty")
        if len(self.s_row) != len(self.r_row):
            raise DomainError("rows must have equal length")
        object.__setattr__(self, "r_row", tuple(Fraction(r) for r in self.r_row))
        if any(r < 0 for r in self.r_row):
            raise DomainError(f"direction entries must be >= 0: {self.r_row}")

    @classmethod
    def make(cls, s_row, r_row) -> "BiComposition":
        return cls(tuple(int(s) for s in s_row), tuple(Fraction(r) for r in r_row))

    @property
    def depth(self) -> int:
        return len(self.s_row)

    def s_composition(self) -> Composition:
        return Composition(self.s_row)

    def sort_key(self):
        return (len(self.s_row), self.s_row, self.r_row)

    def __str__(self) -> str:
        top = ",".join(str(s) for s in self.s_row)
        bottom = ",".join(str(r) for r in self.r_row)
        return f"[{top} | {bottom}]"


def raise_first(s: Composition) -> Composition:
    """Add 1 to the first entry; the Rota-Baxter operator of the shuffle side."""
    return Composition((s.entries[0] + 1,) + s.entries[1:])


@lru_cache(maxsize=8192)
def _shuffle_entries(s: tuple[int, ...], t: tuple[int, ...]) -> LinComb[tuple[int, ...]]:
    memo: dict[tuple, dict[tuple, Fraction]] = {}

    def rec(x: tuple[int, ...], y: tuple[int, ...]) -> dict[tuple[int, ...], Fraction]:
        if not x:
            return {y: _ONE}
        if not y:
            return {x: _ONE}
        key = (x, y)
        cached = memo.get(key)
        if cached is not None:
            return cached
        out: dict[tuple[int, ...], Fraction] = {}
        if x[0] == 0:
            for tail, c in rec(x[1:], y).items():
                k = (0,) + tail
                out[k] = out.get(k, 0) + c
        elif y[0] == 0:
            for tail, c in rec(x, y[1:]).items():
                k = (0,) + tail
                out[k] = out.get(k, 0) + c
        else:
            for tail, c in rec((x[0] - 1,) + x[1:], y).items():
                k = (tail[0] + 1,) + tail[1:]
                out[k] = out.get(k, 0) + c
            for tail, c in rec(x, (y[0] - 1,) + y[1:]).items():
                k = (tail[0] + 1,) + tail[1:]
                out[k] = out.get(k, 0) + c
        memo[key] = out
        return out

    return LinComb(rec(s, t))


def shuffle(s: Composition, t: Composition) -> LinComb[Composition]:
    """Extended shuffle on compositions with entries >= 0.

    Leading zeros are pulled out front; otherwise each factor donates its
    lowered first entry and the shift operator restores it.  On positive
    compositions this is exactly the word shuffle transported through the
    word/composition bijection.
    """
    return _shuffle_entries(s.entries, t.entries).map_basis(Composition)


def shuffle_lin(a: LinComb[Composition], b: LinComb[Composition]) -> LinComb[Composition]:
    return bilinear(shuffle, a, b)


def _add_entries(x: int, y: int) -> int:
    return x + y


@lru_cache(maxsize=8192)
def _stuffle_entries(s: tuple[int, ...], t: tuple[int, ...]) -> LinComb[tuple[int, ...]]:
    return mixable_shuffle(s, t, weight=1, merge=_add_entries)


def stuffle(s: Composition, t: Composition) -> LinComb[Composition]:
    """Quasi-shuffle product on positive compositions (merged entries add)."""
    if not (s.is_positive and t.is_positive):
        raise DomainError(f"stuffle is defined on positive compositions: {s}, {t}")
    return _stuffle_entries(s.entries, t.entries).map_basis(Composition)


def stuffle_lin(a: LinComb[Composition], b: LinComb[Composition]) -> LinComb[Composition]:
    return bilinear(stuffle, a, b)


def _merge_pairs(a: tuple[int, Fraction], b: tuple[int, Fraction]) -> tuple[int, Fraction]:
    return (a[0] + b[0], a[1] + b[1])


def bistuffle(u: BiComposition, v: BiComposition) -> LinComb[BiComposition]:
    """Quasi-shuffle of two-row symbols; merged columns add componentwise."""
    a = tuple(zip(u.s_row, u.r_row))
    b = tuple(zip(v.s_row, v.r_row))
    raw = mixable_shuffle(a, b, weight=1, merge=_merge_pairs)
    return raw.map_basis(
        lambda cols: BiComposition(tuple(s for s, _ in cols), tuple(r for _, r in cols))
    )


def bistuffle_lin(a: LinComb[BiComposition], b: LinComb[BiComposition]) -> LinComb[BiComposition]:
    return bilinear(bistuffle, a, b)


def ones(n: int) -> Composition:
    if n < 1:
        raise DomainError("need n >= 1 ones")
    return Composition((1,) * n)


def positive_compositions(weight: int) -> list[Composition]:
    """All positive compositions of the given weight, in canonical order."""
    if weight < 1:
        return []
    out: list[Composition] = []

    def build(remaining: int, prefix: tuple[int, ...]):
        if remaining == 0:
            out.append(Composition(prefix))
            return
        for first in range(1, remaining + 1):
            build(remaining - first, prefix + (first,))

    build(weight, ())
    return sorted(out, key=Composition.sort_key)


def convergent_compositions(weight: int) -> list[Composition]:
    """All convergent compositions of the given weight, in canonical order."""
    return [s for s in positive_compositions(weight) if s.is_convergent]


def nonnegative_compositions(max_weight: int, max_depth: int) -> list[Composition]:
    """Compositions with entries >= 0, bounded entry sum and bounded depth."""
    out: list[Composition] = []
    for length in range(1, max_depth + 1):
        for entries in iter_product(range(max_weight + 1), repeat=length):
            if sum(entries) <= max_weight:
                out.append(Composition(entries))
    return sorted(out, key=Composition.sort_key)
