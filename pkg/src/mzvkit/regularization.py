"""Regularized MZVs as exact T-polynomials, relation generators, and the
rho/beta change of regularization.

The two regularization maps write any positive composition as a polynomial
in T with coefficients in the ring of formal convergent-MZV symbols: T is
the adjoined divergent depth-one value, and the reduction peels leading
1-entries through the product with [1] (shuffle product for one map,
stuffle for the other).  No relations among symbols are applied
symbolically; identity checks happen numerically downstream.

Relation generators emit the double shuffle and extended double shuffle
sets in a deterministic order, and an exact rank routine turns them into
upper bounds for the weight-graded dimension.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

from .compositions import (
    Composition,
    convergent_compositions,
    ones,
    shuffle,
    stuffle,
)
from .core import DomainError, LinComb, TPoly, matrix_rank
from .numerics import DEFAULT_CTX, PrecisionContext, zeta_pos


@dataclass(frozen=True, slots=True)
class MZVSymbol:
    """Formal symbol for a convergent MZV."""

    index: Composition

    def __post_init__(self):
        if not self.index.is_convergent:
            raise DomainError(f"MZV symbols need convergent indices: {self.index}")

    @property
    def weight(self) -> int:
        return self.index.weight

    def sort_key(self):
        return self.index.sort_key()

    def __str__(self) -> str:
        return "ζ(" + ",".join(str(e) for e in self.index.entries) + ")"


Monomial = tuple[MZVSymbol, ...]


class ZetaExpr:
    """Commutative polynomial in MZV symbols with exact rational coefficients.

    Monomials are multisets of symbols kept as sorted tuples; zero
    coefficients are pruned so equality is structural.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[Monomial, Fraction] | Iterable[tuple[Monomial, Fraction]] = ()):
        items = terms.items() if isinstance(terms, dict) else terms
        acc: dict[Monomial, Fraction] = {}
        for mono, coeff in items:
            mono = tuple(sorted(mono, key=MZVSymbol.sort_key))
            c = acc.get(mono, Fraction(0)) + Fraction(coeff)
            if c:
                acc[mono] = c
            else:
                acc.pop(mono, None)
        self._terms = acc

    @classmethod
    def scalar(cls, c) -> "ZetaExpr":
        return cls({(): Fraction(c)})

    @classmethod
    def one(cls) -> "ZetaExpr":
        return cls.scalar(1)

    @classmethod
    def symbol(cls, sym: MZVSymbol | Composition) -> "ZetaExpr":
        if isinstance(sym, Composition):
            sym = MZVSymbol(sym)
        return cls({(sym,): Fraction(1)})

    def monomials(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def sorted_monomials(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(
            self._terms.items(),
            key=lambda kv: (len(kv[0]), [s.sort_key() for s in kv[0]]),
        )

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZetaExpr):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "ZetaExpr") -> "ZetaExpr":
        acc = dict(self._terms)
        for mono, coeff in other._terms.items():
            c = acc.get(mono, Fraction(0)) + coeff
            if c:
                acc[mono] = c
            else:
                acc.pop(mono, None)
        out = ZetaExpr.__new__(ZetaExpr)
        out._terms = acc
        return out

    def __neg__(self) -> "ZetaExpr":
        out = ZetaExpr.__new__(ZetaExpr)
        out._terms = {m: -c for m, c in self._terms.items()}
        return out

    def __sub__(self, other: "ZetaExpr") -> "ZetaExpr":
        return self + (-other)

    def __mul__(self, other) -> "ZetaExpr":
        if isinstance(other, ZetaExpr):
            acc: dict[Monomial, Fraction] = {}
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    mono = tuple(sorted(m1 + m2, key=MZVSymbol.sort_key))
                    c = acc.get(mono, Fraction(0)) + c1 * c2
                    if c:
                        acc[mono] = c
                    else:
                        acc.pop(mono, None)
            out = ZetaExpr.__new__(ZetaExpr)
            out._terms = acc
            return out
        scalar = Fraction(other)
        if not scalar:
            return ZetaExpr()
        out = ZetaExpr.__new__(ZetaExpr)
        out._terms = {m: c * scalar for m, c in self._terms.items()}
        return out

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, coeff in self.sorted_monomials():
            factors = "*".join(str(s) for s in mono)
            if not factors:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(factors)
            elif coeff == -1:
                parts.append(f"-{factors}")
            else:
                parts.append(f"{coeff}*{factors}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"ZetaExpr({self._terms!r})"


RegPoly = TPoly  # T-polynomials with ZetaExpr coefficients


def _t_times(p: TPoly) -> TPoly:
    return TPoly((deg + 1, c) for deg, c in p.items())


def shuffle_regularize(s: Composition) -> TPoly:
    """Shuffle-regularized value of a positive composition, in ZetaExpr[T].

    Convergent indices map to their own symbol, [1] maps to T, and leading
    1-entries peel off through the shuffle product with [1]: that product
    contains the input with coefficient equal to its leading-ones count and
    otherwise only terms with strictly fewer leading ones.
    """
    return _regularize(s, _SHUFFLE)


def stuffle_regularize(s: Composition) -> TPoly:
    """Stuffle-regularized value; same contract with the quasi-shuffle product."""
    return _regularize(s, _STUFFLE)


_SHUFFLE = "shuffle"
_STUFFLE = "stuffle"
_PRODUCTS = {_SHUFFLE: shuffle, _STUFFLE: stuffle}


def _regularize(s: Composition, kind: str) -> TPoly:
    if not s.is_positive:
        raise DomainError(f"regularization is defined on positive compositions: {s}")
    return _regularize_cached(s.entries, kind)


@lru_cache(maxsize=4096)
def _regularize_cached(entries: tuple[int, ...], kind: str) -> TPoly:
    s = Composition(entries)
    if s.is_convergent:
        return TPoly.constant(ZetaExpr.symbol(s))
    if entries == (1,):
        return TPoly.t_power(1, ZetaExpr.one())
    count = s.leading_ones()
    base = Composition((1,) * (count - 1) + entries[count:])
    expansion = _PRODUCTS[kind](ones(1), base)
    lead = expansion.coeff(s)
    if lead != count:
        raise AssertionError(f"peeling invariant broken at {s}: {lead} != {count}")
    out = _t_times(_regularize_cached(base.entries, kind))
    for term, coeff in expansion.items():
        if term == s:
            continue
        out = out + _regularize_cached(term.entries, kind).map_coeffs(lambda c: c * (-coeff))
    return out.map_coeffs(lambda c: c * Fraction(1, count))


def leading_ones_decomposition(
    ell: int, s: Composition
) -> list[tuple[int, int, Composition]]:
    """Write [{1}^ell, s] as an integer combination of [{1}^i] * [tail].

    Returns (coefficient, ones-count, convergent tail) triples: the stuffle
    of the ones block against the input contains the target with coefficient
    one, everything else has fewer leading ones and recurses.
    """
    if ell < 0:
        raise DomainError("need ell >= 0")
    if not s.is_convergent:
        raise DomainError(f"decomposition needs a convergent tail: {s}")
    acc: dict[tuple[int, tuple[int, ...]], int] = {}
    for coeff, i, tail in _ones_decomp(ell, s.entries):
        key = (i, tail)
        acc[key] = acc.get(key, 0) + coeff
    return [
        (c, i, Composition(tail))
        for (i, tail), c in sorted(acc.items())
        if c
    ]


@lru_cache(maxsize=4096)
def _ones_decomp(ell: int, tail: tuple[int, ...]) -> tuple[tuple[int, int, tuple[int, ...]], ...]:
    if ell == 0:
        return ((1, 0, tail),)
    target = (1,) * ell + tail
    out: list[tuple[int, int, tuple[int, ...]]] = [(1, ell, tail)]
    for term, coeff in stuffle(ones(ell), Composition(tail)).items():
        if term.entries == target:
            continue
        i = term.leading_ones()
        rest = term.entries[i:]
        if not (rest and rest[0] >= 2):
            raise AssertionError(f"unexpected non-convergent remainder {term}")
        c = int(coeff)
        for sub_c, sub_i, sub_tail in _ones_decomp(i, rest):
            out.append((-c * sub_c, sub_i, sub_tail))
    return tuple(out)


@dataclass(frozen=True, slots=True)
class Relation:
    """A vanishing combination of positive compositions, tagged with its source."""

    terms: LinComb
    weight: int
    source: tuple[Composition, Composition]

    def __post_init__(self):
        if not self.terms:
            raise DomainError("relations are nonzero")
        for basis, _ in self.terms.items():
            if basis.weight != self.weight or not basis.is_positive:
                raise DomainError(f"relation not weight-{self.weight} homogeneous: {basis}")

    def __str__(self) -> str:
        return str(self.terms)


def double_shuffle_relations(weight: int) -> list[Relation]:
    """Shuffle-minus-stuffle differences over convergent pairs of the weight."""
    if weight < 2:
        raise DomainError("relations start at weight 2")
    out: list[Relation] = []
    for w1, w2 in _convergent_pairs(weight):
        diff = shuffle(w1, w2) - stuffle(w1, w2)
        if diff:
            out.append(Relation(diff, weight, (w1, w2)))
    return out


def extended_double_shuffle_relations(weight: int) -> list[Relation]:
    """Double shuffle relations plus the depth-one divergent pairings.

    The extra generators pair [1] against every convergent composition one
    weight down; the lone non-convergent term [1, w2] appears with
    coefficient one in both products, so the difference stays convergent.
    """
    out = double_shuffle_relations(weight)
    z1 = ones(1)
    for w2 in convergent_compositions(weight - 1):
        diff = shuffle(z1, w2) - stuffle(z1, w2)
        if diff:
            out.append(Relation(diff, weight, (z1, w2)))
    return out


def _convergent_pairs(weight: int) -> Iterator[tuple[Composition, Composition]]:
    for half in range(2, weight - 1):
        if half > weight - half:
            break
        left = convergent_compositions(half)
        right = convergent_compositions(weight - half)
        for i, w1 in enumerate(left):
            start = i if half == weight - half else 0
            for w2 in right[start:]:
                yield w1, w2


def relation_rank(weight: int) -> tuple[int, int]:
    """(exact rank of the extended relation set, upper bound on the graded dimension).

    The bound is the number of convergent compositions of the weight minus
    the rank of the relations inside their span, computed by exact
    elimination over the rationals.
    """
    basis = convergent_compositions(weight)
    index = {s: i for i, s in enumerate(basis)}
    rows = []
    for rel in extended_double_shuffle_relations(weight):
        row = [Fraction(0)] * len(basis)
        for term, coeff in rel.terms.items():
            if term not in index:
                raise AssertionError(f"relation escapes the convergent span: {term}")
            row[index[term]] = coeff
        rows.append(row)
    rank = matrix_rank(rows) if rows else 0
    return rank, len(basis) - rank


# ---------------------------------------------------------------------------
# the rho / beta maps


@dataclass(frozen=True)
class RhoMap:
    """Coefficient tables of the regularization-exchange map and its inverse.

    gamma holds the Taylor coefficients of exp(sum_{n>=2} (-1)^n zeta(n) u^n/n),
    delta the coefficients of the reciprocal series.
    """

    gamma: tuple
    delta: tuple
    ctx: PrecisionContext

    @property
    def order(self) -> int:
        return len(self.gamma) - 1


def build_rho(order: int, ctx: PrecisionContext = DEFAULT_CTX) -> RhoMap:
    if order < 0:
        raise DomainError("order must be >= 0")
    zero = zeta_pos(2, ctx) * 0
    series = [zero] * (order + 1)
    for n in range(2, order + 1):
        series[n] = (-1) ** n * zeta_pos(n, ctx) / n
    gamma = [zero + 1]
    for m in range(1, order + 1):
        acc = zero
        for j in range(1, m + 1):
            acc += j * series[j] * gamma[m - j]
        gamma.append(acc / m)
    delta = [zero + 1]
    for m in range(1, order + 1):
        acc = zero
        for j in range(1, m + 1):
            acc -= gamma[j] * delta[m - j]
        delta.append(acc)
    return RhoMap(tuple(gamma), tuple(delta), ctx)


def rho_apply(p: TPoly, rho: RhoMap) -> TPoly:
    """Exchange stuffle-regularized polynomials for shuffle-regularized ones."""
    return _apply_table(p, rho.gamma)


def beta_apply(p: TPoly, rho: RhoMap) -> TPoly:
    """Inverse exchange; uses the reciprocal coefficient table."""
    return _apply_table(p, rho.delta)


def _apply_table(p: TPoly, table) -> TPoly:
    if p.degree() > len(table) - 1:
        raise DomainError(
            f"polynomial degree {p.degree()} exceeds the table order {len(table) - 1}"
        )
    out = TPoly()
    for n, coeff in p.items():
        falling = 1
        for k in range(n + 1):
            out = out + TPoly.t_power(n - k, coeff * table[k] * falling)
            falling *= n - k
    return out


def corollary_check(order: int, ctx: PrecisionContext = DEFAULT_CTX) -> float:
    """Largest coefficient gap in the exponential identity for repeated ones.

    Compares exp(sum (-1)^(n-1) Zst(n) u^n / n) against 1 + sum Zst({1}^n) u^n
    as polynomials in T per power of u, with Zst(1) = T, Zst(n) = zeta(n) for
    n >= 2, and the right side evaluated through the stuffle regularization.
    """
    from .numerics import eval_reg_poly

    if order < 1:
        raise DomainError("order must be >= 1")
    series: list[TPoly] = [TPoly(), TPoly.t_power(1, 1.0)]
    for n in range(2, order + 1):
        series.append(TPoly.constant((-1.0) ** (n - 1) * float(zeta_pos(n, ctx)) / n))
    lhs: list[TPoly] = [TPoly.constant(1.0)]
    for m in range(1, order + 1):
        acc = TPoly()
        for j in range(1, m + 1):
            acc = acc + series[j].scale(j) * lhs[m - j]
        lhs.append(acc.scale(1.0 / m))
    worst = 0.0
    for m in range(1, order + 1):
        rhs = eval_reg_poly(stuffle_regularize(ones(m)), ctx)
        diff = lhs[m] - rhs
        for _, c in diff.items():
            worst = max(worst, abs(float(c)))
    return worst


# ---------------------------------------------------------------------------
# export formats


def fraction_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def relations_to_csv(relations: Iterable[Relation]) -> str:
    lines = ["weight,source_pair,term_composition,coefficient"]
    for rel in relations:
        pair = f"{rel.source[0]};{rel.source[1]}"
        for term, coeff in rel.terms.sorted_items():
            lines.append(f"{rel.weight},{pair},{term},{fraction_str(coeff)}")
    return "\n".join(lines) + "\n"


def relations_to_json(relations: Iterable[Relation]) -> str:
    data = [
        {
            "weight": rel.weight,
            "source_pair": [list(rel.source[0].entries), list(rel.source[1].entries)],
            "terms": [
                {"composition": list(term.entries), "coeff": fraction_str(coeff)}
                for term, coeff in rel.terms.sorted_items()
            ],
        }
        for rel in relations
    ]
    return json.dumps(data, indent=2)


def reg_poly_to_json(p: TPoly) -> str:
    data = {
        f"T^{deg}": {
            "monomials": [
                {
                    "symbols": [list(sym.index.entries) for sym in mono],
                    "coeff": fraction_str(coeff),
                }
                for mono, coeff in expr.sorted_monomials()
            ]
        }
        for deg, expr in sorted(p.items())
    }
    return json.dumps(data, indent=2)


def reg_poly_str(p: TPoly) -> str:
    """Human form, highest degree first, e.g. ``ζ(2)*T - 2*ζ(2,1)``."""
    if not p:
        return "0"
    parts: list[str] = []
    for deg in sorted((d for d, _ in p.items()), reverse=True):
        expr = p.coeff(deg)
        mono = "" if deg == 0 else ("T" if deg == 1 else f"T^{deg}")
        text = str(expr)
        many_terms = len(list(expr.monomials())) > 1
        if mono:
            if many_terms:
                text = f"({text})*{mono}"
            elif text == "1":
                text = mono
            elif text == "-1":
                text = f"-{mono}"
            else:
                text = f"{text}*{mono}"
        parts.append(text)
    return " + ".join(parts).replace("+ -", "- ")
