"""Exact algebraic kernel shared by every product in the package.

Everything here is coefficient-exact: linear combinations over an arbitrary
hashable basis with ``Fraction`` coefficients, polynomials in the formal
symbol T over a caller-chosen coefficient ring, and the generic mixable
shuffle recursion that the word shuffle, the composition shuffle and both
quasi-shuffle products instantiate.

Values are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Callable, Generic, Hashable, Iterable, Iterator, Mapping, TypeVar

B = TypeVar("B", bound=Hashable)
R = TypeVar("R")

Scalar = Fraction | int

_ZERO = Fraction(0)
_ONE = Fraction(1)


class DomainError(ValueError):
    """An operation was applied outside its declared domain."""


class MergeUndefinedError(DomainError):
    """A weighted shuffle tried to merge a pair of atoms it cannot combine."""


class LinComb(Generic[B]):
    """Finite formal sum of basis elements with nonzero rational coefficients.

    Zero coefficients are pruned on construction, so equality is term-set
    equality. Instances never mutate; all arithmetic returns fresh objects.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[B, Scalar] | Iterable[tuple[B, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[B, Fraction] = {}
        for basis, coeff in items:
            c = acc.get(basis, _ZERO) + Fraction(coeff)
            if c:
                acc[basis] = c
            else:
                acc.pop(basis, None)
        self._terms = acc

    @classmethod
    def zero(cls) -> "LinComb[B]":
        return cls()

    @classmethod
    def single(cls, basis: B, coeff: Scalar = 1) -> "LinComb[B]":
        return cls({basis: coeff})

    def items(self) -> Iterator[tuple[B, Fraction]]:
        return iter(self._terms.items())

    def support(self) -> Iterator[B]:
        return iter(self._terms)

    def coeff(self, basis: B) -> Fraction:
        return self._terms.get(basis, _ZERO)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinComb):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None  # type: ignore[assignment]  # mutable-dict backed; not hashable

    def __add__(self, other: "LinComb[B]") -> "LinComb[B]":
        return self.combine(other, _ONE)

    def __sub__(self, other: "LinComb[B]") -> "LinComb[B]":
        return self.combine(other, -_ONE)

    def __neg__(self) -> "LinComb[B]":
        return self.scale(-_ONE)

    def __rmul__(self, scalar: Scalar) -> "LinComb[B]":
        return self.scale(scalar)

    def scale(self, scalar: Scalar) -> "LinComb[B]":
        s = Fraction(scalar)
        if not s:
            return LinComb()
        out: LinComb[B] = LinComb.__new__(LinComb)
        out._terms = {b: c * s for b, c in self._terms.items()}
        return out

    def combine(self, other: "LinComb[B]", scalar: Scalar) -> "LinComb[B]":
        """Return ``self + scalar * other`` with zero terms pruned."""
        s = Fraction(scalar)
        acc = dict(self._terms)
        if s:
            for basis, coeff in other._terms.items():
                c = acc.get(basis, _ZERO) + coeff * s
                if c:
                    acc[basis] = c
                else:
                    acc.pop(basis, None)
        out: LinComb[B] = LinComb.__new__(LinComb)
        out._terms = acc
        return out

    def map_basis(self, f: Callable[[B], B]) -> "LinComb[B]":
        """Push the sum through a basis map, collecting collisions."""
        return LinComb((f(b), c) for b, c in self._terms.items())

    def map_linear(self, f: Callable[[B], "LinComb"]) -> "LinComb":
        """Extend a basis-to-sum map linearly over self."""
        acc: dict = {}
        for basis, coeff in self._terms.items():
            for b2, c2 in f(basis)._terms.items():
                c = acc.get(b2, _ZERO) + coeff * c2
                if c:
                    acc[b2] = c
                else:
                    acc.pop(b2, None)
        out: LinComb = LinComb.__new__(LinComb)
        out._terms = acc
        return out

    def coefficient_sum(self) -> Fraction:
        return sum(self._terms.values(), _ZERO)

    def sorted_items(self) -> list[tuple[B, Fraction]]:
        try:
            return sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0]))
        except TypeError:
            return list(self._terms.items())

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for basis, coeff in self.sorted_items():
            if coeff == 1:
                lead = ""
            elif coeff == -1:
                lead = "-"
            else:
                lead = f"{coeff}*"
            parts.append(f"{lead}{basis}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"LinComb({self._terms!r})"


def _sort_key(basis):
    key = getattr(basis, "sort_key", None)
    if key is not None:
        return key() if callable(key) else key
    if isinstance(basis, tuple):
        return (len(basis), basis)
    return basis


def combine(a: LinComb[B], b: LinComb[B], scalar: Scalar) -> LinComb[B]:
    """``a + scalar * b``; module-level spelling of :meth:`LinComb.combine`."""
    return a.combine(b, scalar)


def bilinear(
    product_on_basis: Callable[[B, B], LinComb[B]],
    a: LinComb[B],
    b: LinComb[B],
) -> LinComb[B]:
    """Extend a basis-pair product bilinearly to linear combinations."""
    acc: dict[B, Fraction] = {}
    for u, cu in a.items():
        for v, cv in b.items():
            scale = cu * cv
            for w, cw in product_on_basis(u, v).items():
                c = acc.get(w, _ZERO) + scale * cw
                if c:
                    acc[w] = c
                else:
                    acc.pop(w, None)
    out: LinComb[B] = LinComb.__new__(LinComb)
    out._terms = acc
    return out


def mixable_shuffle(
    a: tuple,
    b: tuple,
    weight: Scalar = 0,
    merge: Callable | None = None,
) -> LinComb[tuple]:
    """Mixable shuffle of two atom sequences at the given weight.

    Recursion on the leading atoms: keep the head of ``a``, keep the head of
    ``b``, and (when the weight is nonzero) merge both heads into a single
    atom scaled by the weight.  The empty sequence acts as the recursion
    unit; it can appear in results only when an input is empty.  Weight 0
    never calls ``merge``, so the plain shuffle works on atoms with no
    product at all.  A partial ``merge`` signals unsupported pairs by
    raising :class:`MergeUndefinedError`.
    """
    lam = Fraction(weight)
    memo: dict[tuple[tuple, tuple], dict[tuple, Fraction]] = {}

    def rec(x: tuple, y: tuple) -> dict[tuple, Fraction]:
        if not x:
            return {y: _ONE}
        if not y:
            return {x: _ONE}
        key = (x, y)
        cached = memo.get(key)
        if cached is not None:
            return cached
        out: dict[tuple, Fraction] = {}
        head_x, head_y = (x[0],), (y[0],)
        for tail, c in rec(x[1:], y).items():
            t = head_x + tail
            out[t] = out.get(t, _ZERO) + c
        for tail, c in rec(x, y[1:]).items():
            t = head_y + tail
            out[t] = out.get(t, _ZERO) + c
        if lam:
            if merge is None:
                raise MergeUndefinedError(
                    "weighted shuffle requires a merge operation on atoms"
                )
            merged = (merge(x[0], y[0]),)
            for tail, c in rec(x[1:], y[1:]).items():
                t = merged + tail
                c = c * lam
                if c:
                    out[t] = out.get(t, _ZERO) + c
        out = {t: c for t, c in out.items() if c}
        memo[key] = out
        return out

    return LinComb(rec(tuple(a), tuple(b)))


class TPoly(Generic[R]):
    """Sparse polynomial in the formal symbol T over a coefficient ring R.

    R only needs ``+``, ``*`` and truthiness of zero (``Fraction``, ``float``,
    mpmath floats and :class:`~mzvkit.regularization.ZetaExpr` all qualify).
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, R] | Iterable[tuple[int, R]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, R] = {}
        for deg, c in items:
            if deg < 0:
                raise DomainError("T-polynomials have non-negative degrees")
            if deg in acc:
                c = acc[deg] + c
            if c:
                acc[deg] = c
            else:
                acc.pop(deg, None)
        self._coeffs = acc

    @classmethod
    def zero(cls) -> "TPoly[R]":
        return cls()

    @classmethod
    def constant(cls, c: R) -> "TPoly[R]":
        return cls({0: c} if c else {})

    @classmethod
    def t_power(cls, n: int, c: R) -> "TPoly[R]":
        return cls({n: c} if c else {})

    def coeff(self, deg: int, default=0):
        return self._coeffs.get(deg, default)

    def items(self) -> Iterator[tuple[int, R]]:
        return iter(self._coeffs.items())

    def degree(self) -> int:
        """Degree of a nonzero polynomial; -1 for the zero polynomial."""
        return max(self._coeffs, default=-1)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "TPoly[R]") -> "TPoly[R]":
        acc = dict(self._coeffs)
        for deg, c in other._coeffs.items():
            if deg in acc:
                c = acc[deg] + c
            if c:
                acc[deg] = c
            else:
                acc.pop(deg, None)
        out: TPoly[R] = TPoly.__new__(TPoly)
        out._coeffs = acc
        return out

    def __neg__(self) -> "TPoly[R]":
        return self.map_coeffs(lambda c: -c)

    def __sub__(self, other: "TPoly[R]") -> "TPoly[R]":
        return self + (-other)

    def __mul__(self, other: "TPoly[R]") -> "TPoly[R]":
        acc: dict[int, R] = {}
        for d1, c1 in self._coeffs.items():
            for d2, c2 in other._coeffs.items():
                d = d1 + d2
                c = c1 * c2
                if d in acc:
                    c = acc[d] + c
                if c:
                    acc[d] = c
                else:
                    acc.pop(d, None)
        out: TPoly[R] = TPoly.__new__(TPoly)
        out._coeffs = acc
        return out

    def scale(self, scalar) -> "TPoly[R]":
        if not scalar:
            return TPoly()
        return self.map_coeffs(lambda c: c * scalar)

    def map_coeffs(self, f) -> "TPoly":
        return TPoly((deg, f(c)) for deg, c in self._coeffs.items())

    def __call__(self, t_value):
        """Evaluate at a concrete T value (Horner is overkill at these sizes)."""
        total = None
        for deg, c in self._coeffs.items():
            term = c * t_value**deg
            total = term if total is None else total + term
        return 0 if total is None else total

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for deg in sorted(self._coeffs, reverse=True):
            c = self._coeffs[deg]
            mono = "" if deg == 0 else ("T" if deg == 1 else f"T^{deg}")
            text = str(c)
            if " " in text or "+" in text.strip("-"):
                text = f"({text})"
            if mono:
                if text == "1":
                    text = mono
                elif text == "-1":
                    text = f"-{mono}"
                else:
                    text = f"{text}*{mono}"
            parts.append(text)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"TPoly({self._coeffs!r})"


def matrix_rank(rows: Iterable[Iterable]) -> int:
    """Exact rank over the rationals of a matrix given as row iterables.

    Integer matrices take a fraction-free elimination path (cross-multiplied
    row updates with gcd reduction) which is much faster than Fraction
    arithmetic on the dense graded matrices this package produces.
    """
    mat = [list(row) for row in rows]
    if not mat or not mat[0]:
        return 0
    if all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)
           for row in mat for x in row):
        return _int_rank([[int(x) for x in row] for row in mat])
    return _fraction_rank([[Fraction(x) for x in row] for row in mat])


def _int_rank(mat: list[list[int]]) -> int:
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for r in range(rank, len(mat)):
            if mat[r][col]:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        pivot = mat[rank]
        p = pivot[col]
        for r in range(rank + 1, len(mat)):
            row = mat[r]
            f = row[col]
            if not f:
                continue
            new = [p * a - f * b for a, b in zip(row, pivot)]
            g = 0
            for v in new:
                g = gcd(g, v)
                if g == 1:
                    break
            if g > 1:
                new = [v // g for v in new]
            mat[r] = new
        rank += 1
        if rank == len(mat):
            break
    return rank


def _fraction_rank(mat: list[list[Fraction]]) -> int:
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for r in range(rank, len(mat)):
            if mat[r][col]:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        pivot = mat[rank]
        inv = 1 / pivot[col]
        pivot = [x * inv for x in pivot]
        mat[rank] = pivot
        for r in range(rank + 1, len(mat)):
            row = mat[r]
            f = row[col]
            if f:
                mat[r] = [a - f * b for a, b in zip(row, pivot)]
        rank += 1
        if rank == len(mat):
            break
    return rank
