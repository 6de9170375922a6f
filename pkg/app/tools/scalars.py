"""
Exact field arithmetic and dense linear algebra.

Scalars are sympy domain elements: QQ for the rationals and GF(p) for prime
fields (residues kept in [0, p)). FieldSpec selects the field and performs
checked arithmetic; the hot paths elsewhere in the toolkit use the elements'
own operators. ExtensionField adds F_{p^k} (built on sympy's galoistools) for
finite-field scanning.

The linear algebra here is written against a small field protocol (zero, one,
inv and element operators) so the same row reduction serves QQ, GF(p) and
F_{p^k}. Pivoting is deterministic: first nonzero entry, columns left to right.
"""

import itertools
import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Any, Iterator, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, model_validator
from sympy import isprime
from sympy.polys.domains import GF, QQ, ZZ
from sympy.polys.galoistools import (
    gf_add,
    gf_gcdex,
    gf_irreducible_p,
    gf_mul,
    gf_neg,
    gf_rem,
    gf_strip,
    gf_sub,
)

from ..errors import DimensionMismatch, DivisionByZero, FieldMismatch, ParseError

Scalar = Any

_SCALAR_PATTERN = re.compile(r"^\s*([+-]?)\s*(\d+)\s*(?:/\s*(\d+))?\s*$")


@lru_cache(maxsize=None)
def _domain(kind: str, p: Optional[int]):
    if kind == "rationals":
        return QQ
    return GF(p, symmetric=False)


class FieldSpec(BaseModel):
    """The coefficient field: the rationals or a prime field F_p with p odd."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["rationals", "prime"] = "rationals"
    p: Optional[int] = None

    @model_validator(mode="after")
    def _check_characteristic(self) -> "FieldSpec":
        if self.kind == "rationals":
            if self.p is not None:
                raise ValueError("the rationals take no modulus")
            return self
        if self.p is None or not isprime(self.p):
            raise ValueError(f"prime field needs a prime modulus, got {self.p}")
        if self.p == 2:
            raise ValueError("characteristic 2 is not supported (char(K) != 2 is required)")
        return self

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(kind="rationals")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(kind="prime", p=p)

    @property
    def domain(self):
        return _domain(self.kind, self.p)

    @property
    def is_prime_field(self) -> bool:
        return self.kind == "prime"

    @property
    def label(self) -> str:
        return "QQ" if self.kind == "rationals" else f"GF({self.p})"

    @property
    def zero(self) -> Scalar:
        return self.domain.zero

    @property
    def one(self) -> Scalar:
        return self.domain.one

    # construction and text form

    def convert(self, value: Any) -> Scalar:
        """Bring an int, a fraction-like value or a scalar string into this field."""
        if isinstance(value, str):
            return self.parse(value)
        if self.domain.of_type(value):
            return value
        if isinstance(value, int):
            return self.domain(value)
        numerator = getattr(value, "numerator", None)
        denominator = getattr(value, "denominator", None)
        if callable(numerator):
            # sympy Rational exposes p and q as attributes and numerator() as a method
            numerator, denominator = value.p, value.q
        if numerator is None or denominator is None:
            raise FieldMismatch(f"cannot convert {value!r} into {self.label}")
        return self.fraction(int(numerator), int(denominator))

    def fraction(self, numerator: int, denominator: int = 1) -> Scalar:
        if denominator == 0:
            raise DivisionByZero("zero denominator")
        if self.kind == "rationals":
            return self.domain(numerator, denominator)
        den = self.domain(denominator)
        if not den:
            raise DivisionByZero(f"denominator {denominator} is zero in {self.label}")
        return self.domain(numerator) * self.inv(den)

    def parse(self, text: str) -> Scalar:
        """Parse "a", "-a" or "a/b" (decimal digits) into this field."""
        match = _SCALAR_PATTERN.match(text)
        if not match:
            raise ParseError(f"not a scalar: {text!r}", module="scalars")
        sign, numerator, denominator = match.groups()
        value = int(numerator) * (-1 if sign == "-" else 1)
        return self.fraction(value, int(denominator) if denominator else 1)

    def format(self, x: Scalar) -> str:
        if self.kind == "rationals":
            if x.denominator == 1:
                return str(int(x.numerator))
            return f"{int(x.numerator)}/{int(x.denominator)}"
        return str(int(x) % self.p)

    def is_negative(self, x: Scalar) -> bool:
        return self.kind == "rationals" and x < 0

    def residue(self, x: Scalar, p: int) -> int:
        """Image of x in F_p; rationals reduce only when the denominator is invertible."""
        if self.kind == "prime":
            if self.p != p:
                raise FieldMismatch(f"{self.label} does not reduce to GF({p})")
            return int(x) % p
        numerator, denominator = int(x.numerator), int(x.denominator)
        if denominator % p == 0:
            raise DivisionByZero(f"denominator of {self.format(x)} vanishes mod {p}")
        return numerator * pow(denominator, -1, p) % p

    def elements(self) -> Iterator[Scalar]:
        """All field elements in residue order (prime fields only)."""
        if self.kind != "prime":
            raise FieldMismatch("the rationals cannot be enumerated")
        for value in range(self.p):
            yield self.domain(value)

    # checked arithmetic

    def check(self, *values: Scalar) -> None:
        for value in values:
            if not self.domain.of_type(value):
                raise FieldMismatch(f"{value!r} is not an element of {self.label}")

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        self.check(a, b)
        return a + b

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        self.check(a, b)
        return a - b

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        self.check(a, b)
        return a * b

    def neg(self, a: Scalar) -> Scalar:
        self.check(a)
        return -a

    def inv(self, a: Scalar) -> Scalar:
        self.check(a)
        if not a:
            raise DivisionByZero(f"0 has no inverse in {self.label}")
        return self.domain.one / a

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))


def field_add(field: FieldSpec, a: Scalar, b: Scalar) -> Scalar:
    return field.add(a, b)


def field_mul(field: FieldSpec, a: Scalar, b: Scalar) -> Scalar:
    return field.mul(a, b)


def field_inv(field: FieldSpec, a: Scalar) -> Scalar:
    return field.inv(a)


# ---------- extension fields ----------


@dataclass(frozen=True)
class ExtElement:
    """Element of F_{p^k}: residue polynomial in t, coefficients highest degree first."""

    field: "ExtensionField" = dc_field(compare=False, repr=False)
    coeffs: Tuple[int, ...]

    def _wrap(self, coeffs: List[int]) -> "ExtElement":
        return self.field.element(coeffs)

    def _lift(self, other: Any) -> "ExtElement":
        if isinstance(other, ExtElement):
            return other
        return self.field.embed(int(other))

    def __add__(self, other: Any) -> "ExtElement":
        other = self._lift(other)
        return self._wrap(gf_add(list(self.coeffs), list(other.coeffs), self.field.p, ZZ))

    __radd__ = __add__

    def __sub__(self, other: Any) -> "ExtElement":
        other = self._lift(other)
        return self._wrap(gf_sub(list(self.coeffs), list(other.coeffs), self.field.p, ZZ))

    def __rsub__(self, other: Any) -> "ExtElement":
        return self._lift(other) - self

    def __neg__(self) -> "ExtElement":
        return self._wrap(gf_neg(list(self.coeffs), self.field.p, ZZ))

    def __mul__(self, other: Any) -> "ExtElement":
        other = self._lift(other)
        product = gf_mul(list(self.coeffs), list(other.coeffs), self.field.p, ZZ)
        return self._wrap(gf_rem(product, list(self.field.modulus), self.field.p, ZZ))

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __str__(self) -> str:
        return self.field.format(self)


class ExtensionField:
    """
    The finite field F_{p^k} = F_p[t]/(m(t)).

    m is the first monic irreducible polynomial of degree k in enumeration
    order of its coefficient tuples, so the construction is reproducible.
    """

    def __init__(self, p: int, k: int = 1):
        if not isprime(p) or p == 2:
            raise ValueError(f"scan field needs an odd prime, got {p}")
        if k < 1:
            raise ValueError("extension degree must be positive")
        self.p = p
        self.k = k
        self.modulus = self._first_irreducible(p, k)
        self.zero = self.element([])
        self.one = self.element([1])

    @staticmethod
    def _first_irreducible(p: int, k: int) -> Tuple[int, ...]:
        for tail in itertools.product(range(p), repeat=k):
            candidate = [1, *tail]
            if gf_irreducible_p([ZZ(c) for c in candidate], p, ZZ):
                return tuple(candidate)
        raise ValueError(f"no irreducible polynomial of degree {k} over GF({p})")

    @property
    def label(self) -> str:
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"

    @property
    def size(self) -> int:
        return self.p**self.k

    def element(self, coeffs: Sequence[int]) -> ExtElement:
        reduced = gf_strip([ZZ(int(c) % self.p) for c in coeffs])
        if len(reduced) > self.k:
            reduced = gf_rem(reduced, [ZZ(c) for c in self.modulus], self.p, ZZ)
        return ExtElement(self, tuple(int(c) for c in reduced))

    def embed(self, value: int) -> ExtElement:
        return self.element([value])

    def lift(self, field: FieldSpec, x: Scalar) -> ExtElement:
        """Image of a scalar of QQ or GF(p) under reduction mod p."""
        return self.embed(field.residue(x, self.p))

    def elements(self) -> Iterator[ExtElement]:
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield self.element(coeffs)

    def inv(self, a: ExtElement) -> ExtElement:
        if not a:
            raise DivisionByZero(f"0 has no inverse in {self.label}")
        s, _, h = gf_gcdex(list(a.coeffs), list(self.modulus), self.p, ZZ)
        if h != [1]:
            raise DivisionByZero(f"{self.format(a)} is not invertible in {self.label}")
        return self.element(s)

    def format(self, a: ExtElement) -> str:
        if not a.coeffs:
            return "0"
        degree = len(a.coeffs) - 1
        parts = []
        for power, c in zip(range(degree, -1, -1), a.coeffs):
            if not c:
                continue
            if power == 0:
                parts.append(str(c))
            else:
                base = "t" if power == 1 else f"t^{power}"
                parts.append(base if c == 1 else f"{c}{base}")
        return "+".join(parts)


# ---------- dense linear algebra ----------


@dataclass(frozen=True)
class Matrix:
    """Dense matrix stored row-major over one field."""

    field: Any
    rows: int
    cols: int
    entries: Tuple[Scalar, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, field: Any, rows: Sequence[Sequence[Scalar]], cols: Optional[int] = None):
        rows = [tuple(r) for r in rows]
        width = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("rows of unequal length")
        return cls(field, len(rows), width, tuple(x for r in rows for x in r))

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[Scalar, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> List[Tuple[Scalar, ...]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix.from_rows(
            self.field,
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def is_square(self) -> bool:
        return self.rows == self.cols


@dataclass(frozen=True)
class RowEchelon:
    matrix: Matrix
    rank: int
    pivots: Tuple[int, ...]


def row_reduce(m: Matrix, pivot_limit: Optional[int] = None) -> RowEchelon:
    """
    Reduced row-echelon form with deterministic pivoting.

    Args:
        m: Matrix to reduce
        pivot_limit: When given, only the first pivot_limit columns may hold
            pivots; the remaining columns are carried along as an augmented block.

    Returns:
        RowEchelon with the reduced matrix, its rank and the pivot columns
    """
    field = m.field
    rows = [list(r) for r in m.to_rows()]
    limit = m.cols if pivot_limit is None else min(pivot_limit, m.cols)
    pivots: List[int] = []
    r = 0
    for c in range(limit):
        if r == m.rows:
            break
        pivot = next((i for i in range(r, m.rows) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        scale = field.inv(rows[r][c])
        rows[r] = [x * scale for x in rows[r]]
        for i in range(m.rows):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    reduced = Matrix.from_rows(field, rows, cols=m.cols)
    return RowEchelon(reduced, r, tuple(pivots))


def _stack(field: Any, vectors: Sequence[Sequence[Scalar]], length: int) -> Matrix:
    for v in vectors:
        if len(v) != length:
            raise DimensionMismatch(f"vector of length {len(v)} where {length} was expected")
    return Matrix.from_rows(field, vectors, cols=length)


def _common_length(*groups: Sequence[Sequence[Scalar]]) -> int:
    lengths = {len(v) for group in groups for v in group}
    if len(lengths) > 1:
        raise DimensionMismatch(f"vectors of different lengths {sorted(lengths)}")
    return lengths.pop() if lengths else 0


def rank(vectors: Sequence[Sequence[Scalar]], field: Any) -> int:
    if not vectors:
        return 0
    return row_reduce(_stack(field, vectors, _common_length(vectors))).rank


def kernel(m: Matrix) -> List[Tuple[Scalar, ...]]:
    """Basis of {v : m v = 0}, one vector per free column, in column order."""
    echelon = row_reduce(m)
    field = m.field
    pivot_rows = {c: i for i, c in enumerate(echelon.pivots)}
    basis = []
    for free in range(m.cols):
        if free in pivot_rows:
            continue
        vector = [field.zero] * m.cols
        vector[free] = field.one
        for col, i in pivot_rows.items():
            vector[col] = -echelon.matrix[i, free]
        basis.append(tuple(vector))
    return basis


def subspace_equal(
    a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]], field: Any
) -> bool:
    """True iff span(a) == span(b), decided by comparing ranks of a, b and a + b."""
    length = _common_length(a, b)
    if not a and not b:
        return True
    rank_a = rank(a, field) if a else 0
    rank_b = rank(b, field) if b else 0
    if rank_a != rank_b:
        return False
    return row_reduce(_stack(field, list(a) + list(b), length)).rank == rank_a


def solve_in_span(
    basis: Sequence[Sequence[Scalar]], target: Sequence[Scalar], field: Any
) -> Optional[Tuple[Scalar, ...]]:
    """
    Coefficients c with sum_j c_j basis[j] == target, or None when target is outside the span.

    Free coefficients are set to zero, so the answer is deterministic.
    """
    length = _common_length(basis, [target])
    columns = len(basis)
    rows = [[v[i] for v in basis] + [target[i]] for i in range(length)]
    echelon = row_reduce(Matrix.from_rows(field, rows, cols=columns + 1), pivot_limit=columns)
    reduced = echelon.matrix
    for i in range(echelon.rank, reduced.rows):
        if reduced[i, columns]:
            return None
    solution = [field.zero] * columns
    for i, c in enumerate(echelon.pivots):
        solution[c] = reduced[i, columns]
    return tuple(solution)
