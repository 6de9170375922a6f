"""
Noncommutative polynomials over a free algebra with graded generators.

Words are tuples of 0-based generator indices; a FreePoly is a finite map
from words to nonzero scalars. Every operation returns canonical values
(no zero coefficients), so structural equality is mathematical equality.

The module also validates graded presentations (homogeneity, quadratic,
generated in degree one) and evaluates degree-2 elements at points of
P^{n-1} x P^{n-1}, where the monomial z_i z_j evaluates to a_i * b_j.
"""

import re
from dataclasses import dataclass, field as dc_field
from typing import TYPE_CHECKING, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from ..errors import (
    FieldMismatch,
    GeneratorMismatch,
    InvalidPresentation,
    NotDegreeTwo,
    ParseError,
    ZeroRepresentative,
)
from ..models import ValidationReport
from .scalars import FieldSpec, Scalar

if TYPE_CHECKING:
    from .geometry import BiPoint

Word = Tuple[int, ...]

_NAME_PATTERN = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_FACTOR_PATTERN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?$")
_NUMBER_PATTERN = re.compile(r"^\d+(?:/\d+)?$")


@dataclass(frozen=True)
class FreeAlgebra:
    """K<x_1, ..., x_n> with named generators of positive degree."""

    field: FieldSpec
    names: Tuple[str, ...]
    degrees: Tuple[int, ...] = ()

    def __post_init__(self):
        if not self.degrees:
            object.__setattr__(self, "degrees", (1,) * len(self.names))
        if len(self.degrees) != len(self.names):
            raise InvalidPresentation("one degree per generator is required")
        if len(set(self.names)) != len(self.names):
            raise InvalidPresentation(f"duplicate generator names in {self.names}")
        for name in self.names:
            if not _NAME_PATTERN.match(name):
                raise InvalidPresentation(f"invalid generator name {name!r}")
        if any(d < 1 for d in self.degrees):
            raise InvalidPresentation("generator degrees must be positive integers")

    @classmethod
    def standard(cls, field: FieldSpec, n: int, prefix: str = "x") -> "FreeAlgebra":
        return cls(field, tuple(f"{prefix}{i + 1}" for i in range(n)))

    @property
    def ngens(self) -> int:
        return len(self.names)

    @property
    def generated_in_degree_one(self) -> bool:
        return all(d == 1 for d in self.degrees)

    def word_degree(self, word: Word) -> int:
        return sum(self.degrees[i] for i in word)

    def sort_key(self, word: Word) -> Tuple[int, Word]:
        """Degree first, then lexicographic by index (the default deglex)."""
        return (self.word_degree(word), word)

    def gen(self, i: int) -> "FreePoly":
        return FreePoly(self, {(i,): self.field.one})

    def gens(self) -> List["FreePoly"]:
        return [self.gen(i) for i in range(self.ngens)]

    def zero(self) -> "FreePoly":
        return FreePoly(self, {})

    def one(self) -> "FreePoly":
        return FreePoly(self, {(): self.field.one})

    def monomial(self, word: Sequence[int], coefficient: Optional[Scalar] = None) -> "FreePoly":
        c = self.field.one if coefficient is None else coefficient
        return FreePoly(self, {tuple(word): c})

    def words(self, length: int) -> Iterator[Word]:
        """All words of the given length, in lexicographic index order."""
        if length == 0:
            yield ()
            return
        for prefix in self.words(length - 1):
            for i in range(self.ngens):
                yield prefix + (i,)

    def format_word(self, word: Word) -> str:
        parts = []
        i = 0
        while i < len(word):
            j = i
            while j < len(word) and word[j] == word[i]:
                j += 1
            name = self.names[word[i]]
            parts.append(name if j - i == 1 else f"{name}^{j - i}")
            i = j
        return "*".join(parts)

    def parse(self, text: str) -> "FreePoly":
        """
        Parse the text form, e.g. "x1*x2 - 2/3*x2*x1" or "x1^2 + 3*x2".

        Raises:
            ParseError: On unknown generators or malformed terms
        """
        index = {name: i for i, name in enumerate(self.names)}
        cleaned = text.replace("−", "-").replace(" ", "")
        if not cleaned:
            raise ParseError("empty polynomial")
        terms: Dict[Word, Scalar] = {}
        for chunk in _split_terms(cleaned):
            sign = 1
            body = chunk
            while body and body[0] in "+-":
                sign = -sign if body[0] == "-" else sign
                body = body[1:]
            if not body:
                raise ParseError(f"dangling sign in {text!r}")
            coefficient = self.field.one if sign > 0 else -self.field.one
            word: List[int] = []
            for factor in body.split("*"):
                if _NUMBER_PATTERN.match(factor):
                    coefficient = coefficient * self.field.parse(factor)
                    continue
                match = _FACTOR_PATTERN.match(factor)
                if not match or match.group(1) not in index:
                    raise ParseError(f"unknown factor {factor!r} in {text!r}")
                power = int(match.group(2) or 1)
                word.extend([index[match.group(1)]] * power)
            key = tuple(word)
            terms[key] = terms.get(key, self.field.zero) + coefficient
        return FreePoly(self, terms)


def _split_terms(text: str) -> List[str]:
    chunks: List[str] = []
    buffer = ""
    for ch in text:
        if ch in "+-" and buffer and buffer[-1] not in "*^/+-":
            chunks.append(buffer)
            buffer = ch
        else:
            buffer += ch
    chunks.append(buffer)
    return chunks


@dataclass(frozen=True, eq=False)
class FreePoly:
    """Element of a free algebra in canonical form (no zero coefficients)."""

    algebra: FreeAlgebra
    terms: Mapping[Word, Scalar] = dc_field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {w: c for w, c in self.terms.items() if c})

    # structure

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FreePoly):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.algebra, frozenset(self.terms.items())))

    def degrees(self) -> set:
        return {self.algebra.word_degree(w) for w in self.terms}

    def degree(self) -> int:
        """Largest degree of a term; -1 for the zero polynomial."""
        return max(self.degrees(), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def sorted_terms(self) -> List[Tuple[Word, Scalar]]:
        return sorted(self.terms.items(), key=lambda item: self.algebra.sort_key(item[0]))

    def coefficient(self, word: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(word), self.field.zero)

    # ring operations

    def _check(self, other: "FreePoly") -> None:
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise GeneratorMismatch(
                f"polynomials over {self.algebra.names} and {other.algebra.names}"
            )

    def __add__(self, other: "FreePoly") -> "FreePoly":
        self._check(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, self.field.zero) + c
        return FreePoly(self.algebra, terms)

    def __neg__(self) -> "FreePoly":
        return FreePoly(self.algebra, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "FreePoly") -> "FreePoly":
        return self + (-other)

    def scale(self, c: Scalar) -> "FreePoly":
        return FreePoly(self.algebra, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other: "FreePoly") -> "FreePoly":
        self._check(other)
        terms: Dict[Word, Scalar] = {}
        zero = self.field.zero
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = u + v
                terms[w] = terms.get(w, zero) + a * b
        return FreePoly(self.algebra, terms)

    def lr_multiply(self, left: Word, right: Word) -> "FreePoly":
        """The product left * self * right for words left and right."""
        return FreePoly(self.algebra, {left + w + right: c for w, c in self.terms.items()})

    # text form

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for position, (word, c) in enumerate(self.sorted_terms()):
            negative = self.field.is_negative(c)
            magnitude = -c if negative else c
            monomial = self.algebra.format_word(word)
            if magnitude == self.field.one:
                body = monomial or "1"
            else:
                scalar = self.field.format(magnitude)
                body = f"{scalar}*{monomial}" if monomial else scalar
            if position == 0:
                out.append(f"-{body}" if negative else body)
            else:
                out.append(f" - {body}" if negative else f" + {body}")
        return "".join(out)

    def __repr__(self) -> str:
        return f"FreePoly({self})"


def poly_add(f: FreePoly, g: FreePoly) -> FreePoly:
    return f + g


def poly_scale(f: FreePoly, c: Scalar) -> FreePoly:
    return f.scale(c)


def poly_mul(f: FreePoly, g: FreePoly) -> FreePoly:
    return f * g


@dataclass(frozen=True)
class Presentation:
    """Quotient of a free algebra by a finite list of relations."""

    algebra: FreeAlgebra
    relations: Tuple[FreePoly, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "relations", tuple(self.relations))
        for r in self.relations:
            if r.algebra != self.algebra:
                raise GeneratorMismatch("relation lives in a different free algebra")
            if r.is_zero():
                raise InvalidPresentation("relations must be nonzero")

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    @classmethod
    def parse(
        cls,
        field: FieldSpec,
        names: Sequence[str],
        relations: Iterable[str],
        degrees: Optional[Sequence[int]] = None,
    ) -> "Presentation":
        algebra = FreeAlgebra(field, tuple(names), tuple(degrees or ()))
        return cls(algebra, tuple(algebra.parse(text) for text in relations))

    @classmethod
    def commutative(cls, field: FieldSpec, d: int) -> "Presentation":
        """K[x_1..x_d] as the free algebra modulo all commutators x_j x_i - x_i x_j, i < j."""
        algebra = FreeAlgebra.standard(field, d)
        one = field.one
        relations = tuple(
            FreePoly(algebra, {(j, i): one, (i, j): -one}) for i in range(d) for j in range(i + 1, d)
        )
        return cls(algebra, relations)


def validate_presentation(presentation: Presentation) -> ValidationReport:
    """
    Check the grading axioms of a presentation.

    graded: every relation is homogeneous for the declared generator degrees.
    generated_in_degree_one: every generator has degree 1.
    quadratic: graded, generated in degree one, and every relation has degree 2.
    """
    algebra = presentation.algebra
    homogeneity: List[str] = []
    other: List[str] = []
    for r in presentation.relations:
        degrees = sorted(r.degrees())
        if len(degrees) > 1:
            homogeneity.append(f"relation {r} is not homogeneous (degrees {degrees})")
        elif degrees[0] != 2:
            other.append(f"relation {r} has degree {degrees[0]}")
    for name, degree in zip(algebra.names, algebra.degrees):
        if degree != 1:
            other.append(f"generator {name} has degree {degree}")
    graded = not homogeneity
    generated = algebra.generated_in_degree_one
    quadratic = graded and generated and all(r.degrees() == {2} for r in presentation.relations)
    return ValidationReport(
        graded=graded,
        quadratic=quadratic,
        generated_in_degree_one=generated,
        reasons=homogeneity + other,
    )


def evaluate_deg2(f: FreePoly, point: "BiPoint") -> Scalar:
    """
    Evaluate a degree-2 element at p = (a, b): z_i z_j -> a_i * b_j, extended linearly.

    Raises:
        NotDegreeTwo: If f is not homogeneous of degree 2 on degree-1 generators
        ZeroRepresentative: If a or b is the zero vector
    """
    n = f.algebra.ngens
    if not f.algebra.generated_in_degree_one or any(len(w) != 2 for w in f.terms):
        raise NotDegreeTwo(f"{f} is not a degree-2 element")
    a, b = tuple(point.a), tuple(point.b)
    if len(a) != n or len(b) != n:
        raise ZeroRepresentative(f"point coordinates must have length {n}")
    if not any(a) or not any(b):
        raise ZeroRepresentative("a point of P^{n-1} x P^{n-1} needs nonzero components")
    target = point.field
    if isinstance(target, FieldSpec) and target != f.field:
        raise FieldMismatch(f"point over {target.label}, polynomial over {f.field.label}")
    total = target.zero
    for (i, j), c in f.terms.items():
        if not isinstance(target, FieldSpec):
            # scan points live in F_{p^k}; coefficients reduce mod p
            c = target.lift(f.field, c)
        total = total + c * a[i] * b[j]
    return total
