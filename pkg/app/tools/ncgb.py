"""
Degree-truncated noncommutative Gröbner bases.

Two-sided ideals of the free algebra are completed under a degree-lexicographic
order with configurable generator precedence. Completion runs Buchberger's
procedure restricted to overlap ambiguities of degree at most N; because every
input is homogeneous, the resulting basis is exact in degrees <= N, which is
all the downstream analyses use. Results carry that bound so consumers can
record it.

On top of completion the module provides normal forms (leftmost or rightmost
rewriting), enumeration of normal words, Hilbert data and a finite-window
growth estimate.
"""

import heapq
import itertools
import logging
import re
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Literal, Optional, Sequence, Tuple

import numpy as np
from sympy import Rational

from ..errors import (
    DegreeExceedsTruncation,
    GeneratorMismatch,
    InhomogeneousInput,
    ParseError,
    WindowTooShort,
)
from ..models import GrowthEstimate, HilbertData
from .freealg import FreeAlgebra, FreePoly, Presentation, Word
from .scalars import FieldSpec, Scalar

logger = logging.getLogger(__name__)

Strategy = Literal["leftmost", "rightmost"]

# Growth thresholds: successive ratios at least 1 + 1/4 on the last half of the window
GROWTH_RATIO_THRESHOLD = Rational(5, 4)
MIN_WINDOW = 5

_HEADER_PATTERN = re.compile(r"^#\s*groebner\s+(.*)$")


class TermOrder:
    """
    Deglex on words: weighted degree first, then lexicographic by generator rank.

    precedence lists 0-based generator indices from smallest to largest; the
    default is the declared order, so x1 < x2 < ... < xn.
    """

    kind = "deglex"

    def __init__(self, algebra: FreeAlgebra, precedence: Optional[Sequence[int]] = None):
        n = algebra.ngens
        precedence = tuple(range(n)) if precedence is None else tuple(precedence)
        if sorted(precedence) != list(range(n)):
            raise ValueError(f"precedence {precedence} is not a permutation of 0..{n - 1}")
        self.algebra = algebra
        self.precedence = precedence
        self._rank = {g: r for r, g in enumerate(precedence)}

    def key(self, word: Word) -> Tuple[int, Tuple[int, ...]]:
        return (self.algebra.word_degree(word), tuple(self._rank[i] for i in word))

    def leading_word(self, f: FreePoly) -> Word:
        if f.is_zero():
            raise ValueError("the zero polynomial has no leading word")
        return max(f.terms, key=self.key)

    def leading_coefficient(self, f: FreePoly) -> Scalar:
        return f.terms[self.leading_word(f)]

    def monic(self, f: FreePoly) -> FreePoly:
        return f.scale(f.field.inv(self.leading_coefficient(f)))

    def sorted_words(self, words: Iterable[Word]) -> List[Word]:
        return sorted(words, key=self.key)

    def describe(self) -> str:
        return ",".join(self.algebra.names[i] for i in self.precedence)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TermOrder):
            return NotImplemented
        return self.algebra == other.algebra and self.precedence == other.precedence

    def __hash__(self) -> int:
        return hash((self.algebra, self.precedence))


class _TipIndex:
    """Leading words of a basis, indexed for subword search."""

    def __init__(self):
        self.by_word: Dict[Word, FreePoly] = {}
        self.lengths: List[int] = []

    def add(self, word: Word, element: FreePoly) -> None:
        self.by_word[word] = element
        if len(word) not in self.lengths:
            self.lengths.append(len(word))
            self.lengths.sort()

    def occurrence(self, word: Word, strategy: Strategy) -> Optional[Tuple[int, Word]]:
        """First occurrence (start, tip) of a tip inside word, scanning by strategy."""
        starts = range(len(word))
        if strategy == "rightmost":
            starts = reversed(starts)
        for s in starts:
            for length in self.lengths:
                piece = word[s : s + length]
                if len(piece) == length and piece in self.by_word:
                    return s, piece
        return None

    def has_suffix_tip(self, word: Word) -> bool:
        for length in self.lengths:
            if length <= len(word) and word[len(word) - length :] in self.by_word:
                return True
        return False


def _reduce(f: FreePoly, order: TermOrder, tips: _TipIndex, strategy: Strategy) -> FreePoly:
    """Rewrite f until no term contains a tip; the largest reducible term goes first."""
    while True:
        reducible = []
        for word in f.terms:
            hit = tips.occurrence(word, strategy)
            if hit is not None:
                reducible.append((word, hit))
        if not reducible:
            return f
        word, (start, tip) = max(reducible, key=lambda item: order.key(item[0]))
        g = tips.by_word[tip]
        c = f.terms[word]
        f = f - g.lr_multiply(word[:start], word[start + len(tip) :]).scale(c)


@dataclass
class GroebnerBasis:
    """
    Inter-reduced monic basis, complete for overlap ambiguities of degree <= N.

    elements are sorted by the term order of their leading words.
    """

    algebra: FreeAlgebra
    order: TermOrder
    elements: Tuple[FreePoly, ...]
    truncation_degree: int
    source: Optional[Presentation] = None
    _tips: _TipIndex = dc_field(default=None, repr=False, compare=False)
    _normal_words: Dict[int, List[Word]] = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._tips = _TipIndex()
        for g in self.elements:
            self._tips.add(self.order.leading_word(g), g)

    @property
    def complete_up_to(self) -> int:
        return self.truncation_degree

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def leading_words(self) -> List[Word]:
        return [self.order.leading_word(g) for g in self.elements]

    def is_normal_word(self, word: Word) -> bool:
        return self._tips.occurrence(tuple(word), "leftmost") is None

    def normal_form(self, f: FreePoly, strategy: Strategy = "leftmost") -> FreePoly:
        return normal_form(f, self, strategy)

    def contains(self, f: FreePoly) -> bool:
        """Ideal membership, valid for deg f <= complete_up_to."""
        return normal_form(f, self).is_zero()

    def normal_words(self, degree: int) -> List[Word]:
        return normal_words(self, degree)

    # serialization

    def dumps(self) -> str:
        """Header line followed by one element per line in the free-algebra text form."""
        a = self.algebra
        header = (
            f"# groebner order={self.order.kind} precedence={self.order.describe()} "
            f"degree={self.truncation_degree} field={a.field.label} "
            f"generators={','.join(a.names)} degrees={','.join(str(d) for d in a.degrees)}"
        )
        return "\n".join([header, *(str(g) for g in self.elements)]) + "\n"

    @classmethod
    def loads(cls, text: str) -> "GroebnerBasis":
        lines = [line.strip() for line in text.splitlines() if line.strip()]
        if not lines:
            raise ParseError("empty Gröbner basis text", module="ncgb")
        match = _HEADER_PATTERN.match(lines[0])
        if not match:
            raise ParseError("missing '# groebner' header line", module="ncgb")
        fields = dict(item.split("=", 1) for item in match.group(1).split())
        try:
            field = _parse_field_label(fields["field"])
            names = tuple(fields["generators"].split(","))
            degrees = tuple(int(d) for d in fields["degrees"].split(","))
            algebra = FreeAlgebra(field, names, degrees)
            index = {name: i for i, name in enumerate(names)}
            order = TermOrder(algebra, [index[name] for name in fields["precedence"].split(",")])
            bound = int(fields["degree"])
        except (KeyError, ValueError) as e:
            raise ParseError(f"malformed Gröbner basis header: {e}", module="ncgb") from e
        elements = tuple(algebra.parse(line) for line in lines[1:])
        return cls(algebra, order, elements, bound)


def _parse_field_label(label: str) -> FieldSpec:
    if label == "QQ":
        return FieldSpec.rationals()
    match = re.match(r"^GF\((\d+)\)$", label)
    if not match:
        raise ValueError(f"unknown field {label!r}")
    return FieldSpec.prime(int(match.group(1)))


def _overlaps(
    f: FreePoly, u: Word, g: FreePoly, v: Word, algebra: FreeAlgebra, bound: int
) -> Iterable[FreePoly]:
    """S-polynomials f*v[k:] - u[:-k]*g for every proper suffix of u equal to a prefix of v."""
    for k in range(1, min(len(u), len(v))):
        if u[len(u) - k :] != v[:k]:
            continue
        if algebra.word_degree(u + v[k:]) > bound:
            continue
        yield f.lr_multiply((), v[k:]) - g.lr_multiply(u[: len(u) - k], ())


def complete(
    presentation: Presentation,
    degree_bound: int,
    precedence: Optional[Sequence[int]] = None,
) -> GroebnerBasis:
    """
    Complete the relations of a presentation up to degree degree_bound.

    Pending polynomials are processed in (degree, creation order) priority, so
    the result is deterministic for a fixed term order.

    Raises:
        InhomogeneousInput: If a generator is not of degree 1 or a relation is not homogeneous
    """
    algebra = presentation.algebra
    if not algebra.generated_in_degree_one:
        raise InhomogeneousInput(
            f"generators must have degree 1, got degrees {list(algebra.degrees)}"
        )
    order = TermOrder(algebra, precedence)
    for r in presentation.relations:
        if not r.is_homogeneous():
            raise InhomogeneousInput(f"relation {r} is not homogeneous")

    counter = itertools.count()
    queue: List[Tuple[int, int, FreePoly]] = []
    for r in presentation.relations:
        if r.degree() <= degree_bound:
            heapq.heappush(queue, (r.degree(), next(counter), r))
        else:
            logger.debug("relation %s exceeds degree bound %d, skipped", r, degree_bound)

    basis: List[FreePoly] = []
    tips = _TipIndex()
    while queue:
        _, _, f = heapq.heappop(queue)
        f = _reduce(f, order, tips, "leftmost")
        if f.is_zero():
            continue
        f = order.monic(f)
        u = order.leading_word(f)
        for g in basis + [f]:
            v = order.leading_word(g)
            pending = list(_overlaps(f, u, g, v, algebra, degree_bound))
            if g is not f:
                pending.extend(_overlaps(g, v, f, u, algebra, degree_bound))
            for s in pending:
                if not s.is_zero():
                    heapq.heappush(queue, (s.degree(), next(counter), s))
        basis.append(f)
        tips.add(u, f)
        logger.debug("new basis element %s (queue %d)", f, len(queue))

    reduced = []
    for g in basis:
        lead = order.leading_word(g)
        head = algebra.monomial(lead, g.terms[lead])
        reduced.append(head + _reduce(g - head, order, tips, "leftmost"))
    reduced.sort(key=lambda g: order.key(order.leading_word(g)))
    logger.info(
        "completed %d relations to %d basis elements up to degree %d",
        len(presentation.relations),
        len(reduced),
        degree_bound,
    )
    return GroebnerBasis(algebra, order, tuple(reduced), degree_bound, presentation)


def normal_form(f: FreePoly, basis: GroebnerBasis, strategy: Strategy = "leftmost") -> FreePoly:
    """
    Unique representative of f modulo the ideal, valid in degrees <= complete_up_to.

    Raises:
        DegreeExceedsTruncation: If f has degree above the truncation bound
        GeneratorMismatch: If f lives in another free algebra
    """
    if f.algebra != basis.algebra:
        raise GeneratorMismatch("polynomial and basis live in different free algebras")
    if f.degree() > basis.complete_up_to:
        raise DegreeExceedsTruncation(
            f"degree {f.degree()} exceeds the truncation degree {basis.complete_up_to}"
        )
    return _reduce(f, basis.order, basis._tips, strategy)


def normal_words(basis: GroebnerBasis, degree: int) -> List[Word]:
    """
    Words of the given weighted degree containing no leading word, sorted by the term order.

    Words are grown one letter at a time; a normal word stays normal under
    extension unless a tip appears as a suffix, so only suffixes are checked.
    """
    if degree > basis.complete_up_to:
        raise DegreeExceedsTruncation(
            f"degree {degree} exceeds the truncation degree {basis.complete_up_to}"
        )
    cache = basis._normal_words
    if 0 not in cache:
        cache[0] = [()]
    algebra = basis.algebra
    for d in range(1, degree + 1):
        if d in cache:
            continue
        words = []
        for i, gdeg in enumerate(algebra.degrees):
            if gdeg > d:
                continue
            for prefix in cache[d - gdeg]:
                word = prefix + (i,)
                if not basis._tips.has_suffix_tip(word):
                    words.append(word)
        cache[d] = basis.order.sorted_words(words)
    return list(cache[degree])


def hilbert_from_basis(basis: GroebnerBasis) -> HilbertData:
    dims = [len(normal_words(basis, d)) for d in range(basis.complete_up_to + 1)]
    return HilbertData(dims=dims, degree_bound=basis.complete_up_to, order=basis.order.kind)


def hilbert_function(
    presentation: Presentation, degree_bound: int, precedence: Optional[Sequence[int]] = None
) -> HilbertData:
    """dim_K A_i for i = 0..degree_bound, counted as normal words of the truncated basis."""
    return hilbert_from_basis(complete(presentation, degree_bound, precedence))


def growth_estimate(hilbert: HilbertData) -> GrowthEstimate:
    """
    Classify growth from a finite window of Hilbert data.

    polynomial(delta): the smallest k whose k-th finite difference vanishes on
    the last half of the window (at least two entries) while the (k-1)-th is
    positive there gives delta = k - 1. exponential: every ratio
    dims[i+1]/dims[i] on the last half is at least 5/4. Anything else is
    inconclusive. The result is an estimate, not a proof.

    Raises:
        WindowTooShort: If fewer than five dimensions are given
    """
    dims = list(hilbert.dims)
    length = len(dims)
    if length < MIN_WINDOW:
        raise WindowTooShort(f"growth estimation needs at least {MIN_WINDOW} dimensions, got {length}")

    values = np.array(dims, dtype=object)
    differences: List[List[int]] = []
    for k in range(1, length):
        diff = np.diff(values, n=k)
        if len(diff) < 2:
            break
        # at least two entries of the k-th difference must be seen
        start = min((length - k) // 2, len(diff) - 2)
        tail = diff[start:]
        differences.append([int(x) for x in diff])
        # the (k-1)-th difference is then constant on the tail; it must be positive
        previous = values if k == 1 else np.diff(values, n=k - 1)
        if all(x == 0 for x in tail) and all(x > 0 for x in previous[start:]):
            return GrowthEstimate(
                classification="polynomial",
                delta=k - 1,
                differences=differences,
                window_start=start,
            )

    window_start = length // 2
    ratios = []
    exponential = True
    for i in range(window_start, length - 1):
        if dims[i] == 0:
            exponential = False
            ratios.append("undefined")
            continue
        ratio = Rational(dims[i + 1], dims[i])
        ratios.append(str(ratio))
        if ratio < GROWTH_RATIO_THRESHOLD:
            exponential = False
    return GrowthEstimate(
        classification="exponential" if exponential else "inconclusive",
        differences=differences,
        tail_ratios=ratios,
        window_start=window_start,
    )
