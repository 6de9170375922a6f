"""
The skew polynomial ring S = K<z_1..z_n>/(z_j z_i - mu_ij z_i z_j).

S's defining relations are already a deglex Gröbner basis, so SkewPoly keeps
elements in straightened form (exponent tuples) and multiplies monomials with
a closed-form mu-factor instead of going through the general engine. Quotients
of S by further elements re-enter app.tools.ncgb with the mu-relations adjoined.

Normality of a homogeneous element r of degree d in a connected graded algebra
generated in degree one is decided in degree d + 1 alone: rR = Rr holds iff
span{z_i r} = span{r z_j} in A_{d+1} (Doc.md has the induction). Every verdict
comes with a certificate that verify_certificate re-checks from scratch.
"""

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterator, List, Literal, Mapping, Optional, Sequence, Tuple, Union

from ..config import config
from ..errors import (
    DegreeExceedsTruncation,
    DegreeZeroElement,
    DimensionMismatch,
    GeneratorMismatch,
    InhomogeneousElement,
    InvalidMuMatrix,
    NotMuSymmetric,
    SizeMismatch,
)
from .freealg import FreeAlgebra, FreePoly, Presentation, Word
from .ncgb import GroebnerBasis, complete, normal_form, normal_words
from .scalars import FieldSpec, Matrix, Scalar, rank, solve_in_span, subspace_equal

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]


# ---------- mu matrices ----------


def mu_violations(field: FieldSpec, rows: Sequence[Sequence[Scalar]]) -> List[Tuple[Tuple[int, int], str]]:
    """
    Every broken mu axiom as ((i, j), message), 1-based, in row-major order.

    Axioms: mu_ii = 1, mu_ij != 0 and mu_ij * mu_ji = 1 for i != j.
    """
    n = len(rows)
    problems: List[Tuple[Tuple[int, int], str]] = []
    if any(len(row) != n for row in rows):
        return [((0, 0), f"mu must be square, got {n} rows of lengths {[len(r) for r in rows]}")]
    for i in range(n):
        for j in range(n):
            value = rows[i][j]
            if i == j:
                if value != field.one:
                    problems.append(((i + 1, j + 1), f"mu_{i + 1}{j + 1} = {field.format(value)}, expected 1"))
            elif not value:
                problems.append(((i + 1, j + 1), f"mu_{i + 1}{j + 1} is zero"))
            elif i < j and value * rows[j][i] != field.one:
                problems.append(
                    ((i + 1, j + 1), f"mu_{i + 1}{j + 1} * mu_{j + 1}{i + 1} != 1")
                )
    return problems


@dataclass(frozen=True)
class MuMatrix:
    """n x n scalars with mu_ii = 1 and mu_ij mu_ji = 1; raises InvalidMuMatrix otherwise."""

    field: FieldSpec
    entries: Tuple[Tuple[Scalar, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(tuple(row) for row in self.entries))
        problems = mu_violations(self.field, self.entries)
        if problems:
            entry, message = problems[0]
            raise InvalidMuMatrix(message, entry)

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence]) -> "MuMatrix":
        return cls(field, tuple(tuple(field.convert(x) for x in row) for row in rows))

    @classmethod
    def from_upper(cls, field: FieldSpec, n: int, upper: Mapping[Tuple[int, int], object]) -> "MuMatrix":
        """Build mu from its entries above the diagonal (0-based keys); missing entries are 1."""
        rows = [[field.one] * n for _ in range(n)]
        for (i, j), value in upper.items():
            value = field.convert(value)
            rows[i][j] = value
            rows[j][i] = field.inv(value)
        return cls(field, tuple(tuple(r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        i, j = index
        return self.entries[i][j]

    def to_strings(self) -> List[List[str]]:
        return [[self.field.format(x) for x in row] for row in self.entries]


# ---------- straightening ----------


def straighten(word: Sequence[int], mu: MuMatrix) -> Tuple[Exponents, Scalar]:
    """
    Sort a word into z_1^e_1 ... z_n^e_n and return (exponents, factor).

    Each inversion p < q with w_p > w_q contributes mu_{w_q, w_p}, which is the
    same product whatever order of adjacent swaps is used.
    """
    exponents = [0] * mu.n
    factor = mu.field.one
    # seen[g] counts earlier letters equal to g
    seen = [0] * mu.n
    for letter in word:
        for bigger in range(letter + 1, mu.n):
            if seen[bigger]:
                factor = factor * mu[letter, bigger] ** seen[bigger]
        seen[letter] += 1
        exponents[letter] += 1
    return tuple(exponents), factor


def _monomial_factor(e: Exponents, f: Exponents, mu: MuMatrix) -> Scalar:
    """z^e * z^f = (prod_{i<j} mu_ij^(e_j f_i)) z^(e+f)."""
    factor = mu.field.one
    for i in range(mu.n):
        if not f[i]:
            continue
        for j in range(i + 1, mu.n):
            if e[j]:
                factor = factor * mu[i, j] ** (e[j] * f[i])
    return factor


# ---------- S and its elements ----------


@dataclass(frozen=True)
class SkewRing:
    """S = K_mu[z_1..z_n] together with its presentation over the free algebra."""

    mu: MuMatrix
    prefix: str = "z"
    algebra: FreeAlgebra = dc_field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "algebra", FreeAlgebra.standard(self.mu.field, self.mu.n, self.prefix))

    @property
    def n(self) -> int:
        return self.mu.n

    @property
    def field(self) -> FieldSpec:
        return self.mu.field

    def relations(self) -> List[FreePoly]:
        """z_j z_i - mu_ij z_i z_j for i < j."""
        one = self.field.one
        return [
            FreePoly(self.algebra, {(j, i): one, (i, j): -self.mu[i, j]})
            for i in range(self.n)
            for j in range(i + 1, self.n)
        ]

    def presentation(self, extra: Sequence[FreePoly] = ()) -> Presentation:
        return Presentation(self.algebra, tuple(self.relations()) + tuple(r for r in extra if r))

    def gen(self, i: int) -> "SkewPoly":
        e = [0] * self.n
        e[i] = 1
        return SkewPoly(self, {tuple(e): self.field.one})

    def monomial(self, exponents: Sequence[int], coefficient: Optional[Scalar] = None) -> "SkewPoly":
        c = self.field.one if coefficient is None else coefficient
        return SkewPoly(self, {tuple(exponents): c})

    def monomials(self, degree: int) -> List[Exponents]:
        """Exponent tuples of total degree `degree`, in deglex order of their words."""
        result = [
            tuple(e)
            for e in itertools.product(range(degree + 1), repeat=self.n)
            if sum(e) == degree
        ]
        return sorted(result, key=lambda e: self.algebra.sort_key(_word(e)))

    def from_free(self, f: FreePoly) -> "SkewPoly":
        if f.algebra != self.algebra:
            raise GeneratorMismatch("polynomial does not live in the free algebra of S")
        terms: Dict[Exponents, Scalar] = {}
        for word, c in f.terms.items():
            e, factor = straighten(word, self.mu)
            terms[e] = terms.get(e, self.field.zero) + c * factor
        return SkewPoly(self, terms)

    def parse(self, text: str) -> "SkewPoly":
        return self.from_free(self.algebra.parse(text))


def _word(exponents: Exponents) -> Word:
    return tuple(i for i, e in enumerate(exponents) for _ in range(e))


@dataclass(frozen=True, eq=False)
class SkewPoly:
    """Element of S in straightened form: exponent tuples to nonzero scalars."""

    ring: SkewRing
    terms: Mapping[Exponents, Scalar] = dc_field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {e: c for e, c in self.terms.items() if c})

    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkewPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def degrees(self) -> set:
        return {sum(e) for e in self.terms}

    def degree(self) -> int:
        return max(self.degrees(), default=-1)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def coefficient(self, exponents: Sequence[int]) -> Scalar:
        return self.terms.get(tuple(exponents), self.field.zero)

    def coordinates(self, degree: int) -> Tuple[Scalar, ...]:
        return tuple(self.coefficient(e) for e in self.ring.monomials(degree))

    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, self.field.zero) + c
        return SkewPoly(self.ring, terms)

    def __neg__(self) -> "SkewPoly":
        return SkewPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "SkewPoly") -> "SkewPoly":
        return self + (-other)

    def scale(self, c: Scalar) -> "SkewPoly":
        return SkewPoly(self.ring, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other: "SkewPoly") -> "SkewPoly":
        self._check(other)
        mu = self.ring.mu
        terms: Dict[Exponents, Scalar] = {}
        for e, a in self.terms.items():
            for f, b in other.terms.items():
                g = tuple(x + y for x, y in zip(e, f))
                terms[g] = terms.get(g, self.field.zero) + a * b * _monomial_factor(e, f, mu)
        return SkewPoly(self.ring, terms)

    def _check(self, other: "SkewPoly") -> None:
        if self.ring != other.ring:
            raise GeneratorMismatch("elements of different skew rings")

    def to_free(self) -> FreePoly:
        """The straightened representative in the free algebra of S."""
        return FreePoly(self.ring.algebra, {_word(e): c for e, c in self.terms.items()})

    def __str__(self) -> str:
        return str(self.to_free())

    def __repr__(self) -> str:
        return f"SkewPoly({self})"


Element = Union[SkewPoly, FreePoly]


def _as_free(r: Element, ring: SkewRing) -> FreePoly:
    if isinstance(r, SkewPoly):
        if r.ring != ring:
            raise GeneratorMismatch("element of a different skew ring")
        return r.to_free()
    if r.algebra != ring.algebra:
        raise GeneratorMismatch("polynomial does not live in the free algebra of S")
    return r


# ---------- quadrics ----------


def mu_symmetry_violations(m: Matrix, mu: MuMatrix) -> List[Tuple[int, int]]:
    """1-based (i, j) with M_ij != mu_ij M_ji, each unordered pair reported once."""
    if m.rows != mu.n or m.cols != mu.n:
        raise SizeMismatch(f"matrix is {m.rows}x{m.cols}, mu is {mu.n}x{mu.n}")
    return [
        (i + 1, j + 1)
        for i in range(mu.n)
        for j in range(i, mu.n)
        if m[i, j] != mu[i, j] * m[j, i]
    ]


def is_mu_symmetric(m: Matrix, mu: MuMatrix) -> bool:
    """M_ij = mu_ij M_ji for all i, j."""
    return not mu_symmetry_violations(m, mu)


def quadric(m: Matrix, mu: MuMatrix, ring: Optional[SkewRing] = None) -> SkewPoly:
    """
    q = [z_1 .. z_n] M [z_1 .. z_n]^T, straightened.

    Raises:
        NotMuSymmetric: If M is not mu-symmetric
    """
    violations = mu_symmetry_violations(m, mu)
    if violations:
        i, j = violations[0]
        raise NotMuSymmetric(f"M_{i}{j} != mu_{i}{j} * M_{j}{i}", (i, j))
    ring = ring or SkewRing(mu)
    terms: Dict[Exponents, Scalar] = {}
    for i in range(mu.n):
        for j in range(mu.n):
            if not m[i, j]:
                continue
            e, factor = straighten((i, j), mu)
            terms[e] = terms.get(e, mu.field.zero) + m[i, j] * factor
    return SkewPoly(ring, terms)


def monic_quadric(q: SkewPoly) -> SkewPoly:
    """Divide by the coefficient of the first printed (deglex-smallest) monomial."""
    if q.is_zero():
        return q
    first = min(q.terms, key=lambda e: q.ring.algebra.sort_key(_word(e)))
    return q.scale(q.field.inv(q.terms[first]))


@dataclass(frozen=True)
class QuadricSystem:
    """mu, M_1..M_n and the quadrics they define, raw and monic."""

    ring: SkewRing
    matrices: Tuple[Matrix, ...]
    raw: Tuple[SkewPoly, ...]
    monic: Tuple[SkewPoly, ...]

    @property
    def mu(self) -> MuMatrix:
        return self.ring.mu

    @classmethod
    def build(cls, mu: MuMatrix, matrices: Sequence[Matrix]) -> "QuadricSystem":
        if len(matrices) != mu.n:
            raise SizeMismatch(f"{len(matrices)} matrices given for n = {mu.n}")
        ring = SkewRing(mu)
        raw = tuple(quadric(m, mu, ring) for m in matrices)
        return cls(ring, tuple(matrices), raw, tuple(monic_quadric(q) for q in raw))


# ---------- normality ----------


@dataclass(frozen=True)
class NormalityCertificate:
    """
    Evidence for (or against) rA = Ar in A = S/<ideal>, checked in degree d + 1.

    Coordinates are taken over basis_words, the normal words of degree d + 1.
    left_witnesses[i] holds c with z_i r = sum_j c_j r z_j; right_witnesses[j]
    holds c with r z_j = sum_i c_i z_i r. obstruction names a product that
    leaves the other span when the verdict is negative.
    """

    element: FreePoly
    ideal: Tuple[FreePoly, ...]
    degree: int
    degree_checked: int
    basis_words: Tuple[Word, ...]
    left_span: Tuple[Tuple[Scalar, ...], ...]
    right_span: Tuple[Tuple[Scalar, ...], ...]
    verdict: bool
    degenerate: bool = False
    left_witnesses: Tuple[Tuple[Scalar, ...], ...] = ()
    right_witnesses: Tuple[Tuple[Scalar, ...], ...] = ()
    obstruction: Optional[str] = None
    precedence: Optional[Tuple[int, ...]] = None

    @property
    def note(self) -> Optional[str]:
        return "degenerate: zero in quotient" if self.degenerate else None

    def identities(self) -> List[str]:
        """Witness identities as text, one per product."""
        algebra = self.element.algebra
        field = algebra.field
        names = algebra.names
        lines = []
        for i, coeffs in enumerate(self.left_witnesses):
            lines.append(f"{names[i]}*r = {_combination(field, coeffs, [f'r*{g}' for g in names])} mod ideal")
        for j, coeffs in enumerate(self.right_witnesses):
            lines.append(f"r*{names[j]} = {_combination(field, coeffs, [f'{g}*r' for g in names])} mod ideal")
        return lines


def _combination(field: FieldSpec, coeffs: Sequence[Scalar], symbols: Sequence[str]) -> str:
    parts = []
    for c, symbol in zip(coeffs, symbols):
        if not c:
            continue
        negative = field.is_negative(c)
        magnitude = -c if negative else c
        body = symbol if magnitude == field.one else f"{field.format(magnitude)}*{symbol}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts) or "0"


def _stage_basis(
    ring: SkewRing, ideal: Sequence[FreePoly], degree: int, precedence: Optional[Sequence[int]]
) -> GroebnerBasis:
    return complete(ring.presentation(ideal), degree, precedence)


def _spans(
    r: FreePoly, basis: GroebnerBasis, words: Sequence[Word], strategy: str = "leftmost"
) -> Tuple[List[Tuple[Scalar, ...]], List[Tuple[Scalar, ...]]]:
    gens = basis.algebra.gens()
    left, right = [], []
    for z in gens:
        left.append(_coordinates(normal_form(z * r, basis, strategy), words))
        right.append(_coordinates(normal_form(r * z, basis, strategy), words))
    return left, right


def _coordinates(f: FreePoly, words: Sequence[Word]) -> Tuple[Scalar, ...]:
    return tuple(f.coefficient(w) for w in words)


def is_normal(
    r: Element,
    ring: SkewRing,
    ideal: Sequence[Element] = (),
    degree_bound: Optional[int] = None,
    precedence: Optional[Sequence[int]] = None,
) -> NormalityCertificate:
    """
    Decide whether r is normal in S/<ideal>.

    The ideal is completed together with the relations of S up to degree
    d + 1, where d = deg r; degree_bound, when given, is the caller's
    truncation degree and must reach d + 1.

    Raises:
        InhomogeneousElement: If r or an ideal generator is not homogeneous
        DegreeZeroElement: If r is a nonzero scalar
        DegreeExceedsTruncation: If degree_bound < d + 1
    """
    f = _as_free(r, ring)
    generators = tuple(g for g in (_as_free(x, ring) for x in ideal) if g)
    for g in generators:
        if not g.is_homogeneous():
            raise InhomogeneousElement(f"ideal generator {g} is not homogeneous")
    if not f.is_homogeneous():
        raise InhomogeneousElement(f"{f} is not homogeneous")
    d = f.degree()
    if d == 0:
        raise DegreeZeroElement(f"{f} has degree 0")
    order = tuple(precedence) if precedence is not None else None
    if f.is_zero():
        return NormalityCertificate(f, generators, 0, 0, (), (), (), True, degenerate=True, precedence=order)
    if degree_bound is not None and degree_bound < d + 1:
        raise DegreeExceedsTruncation(
            f"normality of a degree-{d} element needs degree {d + 1}, bound is {degree_bound}"
        )

    basis = _stage_basis(ring, generators, d + 1, precedence)
    if normal_form(f, basis).is_zero():
        logger.debug("%s is zero in the quotient", f)
        return NormalityCertificate(
            f, generators, d, d + 1, (), (), (), True, degenerate=True, precedence=order
        )

    words = tuple(normal_words(basis, d + 1))
    left, right = _spans(f, basis, words)
    field = ring.field
    if subspace_equal(left, right, field):
        return NormalityCertificate(
            f,
            generators,
            d,
            d + 1,
            words,
            tuple(left),
            tuple(right),
            True,
            left_witnesses=tuple(solve_in_span(right, v, field) for v in left),
            right_witnesses=tuple(solve_in_span(left, v, field) for v in right),
            precedence=order,
        )

    names = ring.algebra.names
    obstruction = next(
        (f"{names[i]}*r is not in span(r*z)" for i, v in enumerate(left) if solve_in_span(right, v, field) is None),
        None,
    ) or next(
        f"r*{names[j]} is not in span(z*r)"
        for j, v in enumerate(right)
        if solve_in_span(left, v, field) is None
    )
    return NormalityCertificate(
        f, generators, d, d + 1, words, tuple(left), tuple(right), False,
        obstruction=obstruction, precedence=order,
    )


def verify_certificate(certificate: NormalityCertificate, ring: SkewRing) -> bool:
    """
    Re-check a certificate against a fresh completion of the stage ideal.

    Witness identities are rebuilt by multiplication in the free algebra and
    reduced with rightmost rewriting, so the check shares no intermediate
    data with is_normal.
    """
    r = certificate.element
    if r.is_zero():
        return certificate.degenerate
    basis = _stage_basis(ring, certificate.ideal, certificate.degree_checked, certificate.precedence)
    if certificate.degenerate:
        return normal_form(r, basis, "rightmost").is_zero()
    gens = ring.algebra.gens()
    if certificate.verdict:
        for i, coeffs in enumerate(certificate.left_witnesses):
            if coeffs is None:
                return False
            combo = ring.algebra.zero()
            for j, c in enumerate(coeffs):
                combo = combo + (r * gens[j]).scale(c)
            if not normal_form(gens[i] * r - combo, basis, "rightmost").is_zero():
                return False
        for j, coeffs in enumerate(certificate.right_witnesses):
            if coeffs is None:
                return False
            combo = ring.algebra.zero()
            for i, c in enumerate(coeffs):
                combo = combo + (gens[i] * r).scale(c)
            if not normal_form(r * gens[j] - combo, basis, "rightmost").is_zero():
                return False
        return True
    words = tuple(normal_words(basis, certificate.degree_checked))
    left, right = _spans(r, basis, words, "rightmost")
    return not subspace_equal(left, right, ring.field)


@dataclass(frozen=True)
class SequenceCheck:
    normalizing: bool
    certificates: Tuple[NormalityCertificate, ...]
    failed_step: Optional[int] = None
    properness: str = "satisfied-by-grading"


def is_normalizing_sequence(
    sequence: Sequence[Element],
    ring: SkewRing,
    ideal: Sequence[Element] = (),
    degree_bound: Optional[int] = None,
    precedence: Optional[Sequence[int]] = None,
) -> SequenceCheck:
    """r_{j+1} normal modulo <ideal, r_1..r_j> for every j; stops at the first failure (1-based step)."""
    prefix: List[Element] = list(ideal)
    certificates = []
    for step, r in enumerate(sequence, 1):
        certificate = is_normal(r, ring, prefix, degree_bound, precedence)
        certificates.append(certificate)
        if not certificate.verdict:
            return SequenceCheck(False, tuple(certificates), step)
        prefix.append(r)
    return SequenceCheck(True, tuple(certificates))


def spanning_check(sequence: Sequence[Element], target: Sequence[Element], ring: SkewRing) -> bool:
    """
    True iff sequence and target span the same subspace of S_2.

    Raises:
        DimensionMismatch: If an element is not homogeneous of degree 2
    """
    monomials = ring.monomials(2)

    def coords(x: Element) -> Tuple[Scalar, ...]:
        s = x if isinstance(x, SkewPoly) else ring.from_free(_as_free(x, ring))
        if s and s.degrees() != {2}:
            raise DimensionMismatch(f"{s} is not homogeneous of degree 2")
        return tuple(s.coefficient(e) for e in monomials)

    return subspace_equal([coords(x) for x in sequence], [coords(x) for x in target], ring.field)


# ---------- normalizing-sequence search ----------


SearchStatus = Literal["found", "not_found_exhaustive", "unknown"]


@dataclass(frozen=True)
class NormalizingSearchResult:
    status: SearchStatus
    sequence: Tuple[SkewPoly, ...] = ()
    certificates: Tuple[NormalityCertificate, ...] = ()
    tests_used: int = 0
    budget: int = 0
    exhaustive: bool = False
    phase: Optional[str] = None
    notes: Tuple[str, ...] = ()


class _BudgetExhausted(Exception):
    pass


class _NormalityOracle:
    """is_normal with a cache; every cache miss spends one unit of budget."""

    def __init__(self, ring, ideal, degree_bound, budget, precedence):
        self.ring = ring
        self.ideal = list(ideal)
        self.degree_bound = degree_bound
        self.budget = budget
        self.precedence = precedence
        self.calls = 0
        self._cache: Dict[Tuple, NormalityCertificate] = {}

    def test(self, prefix: Sequence[SkewPoly], candidate: SkewPoly) -> NormalityCertificate:
        key = (tuple(str(p) for p in prefix), str(candidate))
        if key not in self._cache:
            if self.calls >= self.budget:
                raise _BudgetExhausted
            self.calls += 1
            self._cache[key] = is_normal(
                candidate, self.ring, self.ideal + list(prefix), self.degree_bound, self.precedence
            )
        return self._cache[key]


def _independent(vectors: Sequence[SkewPoly], ring: SkewRing) -> List[SkewPoly]:
    """Greedy maximal linearly independent sublist, in input order."""
    chosen: List[SkewPoly] = []
    for v in vectors:
        trial = chosen + [v]
        if rank([x.coordinates(2) for x in trial], ring.field) == len(trial):
            chosen.append(v)
    return chosen


def _complement(basis: Sequence[SkewPoly], prefix: Sequence[SkewPoly], ring: SkewRing) -> List[SkewPoly]:
    """Basis vectors completing span(prefix) to span(basis), taken greedily in order."""
    chosen: List[SkewPoly] = []
    field = ring.field
    for v in basis:
        current = [x.coordinates(2) for x in list(prefix) + chosen]
        if rank(current + [v.coordinates(2)], field) > len(current):
            chosen.append(v)
    return chosen


def _projective_points(field: FieldSpec, k: int) -> Iterator[Tuple[Scalar, ...]]:
    """P^{k-1}(F_p): leading 1 position first, then the trailing coordinates in residue order."""
    zero, one = field.zero, field.one
    for lead in range(k):
        for tail in itertools.product(list(field.elements()), repeat=k - lead - 1):
            yield (zero,) * lead + (one,) + tuple(tail)


def _test_vectors(field: FieldSpec, k: int, coefficients: Sequence[Scalar]) -> Iterator[Tuple[Scalar, ...]]:
    """Coefficient vectors from the test set whose first nonzero entry is 1."""
    seen = set()
    for vector in itertools.product(coefficients, repeat=k):
        first = next((c for c in vector if c), None)
        if first is None or first != field.one or vector in seen:
            continue
        seen.add(vector)
        yield vector


def _combine(coeffs: Sequence[Scalar], vectors: Sequence[SkewPoly], ring: SkewRing) -> SkewPoly:
    total = SkewPoly(ring, {})
    for c, v in zip(coeffs, vectors):
        if c:
            total = total + v.scale(c)
    return total


def _stagewise(oracle: _NormalityOracle, basis: Sequence[SkewPoly], candidates) -> Optional[List[SkewPoly]]:
    """Depth-first search over V/span(prefix), one stage per sequence member."""
    ring = oracle.ring

    def search(prefix: List[SkewPoly]) -> Optional[List[SkewPoly]]:
        complement = _complement(basis, prefix, ring)
        if not complement:
            return prefix
        for coeffs in candidates(len(complement)):
            candidate = _combine(coeffs, complement, ring)
            if oracle.test(prefix, candidate).verdict:
                found = search(prefix + [candidate])
                if found is not None:
                    return found
        return None

    return search([])


def find_normalizing_sequence(
    basis: Sequence[Element],
    ring: SkewRing,
    ideal: Sequence[Element] = (),
    degree_bound: Optional[int] = None,
    budget: Optional[int] = None,
    coefficients: Optional[Sequence[str]] = None,
    precedence: Optional[Sequence[int]] = None,
) -> NormalizingSearchResult:
    """
    Search for a normalizing sequence of S/<ideal> spanning the degree-2 space V = span(basis).

    Over F_p the projectivization of V/span(prefix) is enumerated stage by
    stage, so a negative answer is certified. Over the rationals the basis is
    tried in every order first, then combinations with coefficients from the
    test set; a miss is reported as unknown.
    """
    budget = config.SEARCH_BUDGET if budget is None else budget
    field = ring.field
    elements = [x if isinstance(x, SkewPoly) else ring.from_free(_as_free(x, ring)) for x in basis]
    for x in elements:
        if x and x.degrees() != {2}:
            raise InhomogeneousElement(f"{x} is not homogeneous of degree 2")
    vectors = _independent([x for x in elements if x], ring)
    oracle = _NormalityOracle(ring, [_as_free(x, ring) for x in ideal], degree_bound, budget, precedence)
    notes = ["A-side normalizing condition not directly decided; checked in S"]

    def found(sequence: List[SkewPoly], phase: str) -> NormalizingSearchResult:
        certificates = []
        for step, member in enumerate(sequence):
            certificates.append(oracle.test(sequence[:step], member))
        logger.info("normalizing sequence found after %d tests (%s)", oracle.calls, phase)
        return NormalizingSearchResult(
            "found", tuple(sequence), tuple(certificates), oracle.calls, budget, phase=phase, notes=tuple(notes)
        )

    try:
        if field.is_prime_field:
            sequence = _stagewise(oracle, vectors, lambda k: _projective_points(field, k))
            if sequence is not None:
                return found(sequence, "stagewise")
            return NormalizingSearchResult(
                "not_found_exhaustive", (), (), oracle.calls, budget, exhaustive=True, phase="stagewise",
                notes=tuple(notes),
            )

        for order in itertools.permutations(vectors):
            prefix: List[SkewPoly] = []
            for member in order:
                if not oracle.test(prefix, member).verdict:
                    break
                prefix.append(member)
            else:
                return found(prefix, "basis-order")

        test_set = [field.parse(c) for c in (coefficients or config.coefficient_strings())]
        sequence = _stagewise(oracle, vectors, lambda k: _test_vectors(field, k, test_set))
        if sequence is not None:
            return found(sequence, "test-combinations")
        notes.append("rational search space exhausted without a hit; not a certified negative")
    except _BudgetExhausted:
        logger.info("search budget of %d normality tests exhausted", budget)
        notes.append(f"budget of {budget} normality tests exhausted")
    return NormalizingSearchResult("unknown", (), (), oracle.calls, budget, notes=tuple(notes))
