"""
Graded skew Clifford algebra presentations and elimination of the y-generators.

A GSCA on x_1..x_n (degree 1) and y_1..y_n (degree 2) has the relations

    x_i x_j + mu_ij x_j x_i = sum_k (M_k)_ij y_k        for all i, j,

where relation (j, i) is mu_ji times relation (i, j) once every M_k is
mu-symmetric. When the M_k are linearly independent the relations over
unordered pairs i <= j determine each y_k as a quadratic form in the x's; the
remaining combinations are quadratic relations among the x's alone, which
present the quotient target K<x>/(x_relations) that surjects onto A.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from ..errors import MatricesLinearlyDependent, NotMuSymmetric, SizeMismatch
from .freealg import FreeAlgebra, FreePoly, Presentation
from .ncgb import TermOrder
from .scalars import Matrix, kernel, row_reduce
from .skewring import MuMatrix, mu_symmetry_violations

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass(frozen=True)
class GscaPresentation:
    mu: MuMatrix
    matrices: Tuple[Matrix, ...]
    algebra: FreeAlgebra
    relations_a: Dict[Pair, FreePoly]

    @property
    def n(self) -> int:
        return self.mu.n

    @property
    def presentation(self) -> Presentation:
        return Presentation(self.algebra, tuple(r for r in self.relations_a.values() if r))

    def x(self, i: int) -> FreePoly:
        return self.algebra.gen(i)

    def y(self, k: int) -> FreePoly:
        return self.algebra.gen(self.n + k)

    def unordered_pairs(self) -> List[Pair]:
        return [(i, j) for i in range(self.n) for j in range(i, self.n)]

    def redundancy_holds(self) -> bool:
        """Relation (j, i) equals mu_ji times relation (i, j) for every i < j."""
        return all(
            self.relations_a[(j, i)] == self.relations_a[(i, j)].scale(self.mu[j, i])
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )


def build_gsca(mu: MuMatrix, matrices: Sequence[Matrix]) -> GscaPresentation:
    """
    All n^2 relations x_i x_j + mu_ij x_j x_i - sum_k (M_k)_ij y_k.

    Raises:
        SizeMismatch: If the number or shape of the matrices does not match mu
        NotMuSymmetric: If some M_k is not mu-symmetric
    """
    n = mu.n
    if len(matrices) != n:
        raise SizeMismatch(f"{len(matrices)} matrices given for n = {n}")
    for k, m in enumerate(matrices, 1):
        violations = mu_symmetry_violations(m, mu)
        if violations:
            i, j = violations[0]
            raise NotMuSymmetric(f"M_{k} breaks mu-symmetry at ({i}, {j})", (i, j))

    names = tuple(f"x{i + 1}" for i in range(n)) + tuple(f"y{k + 1}" for k in range(n))
    algebra = FreeAlgebra(mu.field, names, (1,) * n + (2,) * n)
    one = mu.field.one
    relations: Dict[Pair, FreePoly] = {}
    for i in range(n):
        for j in range(n):
            lhs = FreePoly(algebra, {(i, j): one}) + FreePoly(algebra, {(j, i): mu[i, j]})
            rhs = FreePoly(algebra, {(n + k,): matrices[k][i, j] for k in range(n)})
            relations[(i, j)] = lhs - rhs
    return GscaPresentation(mu, tuple(matrices), algebra, relations)


@dataclass(frozen=True)
class EliminatedAlgebra:
    """y_k as quadratic forms in the x's, and the relations left among the x's."""

    source: GscaPresentation
    x_algebra: FreeAlgebra
    y_definitions: Tuple[FreePoly, ...]
    x_relations: Tuple[FreePoly, ...]

    @property
    def presentation(self) -> Presentation:
        return Presentation(self.x_algebra, self.x_relations)

    def substituted_relations(self) -> List[FreePoly]:
        """relations_a with every y_k replaced by its definition."""
        return [substitute_y(r, self) for r in self.source.relations_a.values()]


def _symmetric_part(mu: MuMatrix, x_algebra: FreeAlgebra, i: int, j: int) -> FreePoly:
    """x_i x_j + mu_ij x_j x_i in the free algebra on the x's alone."""
    one = mu.field.one
    return FreePoly(x_algebra, {(i, j): one}) + FreePoly(x_algebra, {(j, i): mu[i, j]})


def eliminate_y(gsca: GscaPresentation) -> EliminatedAlgebra:
    """
    Solve the unordered-pair relations for y_1..y_n.

    Each pair p = (i, j), i <= j, gives sum_k (M_k)_ij y_k = L_p with L_p the
    symmetric part. Row reducing [C | I] with pivots restricted to the y
    columns expresses each y_k through the L_p; rows whose y block vanishes
    are the x-relations, made monic for deglex.

    Raises:
        MatricesLinearlyDependent: If the M_k are dependent; carries the kernel
    """
    mu = gsca.mu
    field = mu.field
    n = gsca.n
    pairs = gsca.unordered_pairs()
    # one row per pair: the (i, j) entries of M_1..M_n
    coefficients = [[gsca.matrices[k][i, j] for k in range(n)] for i, j in pairs]
    # identity block records which L_p each reduced row combines
    augmented = [
        row + [field.one if q == p else field.zero for q in range(len(pairs))]
        for p, row in enumerate(coefficients)
    ]
    echelon = row_reduce(Matrix.from_rows(field, augmented), pivot_limit=n)
    if echelon.rank < n:
        null = kernel(Matrix.from_rows(field, coefficients, cols=n))
        raise MatricesLinearlyDependent(
            f"M_1..M_{n} span a space of dimension {echelon.rank} < {n}",
            [list(v) for v in null],
        )

    x_algebra = FreeAlgebra.standard(field, n)
    parts = [_symmetric_part(mu, x_algebra, i, j) for i, j in pairs]

    def combination(row) -> FreePoly:
        total = x_algebra.zero()
        for weight, part in zip(row[n:], parts):
            if weight:
                total = total + part.scale(weight)
        return total

    reduced = echelon.matrix
    # pivot rows define the y_k; pivots all lie in the first n columns
    definitions = [x_algebra.zero()] * n
    for r, column in enumerate(echelon.pivots):
        definitions[column] = combination(reduced.row(r))

    order = TermOrder(x_algebra)
    x_relations = []
    # rows below rank n have a zero y block
    for r in range(n, reduced.rows):
        relation = combination(reduced.row(r))
        if relation:
            x_relations.append(order.monic(relation))
    x_relations.sort(key=lambda f: order.key(order.leading_word(f)))
    logger.debug("eliminated %d y-generators, %d x-relations remain", n, len(x_relations))
    return EliminatedAlgebra(gsca, x_algebra, tuple(definitions), tuple(x_relations))


def substitute_y(f: FreePoly, eliminated: EliminatedAlgebra) -> FreePoly:
    """Rewrite a polynomial in the x's and y's as one in the x's alone."""
    x_algebra = eliminated.x_algebra
    images = x_algebra.gens() + list(eliminated.y_definitions)
    total = x_algebra.zero()
    for word, c in f.terms.items():
        term = x_algebra.one()
        for letter in word:
            term = term * images[letter]
        total = total + term.scale(c)
    return total
