"""
The zero locus Z of the mu-relations and base-point freeness of quadric systems.

At p = (a, b) in P^{n-1} x P^{n-1} the relation z_j z_i - mu_ij z_i z_j reads
a_j b_i - mu_ij a_i b_j = 0. On points whose a has support exactly T this
forces b off T to vanish and b_i = mu_it a_i b_t / a_t on T (anchor t = min T),
which is consistent iff mu_ij mu_jk = mu_ik on T. Z is therefore a finite
union of components indexed by supports, and a quadric system is base-point
free iff, on every consistent component, the quadrics restricted to the
parametrization have no common zero with all a_i != 0 (i in T). That last
question is decided with a commutative Gröbner basis: setting a_t = 1 and
adjoining s * prod a_i - 1, the component is empty iff 1 lies in the ideal.

A finite-field scan over F_{p^k} is also provided; a point it finds is a
sound counterexample, while finding none is only heuristic.
"""

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from typing import Any, Iterator, List, Optional, Sequence, Tuple

from sympy import grevlex, ring, solve_poly_system
from sympy.polys.groebnertools import groebner
from sympy.polys.polyerrors import PolynomialError

from ..config import config
from ..errors import DivisionByZero, FieldMismatch, UnsupportedFieldForScan, UnsupportedSize
from ..models import BpfMode
from .freealg import FreePoly, evaluate_deg2
from .scalars import ExtensionField, FieldSpec, Matrix, Scalar, kernel
from .skewring import MuMatrix, QuadricSystem

logger = logging.getLogger(__name__)

# small nonzero values tried before solving for a rational witness
_WITNESS_GRID = ("1", "-1", "2", "-2", "1/2", "-1/2", "3", "-3")


@dataclass(frozen=True)
class BiPoint:
    """A point of P^{n-1} x P^{n-1}, stored as its canonical representative."""

    field: Any
    a: Tuple[Scalar, ...]
    b: Tuple[Scalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", _normalize(self.field, self.a))
        object.__setattr__(self, "b", _normalize(self.field, self.b))

    def __str__(self) -> str:
        fmt = self.field.format
        return f"(({','.join(fmt(x) for x in self.a)}),({','.join(fmt(x) for x in self.b)}))"


def _normalize(field: Any, vector: Sequence[Scalar]) -> Tuple[Scalar, ...]:
    """Scale so the first nonzero coordinate is 1; the zero vector is left as is."""
    vector = tuple(vector)
    first = next((x for x in vector if x), None)
    if first is None:
        return vector
    scale = field.inv(first)
    return tuple(x * scale for x in vector)


@dataclass(frozen=True)
class ZComponent:
    """Points of Z whose a-coordinate has support exactly `support` (0-based)."""

    mu: MuMatrix
    support: Tuple[int, ...]
    consistent: bool
    violated_triple: Optional[Tuple[int, int, int]] = None

    @property
    def anchor(self) -> int:
        return self.support[0]

    def b_coefficient(self, i: int) -> Scalar:
        """b_i = b_coefficient(i) * a_i on the component (with b_t = a_t)."""
        if i not in self.support:
            return self.mu.field.zero
        return self.mu[i, self.anchor]

    def point(self, a: Sequence[Scalar]) -> BiPoint:
        """The point of the component over a; a must have support exactly `support`."""
        if tuple(i for i, x in enumerate(a) if x) != self.support:
            raise ValueError(f"a = {tuple(a)} does not have support {self.support}")
        if not self.consistent:
            raise ValueError(f"support {self.support} carries no point of Z")
        b = tuple(self.b_coefficient(i) * x for i, x in enumerate(a))
        return BiPoint(self.mu.field, tuple(a), b)

    def label(self) -> str:
        return "{" + ",".join(str(i + 1) for i in self.support) + "}"


def _supports(n: int) -> Iterator[Tuple[int, ...]]:
    for size in range(1, n + 1):
        yield from itertools.combinations(range(n), size)


def zero_locus_components(mu: MuMatrix) -> List[ZComponent]:
    """
    One component per nonempty support, ordered by size then lexicographically.

    Inconsistent supports are kept, marked empty with a violated triple
    (1-based) so reports can show why.
    """
    components = []
    for support in _supports(mu.n):
        violated = next(
            (
                (i + 1, j + 1, k + 1)
                for i, j, k in itertools.product(support, repeat=3)
                if mu[i, j] * mu[j, k] != mu[i, k]
            ),
            None,
        )
        components.append(ZComponent(mu, support, violated is None, violated))
    return components


# ---------- commutative Gröbner bases ----------


@dataclass(frozen=True)
class CommutativeBasis:
    ring: Any
    basis: Tuple[Any, ...]

    @property
    def contains_one(self) -> bool:
        return any(g.is_ground and g for g in self.basis)

    def __str__(self) -> str:
        return "[" + ", ".join(str(g.as_expr()) for g in self.basis) + "]"


def commutative_gb(polys: Sequence[Any], poly_ring: Any) -> CommutativeBasis:
    """Reduced Gröbner basis of the ideal generated by polys in a sympy PolyRing."""
    generators = [p for p in polys if p]
    if not generators:
        return CommutativeBasis(poly_ring, ())
    return CommutativeBasis(poly_ring, tuple(groebner(generators, poly_ring)))


# ---------- base-point freeness ----------


@dataclass(frozen=True)
class ComponentCertificate:
    """Emptiness data for one support component."""

    support: Tuple[int, ...]
    consistent: bool
    empty: bool
    violated_triple: Optional[Tuple[int, int, int]] = None
    polynomials: Tuple[str, ...] = ()
    groebner_basis: Optional[str] = None

    def label(self) -> str:
        return "{" + ",".join(str(i + 1) for i in self.support) + "}"


@dataclass(frozen=True)
class BpfVerdict:
    base_point_free: bool
    certified: bool
    mode: str
    witness: Optional[BiPoint] = None
    components: Tuple[ComponentCertificate, ...] = ()
    points_scanned: int = 0
    label: str = "exact"
    notes: Tuple[str, ...] = dc_field(default_factory=tuple)


def _restricted_polynomials(system: QuadricSystem, component: ZComponent):
    """
    q_k on the component with a_t = 1, plus s * prod_{i != t} a_i - 1.

    Returns (ring, coordinate map, quadric polynomials, nonvanishing polynomial).
    """
    field = system.mu.field
    t = component.anchor
    others = [i for i in component.support if i != t]
    names = [f"a{i + 1}" for i in others] + ["s"]
    poly_ring, *gens = ring(",".join(names), field.domain, grevlex)
    coordinate = {t: poly_ring.one}
    for i, g in zip(others, gens):
        coordinate[i] = g
    s = gens[-1]

    quadrics = []
    for q in system.raw:
        total = poly_ring.zero
        for (i, j), c in q.to_free().terms.items():
            if i in coordinate and j in coordinate:
                total += coordinate[i] * coordinate[j] * (c * component.b_coefficient(j))
        quadrics.append(total)
    product = poly_ring.one
    for i in others:
        product *= coordinate[i]
    return poly_ring, coordinate, quadrics, s * product - 1


def _witness_from(component: ZComponent, coordinate: dict, values: dict) -> BiPoint:
    field = component.mu.field
    a = []
    for i in range(component.mu.n):
        if i == component.anchor:
            a.append(field.one)
        elif i in coordinate:
            a.append(values[i])
        else:
            a.append(field.zero)
    return component.point(a)


def _is_witness(point: BiPoint, relations: Sequence[FreePoly], quadrics: Sequence[FreePoly]) -> bool:
    return all(not evaluate_deg2(f, point) for f in list(relations) + list(quadrics))


def _search_witness(system: QuadricSystem, component: ZComponent, coordinate: dict, quadrics) -> Optional[BiPoint]:
    """A point of the component rational over the working field, if one is found."""
    field = system.mu.field
    others = [i for i in component.support if i != component.anchor]
    relations = system.ring.relations()
    free_quadrics = [q.to_free() for q in system.raw]

    def accept(values: dict) -> Optional[BiPoint]:
        point = _witness_from(component, coordinate, values)
        if _is_witness(point, relations, free_quadrics):
            return point
        logger.warning("candidate base point %s failed verification", point)
        return None

    def vanishes(values: dict) -> bool:
        args = [values[i] for i in others] + [field.zero]
        return all(not p(*args) for p in quadrics) if others else all(not p for p in quadrics)

    if not others:
        return accept({}) if all(not p for p in quadrics) else None

    if field.is_prime_field:
        nonzero = [x for x in field.elements() if x]
        for count, combo in enumerate(itertools.product(nonzero, repeat=len(others))):
            if count >= config.WITNESS_LIMIT:
                logger.info("witness enumeration stopped at %d points", count)
                break
            values = dict(zip(others, combo))
            if vanishes(values):
                return accept(values)
        return None

    grid = [field.parse(v) for v in _WITNESS_GRID]
    for combo in itertools.product(grid, repeat=len(others)):
        values = dict(zip(others, combo))
        if vanishes(values):
            return accept(values)

    symbols = [coordinate[i].as_expr() for i in others]
    exprs = [p.as_expr() for p in quadrics if p]
    if not exprs:
        return None
    try:
        solutions = solve_poly_system(exprs, *symbols) or []
    except (NotImplementedError, PolynomialError) as e:
        logger.debug("no closed-form solution for component %s: %s", component.label(), e)
        return None
    for solution in solutions:
        if all(v.is_Rational and v != 0 for v in solution):
            values = {i: field.convert(v) for i, v in zip(others, solution)}
            if vanishes(values):
                return accept(values)
    return None


def _exact(system: QuadricSystem) -> BpfVerdict:
    n = system.mu.n
    if n > config.EXACT_MAX_N:
        raise UnsupportedSize(
            f"exact base-point-freeness supports n <= {config.EXACT_MAX_N}, got n = {n}"
        )
    certificates = []
    witness: Optional[BiPoint] = None
    free = True
    for component in zero_locus_components(system.mu):
        if not component.consistent:
            certificates.append(
                ComponentCertificate(component.support, False, True, component.violated_triple)
            )
            continue
        poly_ring, coordinate, quadrics, nonvanishing = _restricted_polynomials(system, component)
        basis = commutative_gb(list(quadrics) + [nonvanishing], poly_ring)
        empty = basis.contains_one
        certificates.append(
            ComponentCertificate(
                component.support,
                True,
                empty,
                polynomials=tuple(str(p.as_expr()) for p in quadrics),
                groebner_basis=str(basis),
            )
        )
        if empty:
            continue
        free = False
        if witness is None:
            witness = _search_witness(system, component, coordinate, quadrics)
        logger.debug("component %s carries base points", component.label())

    notes = []
    if not free and witness is None:
        notes.append(f"base points exist over the algebraic closure but none is rational over {system.mu.field.label}")
    return BpfVerdict(free, True, "exact", witness, tuple(certificates), notes=tuple(notes))


def _scan_field(system: QuadricSystem, mode: BpfMode) -> ExtensionField:
    field = system.mu.field
    if field.is_prime_field and field.p != mode.p:
        raise UnsupportedFieldForScan(f"a system over {field.label} cannot be scanned over GF({mode.p})")
    return ExtensionField(mode.p, mode.k)


def _lift_all(ext: ExtensionField, field: FieldSpec, values) -> List:
    try:
        return [ext.lift(field, x) for x in values]
    except (DivisionByZero, FieldMismatch) as e:
        raise UnsupportedFieldForScan(f"cannot reduce the system mod {ext.p}: {e}") from e


def _projective(ext: ExtensionField, n: int) -> Iterator[Tuple]:
    elements = list(ext.elements())
    for lead in range(n):
        for tail in itertools.product(elements, repeat=n - lead - 1):
            yield (ext.zero,) * lead + (ext.one,) + tuple(tail)


def _scan(system: QuadricSystem, mode: BpfMode) -> BpfVerdict:
    field = system.mu.field
    n = system.mu.n
    ext = _scan_field(system, mode)
    mu = [_lift_all(ext, field, row) for row in system.mu.entries]
    quadrics = [
        list(zip(q.to_free().terms.keys(), _lift_all(ext, field, q.to_free().terms.values())))
        for q in system.raw
    ]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    scanned = 0
    for a in _projective(ext, n):
        # b solves a_j b_i - mu_ij a_i b_j = 0 for all i < j
        rows = []
        for i, j in pairs:
            row = [ext.zero] * n
            row[i] = row[i] + a[j]
            row[j] = row[j] - mu[i][j] * a[i]
            rows.append(row)
        fibre = kernel(Matrix.from_rows(ext, rows, cols=n)) if rows else [
            tuple(ext.one if c == k else ext.zero for c in range(n)) for k in range(n)
        ]
        # the fibre over a is at most a line
        for b in fibre[:1]:
            scanned += 1
            if all(not sum((c * a[i] * b[j] for (i, j), c in terms), ext.zero) for terms in quadrics):
                witness = BiPoint(ext, a, b)
                logger.info("scan over %s found base point %s", ext.label, witness)
                return BpfVerdict(False, True, str(mode), witness, points_scanned=scanned, label="witness")
    return BpfVerdict(
        True,
        False,
        str(mode),
        points_scanned=scanned,
        label="heuristic",
        notes=(f"no base point over {ext.label}; uncertified",),
    )


def is_base_point_free(system: QuadricSystem, mode: Optional[BpfMode] = None) -> BpfVerdict:
    """
    Decide whether Z and V(q_1..q_n) are disjoint.

    Raises:
        UnsupportedSize: Exact mode with n above GSCA_EXACT_MAX_N
        UnsupportedFieldForScan: Scan mode when the system does not reduce mod p
    """
    mode = mode or BpfMode.parse(config.BPF_MODE)
    if mode.kind == "scan":
        return _scan(system, mode)
    return _exact(system)


def z_point_count(mu: MuMatrix, ext: ExtensionField) -> int:
    """Number of points of Z over F_{p^k}, counted by the support decomposition."""
    q = ext.size
    return sum(
        (q - 1) ** (len(c.support) - 1) for c in zero_locus_components(mu) if c.consistent
    )
