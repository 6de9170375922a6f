import pytest
from pydantic import ValidationError

from app.errors import DimensionMismatch, DivisionByZero, FieldMismatch, ParseError
from app.tools.scalars import (
    ExtensionField,
    FieldSpec,
    Matrix,
    kernel,
    rank,
    row_reduce,
    solve_in_span,
    subspace_equal,
)


def test_field_validation():
    """Test that only odd primes are accepted as prime fields."""
    assert FieldSpec.prime(5).label == "GF(5)"
    assert FieldSpec.rationals().label == "QQ"
    for bad in (2, 4, 1, None):
        with pytest.raises(ValidationError):
            FieldSpec(kind="prime", p=bad)
    with pytest.raises(ValidationError):
        FieldSpec(kind="rationals", p=3)


def test_parse_and_format(qq, gf5):
    """Test that scalar strings parse exactly and print back in canonical form."""
    assert qq.format(qq.parse("-3/6")) == "-1/2"
    assert qq.format(qq.parse(" 4 ")) == "4"
    assert gf5.format(gf5.parse("-1")) == "4"
    assert gf5.format(gf5.parse("1/2")) == "3", "2 * 3 = 6 = 1 mod 5"
    for bad in ("", "x", "1/", "1.5", "2^3"):
        with pytest.raises(ParseError):
            qq.parse(bad)


def test_zero_denominators(qq, gf5):
    """Test that division by zero is reported, including denominators vanishing mod p."""
    with pytest.raises(DivisionByZero):
        qq.parse("1/0")
    with pytest.raises(DivisionByZero):
        gf5.parse("3/10")
    with pytest.raises(DivisionByZero):
        gf5.inv(gf5.zero)
    with pytest.raises(ZeroDivisionError):
        qq.inv(qq.zero)


def test_prime_field_inverses():
    """Test that every nonzero element of GF(7) has an inverse."""
    field = FieldSpec.prime(7)
    for x in field.elements():
        if x:
            assert x * field.inv(x) == field.one, f"inverse of {field.format(x)} is wrong"


def test_checked_arithmetic_rejects_foreign_scalars(qq, gf5):
    """Test that mixing elements of different fields raises FieldMismatch."""
    with pytest.raises(FieldMismatch):
        qq.add(qq.one, gf5.one)
    with pytest.raises(FieldMismatch):
        gf5.mul(gf5.one, qq.parse("1/2"))


def test_residue(qq, gf5):
    """Test that rationals reduce mod p exactly when the denominator is a unit."""
    assert qq.residue(qq.parse("1/3"), 5) == 2
    assert qq.residue(qq.parse("-1"), 5) == 4
    with pytest.raises(DivisionByZero):
        qq.residue(qq.parse("1/5"), 5)
    with pytest.raises(FieldMismatch):
        gf5.residue(gf5.one, 7)


def test_row_reduce_pivots(qq):
    """Test that pivoting picks the first nonzero column from the left."""
    rows = ([0, 2, 4], [0, 1, 2], [1, 0, 1])
    m = Matrix.from_rows(qq, [[qq.convert(x) for x in row] for row in rows])
    echelon = row_reduce(m)
    assert echelon.rank == 2
    assert echelon.pivots == (0, 1)
    assert echelon.matrix.row(0) == (qq.one, qq.zero, qq.one)


def test_kernel_and_solve(qq):
    """Test that kernel vectors are annihilated and solve_in_span finds coefficients."""
    rows = [[qq.convert(x) for x in row] for row in ([1, 2, 3], [2, 4, 6], [0, 1, 1])]
    m = Matrix.from_rows(qq, rows)
    null = kernel(m)
    assert len(null) == 1
    for v in null:
        for row in rows:
            assert sum((a * b for a, b in zip(row, v)), qq.zero) == 0

    basis = [rows[0], rows[2]]
    target = [qq.convert(x) for x in (3, 8, 11)]
    coeffs = solve_in_span(basis, target, qq)
    assert coeffs == (qq.convert(3), qq.convert(2))
    assert solve_in_span(basis, [qq.one, qq.zero, qq.zero], qq) is None


def test_dimension_mismatch(qq):
    """Test that vectors of different lengths are rejected."""
    with pytest.raises(DimensionMismatch):
        rank([[qq.one], [qq.one, qq.zero]], qq)
    with pytest.raises(DimensionMismatch):
        subspace_equal([[qq.one]], [[qq.one, qq.one]], qq)


def test_subspace_equal_properties(qq, rng):
    """Test that span equality is invariant under invertible recombination and detects extra vectors."""
    cases = 0
    for _ in range(200):
        length = int(rng.integers(2, 5))
        count = int(rng.integers(1, length + 1))
        vectors = [[qq.convert(int(x)) for x in rng.integers(-3, 4, size=length)] for _ in range(count)]
        # upper unitriangular recombination keeps the span
        mixed = []
        for i in range(count):
            v = list(vectors[i])
            for j in range(i + 1, count):
                c = qq.convert(int(rng.integers(-2, 3)))
                v = [a + c * b for a, b in zip(v, vectors[j])]
            mixed.append(v)
        assert subspace_equal(vectors, mixed, qq), f"recombination changed the span of {vectors}"
        assert subspace_equal(mixed, vectors, qq)

        extra = [qq.convert(int(x)) for x in rng.integers(-3, 4, size=length)]
        grows = rank(vectors + [extra], qq) > rank(vectors, qq)
        assert subspace_equal(vectors, vectors + [extra], qq) is not grows
        cases += 1
    assert cases == 200


def test_extension_field_arithmetic():
    """Test that every nonzero element of F_9 is invertible and x^9 = x holds."""
    ext = ExtensionField(3, 2)
    elements = list(ext.elements())
    assert len(elements) == ext.size == 9
    assert len({e.coeffs for e in elements}) == 9
    for x in elements:
        if x:
            assert (x * ext.inv(x)).coeffs == ext.one.coeffs
        # x^9 = x
        power = ext.one
        for _ in range(9):
            power = power * x
        assert power.coeffs == x.coeffs
    with pytest.raises(DivisionByZero):
        ext.inv(ext.zero)


def test_extension_field_lift(qq):
    """Test that lift reduces rationals into the prime subfield."""
    ext = ExtensionField(5, 2)
    assert ext.lift(qq, qq.parse("1/3")).coeffs == (2,)
    assert ext.lift(qq, qq.parse("5")).coeffs == ()


def test_kernel_over_extension_field():
    """Test that the linear algebra runs over F_{p^k} unchanged."""
    ext = ExtensionField(3, 2)
    t = ext.element([1, 0])
    m = Matrix.from_rows(ext, [[ext.one, t], [t, t * t]], cols=2)
    null = kernel(m)
    assert len(null) == 1
    v = null[0]
    for i in range(2):
        assert not (m[i, 0] * v[0] + m[i, 1] * v[1])
