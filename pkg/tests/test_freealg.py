import pytest

from app.errors import (
    FieldMismatch,
    GeneratorMismatch,
    InvalidPresentation,
    NotDegreeTwo,
    ParseError,
    ZeroRepresentative,
)
from app.tools.freealg import FreeAlgebra, FreePoly, Presentation, evaluate_deg2, validate_presentation
from app.tools.geometry import BiPoint
from app.tools.scalars import ExtensionField


@pytest.fixture
def algebra(qq):
    return FreeAlgebra.standard(qq, 2)


def test_print_order(algebra):
    """Test that terms print by degree first, then lexicographically."""
    f = algebra.parse("x1^2 + 3*x2")
    assert str(f) == "3*x2 + x1^2"
    assert str(algebra.parse("-x1")) == "-x1"
    assert str(algebra.zero()) == "0"
    assert str(algebra.parse("x2*x1 - 2/3*x2*x1")) == "1/3*x2*x1"


def test_multiplication_does_not_commute(algebra):
    """Test that (x1 + x2)(x1 - x2) keeps x1*x2 and x2*x1 apart."""
    x1, x2 = algebra.gens()
    product = (x1 + x2) * (x1 - x2)
    assert str(product) == "x1^2 - x1*x2 + x2*x1 - x2^2"
    assert x1 * x2 != x2 * x1


def test_parse_round_trip(algebra):
    """Test that printing and re-parsing gives the same polynomial."""
    for text in ("x1*x2 - x2*x1", "2*x1^3 + 1/2*x2*x1*x2", "x2^2 - 5*x1^2", "7"):
        f = algebra.parse(text)
        assert algebra.parse(str(f)) == f, f"round trip failed for {text!r}"


def test_parse_errors(algebra):
    """Test that unknown generators and dangling signs are rejected."""
    for bad in ("x3", "x1 +", "x1**x2", "", "x1*"):
        with pytest.raises(ParseError):
            algebra.parse(bad)


def test_algebra_validation(qq):
    """Test that generator names and degrees are checked."""
    with pytest.raises(InvalidPresentation):
        FreeAlgebra(qq, ("x", "x"))
    with pytest.raises(InvalidPresentation):
        FreeAlgebra(qq, ("x", "y"), (1, 0))
    with pytest.raises(InvalidPresentation):
        FreeAlgebra(qq, ("1x",))


def test_generator_mismatch(qq):
    """Test that polynomials over different free algebras cannot be combined."""
    f = FreeAlgebra.standard(qq, 2).gen(0)
    g = FreeAlgebra.standard(qq, 3).gen(0)
    with pytest.raises(GeneratorMismatch):
        f + g
    with pytest.raises(GeneratorMismatch):
        f * g


def test_presentation_rejects_zero_relation(algebra):
    """Test that a zero relation is not a valid presentation."""
    with pytest.raises(InvalidPresentation):
        Presentation(algebra, (algebra.zero(),))


def test_validate_inhomogeneous(qq):
    """Test that K[x, y]/(x^2 - y) with deg x = deg y = 1 is not graded."""
    presentation = Presentation.parse(qq, ["x", "y"], ["x*y - y*x", "x^2 - y"])
    report = validate_presentation(presentation)
    assert report.graded is False
    assert report.quadratic is False
    assert any("not homogeneous" in reason for reason in report.reasons)


def test_validate_not_generated_in_degree_one(qq):
    """Test that the same relations with deg y = 2 are graded but not quadratic."""
    presentation = Presentation.parse(qq, ["x", "y"], ["x*y - y*x", "x^2 - y"], degrees=[1, 2])
    report = validate_presentation(presentation)
    assert report.graded is True
    assert report.generated_in_degree_one is False
    assert report.quadratic is False


def test_validate_cubic_relation(qq):
    """Test that K[x]/(x^3) is graded but not quadratic."""
    report = validate_presentation(Presentation.parse(qq, ["x"], ["x^3"]))
    assert report.graded is True
    assert report.generated_in_degree_one is True
    assert report.quadratic is False


def test_validate_polynomial_ring(qq):
    """Test that the commutative polynomial ring is quadratic."""
    report = validate_presentation(Presentation.commutative(qq, 3))
    assert report.quadratic is True
    assert report.reasons == []


def test_evaluate_deg2(qq):
    """Test that z_i z_j evaluates to a_i b_j."""
    algebra = FreeAlgebra.standard(qq, 2, "z")
    f = algebra.parse("z2*z1 - 3*z1*z2")
    point = BiPoint(qq, (qq.one, qq.parse("2")), (qq.one, qq.parse("3")))
    # a = (1, 2), b = (1, 3): a2 b1 - 3 a1 b2 = 2 - 9
    assert evaluate_deg2(f, point) == qq.parse("-7")


def test_evaluate_deg2_errors(qq, gf5):
    """Test that evaluation rejects non-quadratic input, zero vectors and foreign fields."""
    algebra = FreeAlgebra.standard(qq, 2, "z")
    point = BiPoint(qq, (qq.one, qq.zero), (qq.one, qq.zero))
    with pytest.raises(NotDegreeTwo):
        evaluate_deg2(algebra.parse("z1"), point)
    with pytest.raises(NotDegreeTwo):
        evaluate_deg2(algebra.parse("z1^3"), point)
    with pytest.raises(ZeroRepresentative):
        evaluate_deg2(algebra.parse("z1*z2"), BiPoint(qq, (qq.zero, qq.zero), (qq.one, qq.zero)))
    with pytest.raises(FieldMismatch):
        evaluate_deg2(algebra.parse("z1*z2"), BiPoint(gf5, (gf5.one, gf5.zero), (gf5.one, gf5.zero)))


def test_evaluate_deg2_over_extension(qq):
    """Test that rational coefficients reduce mod p at points over F_{p^k}."""
    ext = ExtensionField(5, 2)
    algebra = FreeAlgebra.standard(qq, 2, "z")
    f = FreePoly(algebra, {(0, 0): qq.parse("1/3"), (1, 1): qq.one})
    point = BiPoint(ext, (ext.one, ext.one), (ext.one, ext.one))
    # 1/3 = 2 mod 5, so the value is 3
    assert evaluate_deg2(f, point).coeffs == (3,)
