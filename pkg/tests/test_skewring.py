import dataclasses

import pytest

from app.errors import (
    DegreeExceedsTruncation,
    DegreeZeroElement,
    DimensionMismatch,
    InhomogeneousElement,
    InvalidMuMatrix,
    NotMuSymmetric,
    SizeMismatch,
)
from app.tools.freealg import FreePoly
from app.tools.scalars import FieldSpec, Matrix, subspace_equal
from app.tools.skewring import (
    MuMatrix,
    SkewPoly,
    SkewRing,
    find_normalizing_sequence,
    is_mu_symmetric,
    is_normal,
    is_normalizing_sequence,
    mu_violations,
    quadric,
    spanning_check,
    straighten,
    verify_certificate,
)
from tests.helpers import random_mu, random_mu_symmetric


def test_mu_axioms(qq):
    """Test that broken mu entries are reported with 1-based positions."""
    with pytest.raises(InvalidMuMatrix) as excinfo:
        MuMatrix.from_rows(qq, [["1", "2"], ["1", "1"]])
    assert excinfo.value.entry == (1, 2)

    with pytest.raises(InvalidMuMatrix) as excinfo:
        MuMatrix.from_rows(qq, [["-1", "1"], ["1", "1"]])
    assert excinfo.value.entry == (1, 1)
    assert "mu_11" in str(excinfo.value)

    problems = mu_violations(qq, [[qq.one, qq.zero], [qq.one, qq.one]])
    assert problems[0][0] == (1, 2)
    assert MuMatrix.from_upper(qq, 2, {(0, 1): "1/3"})[1, 0] == qq.parse("3")


def test_straighten_examples(qq):
    """Test that straightening collects one mu factor per inversion."""
    mu = MuMatrix.from_upper(qq, 3, {(0, 1): 2, (0, 2): 3, (1, 2): 5})
    assert straighten((1, 0), mu) == ((1, 1, 0), qq.parse("2"))
    assert straighten((1, 0, 1), mu) == ((1, 2, 0), qq.parse("2"))
    assert straighten((2, 1, 0), mu) == ((1, 1, 1), qq.parse("30"))
    assert straighten((0, 1, 2), mu) == ((1, 1, 1), qq.one)
    assert straighten((1, 1, 0), mu) == ((1, 2, 0), qq.parse("4"))


def _bubble_factor(word, mu, rng):
    """Sort by adjacent swaps in random order, multiplying mu_{b,a} for each swap of z_a z_b (a > b)."""
    word = list(word)
    factor = mu.field.one
    while True:
        inversions = [p for p in range(len(word) - 1) if word[p] > word[p + 1]]
        if not inversions:
            return factor
        p = inversions[int(rng.integers(len(inversions)))]
        a, b = word[p], word[p + 1]
        factor = factor * mu[b, a]
        word[p], word[p + 1] = b, a


def test_straighten_is_independent_of_swap_order(qq, rng):
    """Test that any order of adjacent swaps gives the closed-form factor."""
    for case in range(200):
        n = 3 + case % 2
        mu = random_mu(rng, qq, n)
        word = tuple(int(x) for x in rng.integers(0, n, size=int(rng.integers(2, 7))))
        _, factor = straighten(word, mu)
        assert factor == _bubble_factor(word, mu, rng), f"swap order mattered for {word}"


def test_skew_multiplication_matches_free_product(qq, rng):
    """Test that multiplying straightened forms agrees with straightening the free product."""
    for _ in range(200):
        ring = SkewRing(random_mu(rng, qq, 3))
        polys = []
        for _ in range(2):
            terms = {}
            for _ in range(int(rng.integers(1, 4))):
                e = tuple(int(x) for x in rng.integers(0, 3, size=3))
                terms[e] = qq.convert(int(rng.integers(-3, 4)))
            polys.append(SkewPoly(ring, terms))
        f, g = polys
        assert f * g == ring.from_free(f.to_free() * g.to_free())


def test_quadrics_of_worked_example(example_system):
    """Test the raw and monic quadrics of the 2x2 family."""
    system = example_system(mu12=3, lam=1)
    assert [str(q) for q in system.raw] == ["2*z1*z2", "2*z1^2 + 2*z2^2"]
    assert [str(q) for q in system.monic] == ["z1*z2", "z1^2 + z2^2"]
    system = example_system(mu12=3, lam=-1)
    assert [str(q) for q in system.monic] == ["z1*z2", "z1^2 - z2^2"]


def test_zero_matrix_gives_zero_quadric(qq):
    """Test that the zero matrix is mu-symmetric with quadric 0."""
    mu = MuMatrix.from_upper(qq, 2, {(0, 1): 3})
    zero = Matrix.from_rows(qq, [[qq.zero, qq.zero], [qq.zero, qq.zero]])
    assert is_mu_symmetric(zero, mu)
    assert quadric(zero, mu).is_zero()


def test_quadric_rejects_non_symmetric_matrix(qq):
    """Test that quadric names the first entry breaking mu-symmetry."""
    mu = MuMatrix.from_upper(qq, 2, {(0, 1): 3})
    m = Matrix.from_rows(qq, [[qq.zero, qq.one], [qq.one, qq.zero]])
    assert not is_mu_symmetric(m, mu)
    with pytest.raises(NotMuSymmetric) as excinfo:
        quadric(m, mu)
    assert excinfo.value.entry == (1, 2)

    big = Matrix.from_rows(qq, [[qq.one] * 3 for _ in range(3)])
    with pytest.raises(SizeMismatch):
        is_mu_symmetric(big, mu)


def test_quadric_properties(qq, rng):
    """Test linearity of the quadric map and agreement with the free expansion."""
    for case in range(200):
        n = 2 + case % 2
        mu = random_mu(rng, qq, n)
        ring = SkewRing(mu)
        m = random_mu_symmetric(rng, mu)
        k = random_mu_symmetric(rng, mu)
        total = Matrix.from_rows(qq, [[m[i, j] + k[i, j] for j in range(n)] for i in range(n)])
        assert quadric(total, mu, ring) == quadric(m, mu, ring) + quadric(k, mu, ring)

        expansion = FreePoly(ring.algebra, {(i, j): m[i, j] for i in range(n) for j in range(n)})
        assert quadric(m, mu, ring) == ring.from_free(expansion)


# ---------- normality ----------


def test_q1_is_normal_with_witnesses(example_system, qq):
    """Test that z1*z2 is normal: z1*r = mu_21 r*z1 and r*z1 = mu_12 z1*r."""
    for mu12 in (2, 3, -1):
        system = example_system(mu12=mu12, lam=1)
        mu = system.mu
        certificate = is_normal(system.monic[0], system.ring)
        assert certificate.verdict is True
        assert certificate.degenerate is False
        assert certificate.degree == 2 and certificate.degree_checked == 3
        assert certificate.left_witnesses[0] == (mu[1, 0], qq.zero)
        assert certificate.right_witnesses[0] == (mu[0, 1], qq.zero)
        assert certificate.right_witnesses[1] == (qq.zero, mu[1, 0])
        assert verify_certificate(certificate, system.ring)


def test_certificate_identities(example_system):
    """Test the text form of the witness identities."""
    system = example_system(mu12=3, lam=1)
    lines = is_normal(system.monic[0], system.ring).identities()
    assert "z1*r = 1/3*r*z1 mod ideal" in lines
    assert "r*z1 = 3*z1*r mod ideal" in lines


def test_generators_are_normal(example_system):
    """Test that every z_i is normal in S."""
    system = example_system(mu12=3, lam=1)
    for i in range(2):
        assert is_normal(system.ring.gen(i), system.ring).verdict


def test_q2_normality_depends_on_mu(example_system):
    """Test that z1^2 + lambda z2^2 is normal in S exactly when lambda = 0 or mu_12^2 = 1."""
    ring_cases = [(3, 1, False), (2, 2, False), (-1, 1, True), (1, 2, True), (3, 0, True)]
    for mu12, lam, expected in ring_cases:
        system = example_system(mu12=mu12, lam=lam)
        certificate = is_normal(system.monic[1], system.ring)
        assert certificate.verdict is expected, f"mu12={mu12}, lambda={lam}"
        if not expected:
            assert certificate.obstruction is not None
        assert verify_certificate(certificate, system.ring)


def _brute_force_normal(r, ring, ideal):
    """Normality of a degree-2 element mod a degree-2 ideal, from spans in S_3."""
    gens = [ring.gen(i) for i in range(ring.n)]
    ideal_3 = [x for g in ideal for z in gens for x in (z * g, g * z)]
    left = [(z * r).coordinates(3) for z in gens] + [x.coordinates(3) for x in ideal_3]
    right = [(r * z).coordinates(3) for z in gens] + [x.coordinates(3) for x in ideal_3]
    return subspace_equal(left, right, ring.field)


def test_normality_matches_brute_force(example_system):
    """Test is_normal against spans computed directly in S_3, with and without the ideal (q1)."""
    for mu12 in (1, -1, 2, 3, "1/2"):
        for lam in (0, 1, 2, -1):
            system = example_system(mu12=mu12, lam=lam)
            ring = system.ring
            q1, q2 = system.monic
            assert is_normal(q2, ring).verdict == _brute_force_normal(q2, ring, [])
            modulo = is_normal(q2, ring, [q1])
            assert modulo.verdict == _brute_force_normal(q2, ring, [q1])
            assert modulo.verdict, f"q2 should be normal mod q1 (mu12={mu12}, lambda={lam})"
            assert verify_certificate(modulo, ring)


def test_degenerate_element(example_system):
    """Test that an element of the ideal is flagged degenerate but normal."""
    system = example_system(mu12=3, lam=1)
    q1 = system.monic[0]
    certificate = is_normal(q1, system.ring, [q1])
    assert certificate.verdict is True
    assert certificate.degenerate is True
    assert certificate.note == "degenerate: zero in quotient"
    assert verify_certificate(certificate, system.ring)

    zero = is_normal(SkewPoly(system.ring, {}), system.ring)
    assert zero.degenerate and zero.verdict


def test_normality_is_scale_invariant(example_system, qq):
    """Test that nonzero multiples of r and of the ideal generators give the same verdict."""
    for mu12, lam in ((3, 1), (-1, 2), (2, 0)):
        system = example_system(mu12=mu12, lam=lam)
        q1, q2 = system.raw
        base = is_normal(q2, system.ring).verdict
        assert is_normal(q2.scale(qq.parse("-5/2")), system.ring).verdict == base
        assert is_normal(q2, system.ring, [q1.scale(qq.parse("7"))]).verdict == is_normal(
            q2, system.ring, [q1]
        ).verdict


def test_tampered_certificate_fails_verification(example_system, qq):
    """Test that a certificate with a wrong witness is rejected."""
    system = example_system(mu12=3, lam=1)
    certificate = is_normal(system.monic[0], system.ring)
    forged = dataclasses.replace(certificate, left_witnesses=((qq.parse("2"), qq.zero), certificate.left_witnesses[1]))
    assert verify_certificate(forged, system.ring) is False


def test_normality_input_errors(example_system):
    """Test that inhomogeneous, constant and over-truncated inputs are rejected."""
    system = example_system(mu12=3, lam=1)
    ring = system.ring
    with pytest.raises(InhomogeneousElement):
        is_normal(ring.parse("z1 + z1*z2"), ring)
    with pytest.raises(InhomogeneousElement):
        is_normal(system.monic[0], ring, [ring.parse("z1 + z2^2")])
    with pytest.raises(DegreeZeroElement):
        is_normal(ring.monomial((0, 0)), ring)
    with pytest.raises(DegreeExceedsTruncation):
        is_normal(system.monic[0], ring, degree_bound=2)


def test_normalizing_sequence(example_system):
    """Test that (q1, q2) is normalizing and (q2, q1) fails at the first step."""
    system = example_system(mu12=3, lam=1)
    q1, q2 = system.monic
    check = is_normalizing_sequence([q1, q2], system.ring)
    assert check.normalizing is True
    assert len(check.certificates) == 2
    assert check.properness == "satisfied-by-grading"

    check = is_normalizing_sequence([q2, q1], system.ring)
    assert check.normalizing is False
    assert check.failed_step == 1


def test_spanning_check(example_system, qq):
    """Test span comparison of degree-2 families."""
    system = example_system(mu12=3, lam=1)
    q1, q2 = system.monic
    assert spanning_check(system.raw, system.monic, system.ring)
    assert spanning_check([q1 + q2, q2], [q1, q2], system.ring)
    assert not spanning_check([q1], [q1, q2], system.ring)
    with pytest.raises(DimensionMismatch):
        spanning_check([system.ring.gen(0)], [q1], system.ring)


# ---------- search ----------


def test_search_finds_basis_order(example_system):
    """Test that over QQ the basis in its given order is found first."""
    system = example_system(mu12=3, lam=1)
    result = find_normalizing_sequence(system.monic, system.ring)
    assert result.status == "found"
    assert result.phase == "basis-order"
    assert [str(r) for r in result.sequence] == ["z1*z2", "z1^2 + z2^2"]
    assert result.tests_used == 2
    assert spanning_check(result.sequence, system.monic, system.ring)
    for certificate in result.certificates:
        assert verify_certificate(certificate, system.ring)


def test_search_reorders_basis(example_system):
    """Test that a failing order is skipped in favour of a working permutation."""
    system = example_system(mu12=3, lam=1)
    q1, q2 = system.monic
    result = find_normalizing_sequence([q2, q1], system.ring)
    assert result.status == "found"
    assert [str(r) for r in result.sequence] == ["z1*z2", "z1^2 + z2^2"]
    assert result.tests_used == 3


def test_search_squares(qq):
    """Test that span{z1^2, z2^2} has a normalizing sequence for any mu."""
    ring = SkewRing(MuMatrix.from_upper(qq, 2, {(0, 1): 5}))
    result = find_normalizing_sequence([ring.parse("z1^2"), ring.parse("z2^2")], ring)
    assert result.status == "found"


def test_search_over_prime_field(example_system):
    """Test the stagewise search over GF(5)."""
    gf5 = FieldSpec.prime(5)
    system = example_system(mu12=2, lam=1, field=gf5)
    result = find_normalizing_sequence(system.monic, system.ring)
    assert result.status == "found"
    assert result.phase == "stagewise"
    assert result.tests_used == 2
    assert spanning_check(result.sequence, system.monic, system.ring)


def test_search_exhaustive_negative(example_system):
    """Test that a one-dimensional V without a normal element is a certified negative over GF(5)."""
    gf5 = FieldSpec.prime(5)
    system = example_system(mu12=2, lam=1, field=gf5)
    result = find_normalizing_sequence([system.monic[1]], system.ring)
    assert result.status == "not_found_exhaustive"
    assert result.exhaustive is True
    assert result.tests_used == 1


def test_search_over_rationals_is_never_a_certified_negative(example_system):
    """Test that an exhausted rational search reports unknown."""
    system = example_system(mu12=3, lam=1)
    result = find_normalizing_sequence([system.monic[1]], system.ring)
    assert result.status == "unknown"
    assert result.exhaustive is False
    assert any("not a certified negative" in note for note in result.notes)


def test_search_budget(example_system):
    """Test that running out of budget gives unknown with the tests spent."""
    system = example_system(mu12=3, lam=1)
    q1, q2 = system.monic
    result = find_normalizing_sequence([q2, q1], system.ring, budget=1)
    assert result.status == "unknown"
    assert result.tests_used == 1
    assert any("budget" in note for note in result.notes)


def test_search_rejects_non_quadratic_input(example_system):
    """Test that V must consist of degree-2 elements."""
    system = example_system(mu12=3, lam=1)
    with pytest.raises(InhomogeneousElement):
        find_normalizing_sequence([system.ring.gen(0)], system.ring)
