"""Builders shared by the test modules."""

from app.tools.scalars import FieldSpec, Matrix
from app.tools.skewring import MuMatrix


def example_data(mu12=3, lam=1, field=None):
    """mu with mu_12 = mu12, M_1 = [[0, 1], [mu_21, 0]] and M_2 = diag(2, 2*lam)."""
    field = field or FieldSpec.rationals()
    mu = MuMatrix.from_upper(field, 2, {(0, 1): mu12})
    zero, one, two = field.zero, field.one, field.convert(2)
    m1 = Matrix.from_rows(field, [[zero, one], [mu[1, 0], zero]])
    m2 = Matrix.from_rows(field, [[two, zero], [zero, two * field.convert(lam)]])
    return mu, [m1, m2]


def random_mu(rng, field, n, values=("1", "-1", "2", "-2", "3", "1/2")):
    """Random valid mu from a small pool of nonzero entries above the diagonal."""
    upper = {}
    for i in range(n):
        for j in range(i + 1, n):
            upper[(i, j)] = field.parse(values[int(rng.integers(len(values)))])
    return MuMatrix.from_upper(field, n, upper)


def random_mu_symmetric(rng, mu, low=-3, high=4):
    """Random M with M_ij = mu_ij M_ji: free entries on and above the diagonal."""
    field = mu.field
    n = mu.n
    rows = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            value = field.convert(int(rng.integers(low, high)))
            rows[i][j] = value
            rows[j][i] = mu[j, i] * value
    return Matrix.from_rows(field, rows)
