"""Shared fixtures: fields, the 2x2 worked example and seeded randomness."""

import json

import numpy as np
import pytest

from app.tools.scalars import FieldSpec
from app.tools.skewring import QuadricSystem
from tests.helpers import example_data

SEED = 20240611


@pytest.fixture
def qq():
    return FieldSpec.rationals()


@pytest.fixture
def gf5():
    return FieldSpec.prime(5)


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


@pytest.fixture
def worked_example():
    """Factory for (mu, [M_1, M_2]) of the 2x2 family."""
    return example_data


@pytest.fixture
def example_system():
    """Factory for the quadric system of the 2x2 family."""

    def build(mu12=3, lam=1, field=None):
        mu, matrices = example_data(mu12, lam, field)
        return QuadricSystem.build(mu, matrices)

    return build


@pytest.fixture
def instance_file(tmp_path):
    """Write a 2x2-family instance to disk and return its path."""

    def write(lam="1", mu12="3", field=None, name="instance.json", **overrides):
        document = {
            "field": field or {"kind": "rationals"},
            "n": 2,
            "parameters": {"lambda": lam, "mu12": mu12},
            "mu": [["1", "mu12"], ["1/mu12", "1"]],
            "matrices": [
                [["0", "1"], ["1/mu12", "0"]],
                [["2", "0"], ["0", "2*lambda"]],
            ],
            "options": {"max_degree": 4},
        }
        document.update(overrides)
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return write
