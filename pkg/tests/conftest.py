from fractions import Fraction

import numpy as np
import pytest

from comproj.algebra import Algebra, Quiver, Relation, path_from_names
from comproj.linalg import PrimeField, Rationals

F5 = PrimeField(5)


def a2(field=F5) -> Algebra:
    q = Quiver.from_edges(2, [("a", 0, 1)], ["1", "2"])
    return Algebra(q, [], field)


def a3_path(field=F5) -> Algebra:
    q = Quiver.from_edges(3, [("alpha", 0, 1), ("beta", 1, 2)], ["1", "2", "3"])
    return Algebra(q, [], field)


def a3_monomial(field=F5) -> Algebra:
    q = Quiver.from_edges(3, [("alpha", 0, 1), ("beta", 1, 2)], ["1", "2", "3"])
    return Algebra(q, [Relation.monomial(path_from_names(q, ["beta", "alpha"]))], field)


def square(field=F5) -> Algebra:
    q = Quiver.from_edges(4, [("x", 0, 1), ("y", 0, 2), ("u", 1, 3), ("v", 2, 3)], ["a", "b", "c", "d"])
    rel = Relation(
        ((Fraction(1), path_from_names(q, ["u", "x"])), (Fraction(-1), path_from_names(q, ["v", "y"])))
    )
    return Algebra(q, [rel], field)


TEST_ALGEBRAS = {"A2": a2, "A3_monomial": a3_monomial, "square": square}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=[F5, Rationals()], ids=["F5", "Q"])
def any_field(request):
    return request.param
