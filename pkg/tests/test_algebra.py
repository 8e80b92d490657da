from fractions import Fraction

import numpy as np
import pytest

from comproj.algebra import (
    Algebra,
    AlgebraError,
    NotProjectiveDimensionError,
    Quiver,
    Relation,
    cartan,
    global_dimension,
    path_from_names,
    proj_multiplicities,
    projective_rep,
    simple_rep,
)
from comproj.linalg import PrimeField, Rationals
from comproj.representations import validate_rep

from conftest import a2, a3_monomial, a3_path, square


def labels(alg):
    return sorted(p.label(alg.quiver) for p in alg.all_basis_paths())


def test_a3_monomial_basis():
    alg = a3_monomial()
    assert alg.dimension == 5
    assert labels(alg) == sorted(["e1", "e2", "e3", "alpha", "beta"])
    assert alg.nilpotency == 2


def test_a2_and_point():
    assert labels(a2()) == sorted(["e1", "e2", "a"])
    point = Algebra(Quiver.from_edges(1, []), [], PrimeField(3))
    assert point.dimension == 1
    assert cartan(point).tolist() == [[1]]


def test_cartan_matrices():
    assert cartan(a3_monomial()).tolist() == [[1, 0, 0], [1, 1, 0], [0, 1, 1]]
    assert cartan(a2()).tolist() == [[1, 0], [1, 1]]
    arrowless = Algebra(Quiver.from_edges(3, []), [], PrimeField(2))
    assert cartan(arrowless).tolist() == np.eye(3, dtype=int).tolist()


def test_projective_dims():
    alg = a3_monomial()
    assert [projective_rep(alg, a).dim for a in range(3)] == [(1, 1, 0), (0, 1, 1), (0, 0, 1)]
    assert projective_rep(a2(), 0).dim == (1, 1)
    for a in range(3):
        assert validate_rep(projective_rep(alg, a)) is None


def test_proj_multiplicities():
    assert proj_multiplicities(a3_monomial(), (2, 4, 4)) == (2, 2, 2)
    assert proj_multiplicities(a3_monomial(), (0, 0, 0)) == (0, 0, 0)
    assert proj_multiplicities(a2(), (0, 1)) == (0, 1)
    with pytest.raises(NotProjectiveDimensionError):
        proj_multiplicities(a2(), (1, 0))


def test_global_dimensions():
    assert global_dimension(a3_monomial()) == 2
    assert global_dimension(a2()) == 1
    assert global_dimension(a3_path()) == 1
    assert global_dimension(square()) == 2
    assert global_dimension(Algebra(Quiver.from_edges(2, []), [], PrimeField(2))) == 0


def test_commutative_square_basis():
    alg = square()
    assert alg.dimension == 9
    # the two paths a -> d are identified
    assert len(alg.basis[(0, 3)]) == 1


def test_simple_is_projective_without_arrows():
    alg = Algebra(Quiver.from_edges(2, []), [], PrimeField(2))
    assert simple_rep(alg, 1).dim == projective_rep(alg, 1).dim == (0, 1)


def test_non_admissible_rejected():
    loop = Quiver.from_edges(1, [("x", 0, 0)])
    with pytest.raises(AlgebraError, match="not admissible within cap"):
        Algebra(loop, [], PrimeField(2), length_cap=4)
    alg = Algebra(loop, [Relation.monomial(path_from_names(loop, ["x", "x", "x"]))], PrimeField(2))
    assert alg.dimension == 3 and alg.nilpotency == 3


def test_short_relation_rejected():
    q = Quiver.from_edges(2, [("a", 0, 1)])
    with pytest.raises(AlgebraError):
        Algebra(q, [Relation.monomial(path_from_names(q, ["a"]))], PrimeField(2))


def test_non_homogeneous_relations():
    loop = Quiver.from_edges(1, [("x", 0, 0)])
    xx, xxx = path_from_names(loop, ["x", "x"]), path_from_names(loop, ["x", "x", "x"])
    mixed = Relation(((Fraction(1), xx), (Fraction(-1), xxx)))
    # x^2 - x^3 alone never contains a power of x
    with pytest.raises(AlgebraError):
        Algebra(loop, [mixed], Rationals())
    # adding x^3 kills x^2 as well
    alg = Algebra(loop, [mixed, Relation.monomial(xxx)], Rationals())
    assert alg.dimension == 2 and alg.nilpotency == 2
