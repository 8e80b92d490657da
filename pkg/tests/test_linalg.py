from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from comproj.linalg import NotInvertibleError, PrimeField, Rationals, block_diag, field_from_spec


def oracle_rank(mat, p):
    dm = DomainMatrix([[GF(p)(int(x)) for x in row] for row in mat.tolist()], mat.shape, GF(p))
    return dm.rank()


matrices = st.tuples(st.sampled_from([2, 3, 5, 7, 101]), st.integers(0, 6), st.integers(0, 6), st.integers(0, 2**32))


@settings(max_examples=80, deadline=None)
@given(matrices)
def test_rank_and_kernel_match_sympy_mod_p(args):
    p, r, c, seed = args
    f = PrimeField(p)
    m = f.random_array(np.random.default_rng(seed), (r, c))
    rank = f.rank(m)
    if r and c:
        assert rank == oracle_rank(m, p)
    k = f.kernel_basis(m)
    assert k.shape == (c, c - rank)
    assert f.is_zero(f.matmul(m, k))
    assert f.rank(k) == c - rank


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32))
def test_rationals_rank_matches_sympy(r, c, seed):
    q = Rationals()
    m = q.random_array(np.random.default_rng(seed), (r, c))
    assert q.rank(m) == sympy.Matrix(m.tolist()).rank()


def test_rref_is_canonical():
    f = PrimeField(7)
    m = f.array([[0, 2, 4], [0, 1, 2], [3, 0, 1]])
    red = f.rref(m)
    assert red.pivots == (0, 1) or list(red.pivots) == [0, 1]
    assert red.rank == 2
    assert f.equal(red.reduced[:2], f.array([[1, 0, 5], [0, 1, 2]]))


def test_solve_and_inconsistent():
    q = Rationals()
    a = q.array([[1, 1], [1, -1]])
    x = q.solve(a, q.array([3, 1]))
    assert list(x) == [Fraction(2), Fraction(1)]
    assert q.solve(q.array([[1, 1], [2, 2]]), q.array([1, 3])) is None


def test_one_sided_inverses():
    f = PrimeField(5)
    col = f.array([[1], [1]])
    left = f.one_sided_inverse(col, "left")
    assert f.equal(f.matmul(left, col), f.eye(1))
    row = f.array([[2, 3, 0]])
    right = f.one_sided_inverse(row, "right")
    assert f.equal(f.matmul(row, right), f.eye(1))


def test_inverse_and_errors():
    f = PrimeField(5)
    m = f.array([[1, 2], [3, 4]])
    assert f.equal(f.matmul(m, f.inverse(m)), f.eye(2))
    with pytest.raises(NotInvertibleError):
        f.inverse(f.array([[1, 2], [2, 4]]))
    with pytest.raises(ValueError):
        PrimeField(6)


def test_overflow_guard_large_prime():
    p = 2147483647
    f = PrimeField(p)
    a = f.array([[p - 1] * 4])
    b = f.array([[p - 1]] * 4)
    assert int(f.matmul(a, b)[0, 0]) == (4 * (p - 1) ** 2) % p


def test_field_from_spec_and_block_diag():
    assert field_from_spec({"kind": "prime", "p": 3}) == PrimeField(3)
    assert isinstance(field_from_spec("Q"), Rationals)
    f = PrimeField(3)
    bd = block_diag(f, [f.eye(1), f.zeros(0, 2), f.array([[2]])])
    assert bd.shape == (2, 4)
