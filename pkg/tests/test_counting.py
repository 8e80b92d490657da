import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import GF, Matrix
from sympy.polys.matrices import DomainMatrix

from comproj.complexes import ComplexPoint, DimArray, HomProjSpace, rank_profile, validate_complex
from comproj.counting import CountBudgetExceeded, batched_rank_mod_p, count_points, interpolate
from comproj.linalg import PrimeField

from conftest import a2, a3_monomial


def sympy_rank(m, p):
    return DomainMatrix.from_Matrix(Matrix(m.tolist())).convert_to(GF(p)).rank()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(0, 5), st.integers(0, 5), st.integers(0, 2**32 - 1))
def test_batched_rank_matches_sympy(p, rows, cols, seed):
    rng = np.random.default_rng(seed)
    mats = rng.integers(0, p, size=(6, rows, cols))
    mats[0] = 0
    if rows and cols:
        mats[1] = np.outer(mats[1][:, 0], mats[1][0])
    got = batched_rank_mod_p(mats, p)
    assert [int(x) for x in got] == [sympy_rank(m, p) if rows and cols else 0 for m in mats]


def test_interpolate_exact():
    assert interpolate([2, 3, 5], [2, 6, 20]) == [0, -1, 1]
    assert interpolate([2, 3], [1, 1]) == [1]
    assert interpolate([1, 2, 4], [Fraction(1, 2), 2, 8]) == [0, 0, Fraction(1, 2)]


def brute_force(alg, d, p):
    algp = alg.with_field(PrimeField(p))
    degrees = list(ComplexPoint(algp, d).degrees)
    spaces = [HomProjSpace(algp, d[i], d[i - 1]) for i in degrees]
    bins = {}
    for coords in itertools.product(range(p), repeat=sum(s.dim for s in spaces)):
        diffs, off = {}, 0
        for i, s in zip(degrees, spaces):
            diffs[i] = s.element(list(coords[off : off + s.dim]))
            off += s.dim
        x = ComplexPoint(algp, d, diffs)
        if validate_complex(x) is None:
            key = rank_profile(x)
            bins[key] = bins.get(key, 0) + 1
    return bins


def test_a2_counts():
    d = DimArray(2, 0, ((1, 0), (1, 1)))
    rep = count_points(a2(), d, [2, 3, 5])
    assert rep.coordinates == 2 and rep.totals == {2: 4, 3: 9, 5: 25}
    top = rep.stratum(DimArray(2, 1, ((1, 1),)))
    assert top.coefficients == (0, -1, 1) and top.determined
    assert rep.stratum(DimArray(2, 1, ((0, 1),))).polynomial() == "q - 1"
    assert rep.stratum(DimArray(2)).polynomial() == "1"


@pytest.mark.parametrize("p", [2, 3])
def test_counts_match_brute_force(p):
    alg = a3_monomial()
    d = DimArray(3, 0, ((1, 1, 0), (1, 1, 1), (0, 1, 1)))
    rep = count_points(alg, d, [p], chunk=37)
    expected = brute_force(alg, d, p)
    got = {s.rank_array(3): s.counts[p] for s in rep.strata}
    assert got == expected
    assert rep.totals[p] == sum(expected.values())


def test_underdetermined_flag():
    rep = count_points(a2(), DimArray(2, 0, ((1, 0), (1, 1))), [2, 3])
    assert rep.coordinates == 2
    assert not any(s.determined for s in rep.strata)


def test_count_budget():
    with pytest.raises(CountBudgetExceeded):
        count_points(a3_monomial(), DimArray(3, 0, ((2, 2, 2), (2, 4, 1))), [5], budget=1000)
