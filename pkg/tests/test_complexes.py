import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from comproj.complexes import (
    ComplexPoint,
    DimArray,
    HomProjSpace,
    StratumPossiblyEmpty,
    check_kernel_projective,
    copy_map,
    homology_rep,
    random_complex,
    random_complex_fixed_rank,
    rank_profile,
    strata_profile,
    validate_complex,
)
from comproj.representations import is_iso, projective_power

from conftest import TEST_ALGEBRAS, a2, a3_monomial

D4 = DimArray(3, 0, ((2, 2, 2), (2, 4, 1), (2, 3, 2)))
R4 = DimArray(3, 1, ((0, 2, 1), (0, 1, 1)))


def a2_point(lam, mu):
    alg = a2()
    d = DimArray(2, 0, ((1, 0), (1, 1)))
    space = HomProjSpace(alg, (1, 1), (1, 0))
    x = space.from_blocks({(0, 0): np.array([[[lam]]]), (0, 1): np.array([[[mu]]])})
    return ComplexPoint(alg, d, {1: x})


def test_dim_array_trims_and_indexes():
    d = DimArray(2, -1, ((0, 0), (1, 0), (0, 0)))
    assert d.start == 0 and d.vectors == ((1, 0),)
    assert d[5] == (0, 0) and d.support == (0, 0)
    assert DimArray(2) == DimArray(2, 3, ((0, 0),))


def test_hom_proj_dimension_and_zero_blocks():
    alg = a3_monomial()
    space = HomProjSpace(alg, (2, 4, 1), (2, 2, 2))
    theta = alg.cartan
    expected = sum((2, 4, 1)[a] * (2, 2, 2)[b] * theta[a, b] for a in range(3) for b in range(3))
    assert space.dim == expected
    shapes = {(b, a): shape for b, a, shape, _ in space.blocks}
    # no nonzero path 1 -> 3, and no paths from higher to lower vertices
    assert shapes[(0, 2)][2] == 0
    assert all(shapes[(b, a)][2] == 0 for b, a in [(1, 0), (2, 0), (2, 1)])
    assert HomProjSpace(alg, (0, 0, 0), (1, 1, 1)).dim == 0


def test_composite_through_middle_vertex_vanishes():
    alg = a3_monomial()
    x = HomProjSpace(alg, (0, 0, 1), (0, 1, 0)).from_blocks({(1, 2): np.array([[[1]]])})
    y = HomProjSpace(alg, (0, 1, 0), (1, 0, 0)).from_blocks({(0, 1): np.array([[[1]]])})
    assert not x.is_zero() and not y.is_zero()
    assert (y @ x).is_zero()


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(TEST_ALGEBRAS)), st.integers(0, 2**31))
def test_graded_round_trip_and_composition(name, seed):
    alg = TEST_ALGEBRAS[name]()
    rng = np.random.default_rng(seed)
    d, e, c = (tuple(int(v) for v in rng.integers(0, 3, alg.n)) for _ in range(3))
    f = HomProjSpace(alg, d, e).random(rng)
    g = HomProjSpace(alg, e, c).random(rng)
    fg = f.graded()
    assert fg.is_module_map()
    assert f.space.from_graded(fg).same_as(f)
    assert (g @ f).graded().same_as(g.graded() @ fg)
    post = f.space.post_composition_matrix(g)
    out = HomProjSpace(alg, d, c)
    assert out.element(alg.field.matmul(post, f.vector)).same_as(g @ f)


def test_copy_map_is_identity_on_copies():
    alg = a3_monomial()
    ident = copy_map(alg, (1, 1, 0), (1, 1, 0), [(0, 0, 0), (1, 0, 0)])
    assert ident.graded().same_as(ident.graded().identity(projective_power(alg, (1, 1, 0))))


def test_validate_complex_examples():
    alg = a2()
    d = DimArray(2, 0, ((1, 1), (1, 1), (1, 1)))
    assert validate_complex(ComplexPoint(alg, d)) is None
    ident = copy_map(alg, (1, 1), (1, 1), [(0, 0, 0), (1, 0, 0)])
    bad = validate_complex(ComplexPoint(alg, d, {1: ident, 2: ident}))
    assert bad is not None and "degree 2" in bad.where


def test_rank_profile_examples():
    assert rank_profile(a2_point(1, 0)) == DimArray(2, 1, ((1, 1),))
    assert rank_profile(a2_point(0, 1)) == DimArray(2, 1, ((0, 1),))
    assert rank_profile(ComplexPoint(a2(), DimArray(2, 0, ((1, 0), (1, 1))))) == DimArray(2)


def test_strata_profile_worked_example():
    prof = strata_profile(a3_monomial(), D4, R4)
    assert prof.feasible
    assert prof.indices == (1, 2, 3)
    assert all(prof.k[i] == (2, 4, 4) and prof.m[i] == (2, 2, 2) for i in prof.indices)
    assert [prof.h[i] for i in prof.indices] == [(2, 2, 3), (2, 3, 3), (2, 4, 4)]
    assert [row["homology_degree"] for row in prof.table()] == [0, 1, 2]


def test_strata_profile_zero_ranks_and_a2():
    alg = a3_monomial()
    prof = strata_profile(alg, D4, DimArray(3))
    for i in prof.indices:
        assert prof.k[i] == tuple(int(x) for x in alg.cartan @ np.array(D4[i - 1]))
        assert prof.h[i] == prof.k[i] and prof.m[i] == D4[i - 1]
    p = strata_profile(a2(), DimArray(2, 0, ((1, 0), (1, 1))), DimArray(2, 1, ((1, 1),)))
    assert (p.k[1], p.m[1], p.h[1]) == ((1, 1), (1, 0), (0, 0))
    assert (p.k[2], p.m[2], p.h[2]) == ((0, 1), (0, 1), (0, 1))


def test_strata_profile_infeasible():
    alg = a2()
    p = strata_profile(alg, DimArray(2, 0, ((1, 0), (1, 1))), DimArray(2, 1, ((2, 2),)))
    assert not p.feasible and "h_1" in p.reason
    p = strata_profile(alg, DimArray(2, 0, ((1, 0),)), DimArray(2, 0, ((1, 0),)))
    assert not p.feasible


def test_homology_examples():
    alg = a2()
    zero = ComplexPoint(alg, DimArray(2, 0, ((1, 0), (1, 1))))
    assert homology_rep(zero, 1).dim == (1, 2)
    x = a2_point(1, 3)
    assert homology_rep(x, 0).dim == (0, 0)
    h1 = homology_rep(x, 1)
    assert is_iso(h1, projective_power(alg, (0, 1)))


def test_kernel_projective_examples():
    x = a2_point(2, 0)
    verdicts = {v.degree: v for v in check_kernel_projective(x)}
    assert verdicts[1].projective and verdicts[1].multiplicities == (0, 1)
    zero = ComplexPoint(a3_monomial(), D4)
    for v in check_kernel_projective(zero):
        assert v.projective and v.multiplicities == D4[v.degree]


def test_random_complex_single_degree_is_zero_map():
    alg = a3_monomial()
    x = random_complex(alg, DimArray(3, 4, ((1, 2, 0),)), seed=1)
    assert list(x.degrees) == []
    assert rank_profile(x) == DimArray(3)


def test_fixed_rank_sampler_worked_example():
    alg = a3_monomial()
    prof = strata_profile(alg, D4, R4)
    x = random_complex_fixed_rank(alg, prof, seed=11)
    assert validate_complex(x) is None
    assert rank_profile(x) == R4


def test_fixed_rank_sampler_a2():
    alg = a2()
    prof = strata_profile(alg, DimArray(2, 0, ((1, 0), (1, 1))), DimArray(2, 1, ((1, 1),)))
    for seed in range(10):
        x = random_complex_fixed_rank(alg, prof, seed=seed)
        assert x.differential(1).block(0, 0)[0, 0, 0] != 0


def test_fixed_rank_sampler_reports_empty_stratum():
    # a nonzero map P_1 -> P_1 is onto, so rank (1, 0) never occurs although
    # the numeric conditions hold
    alg = a2()
    prof = strata_profile(alg, DimArray(2, 0, ((1, 0), (1, 0))), DimArray(2, 1, ((1, 0),)))
    assert prof.feasible
    with pytest.raises(StratumPossiblyEmpty, match="possibly empty"):
        random_complex_fixed_rank(alg, prof, seed=0, budget=20)
